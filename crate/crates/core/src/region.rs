//! Exhaustive triangulation of small lattice regions bounded above by a chain.
//!
//! A fine triangulation of a lattice region is the same thing as a choice of one
//! primitive segment through every half-integral, non-integral point of the
//! region, with no two segments crossing. This module backtracks over exactly
//! that description. It is exponential and meant for small regions, where it
//! serves as an independent reference for the recursions and the shape DP.

use std::collections::HashSet;

use num_integer::Integer;

use crate::count::BigCount;
use crate::error::{Error, Result};
use crate::geometry::{orient, segments_cross, Edge, LatticePoint, Triangle};

/// The region `{(x, y) : 0 <= y <= U(x)}` under an x-monotone lattice chain.
///
/// Consecutive chain vertices with equal `x` form a vertical jump. The region
/// spans `x` from the first to the last vertex; the first vertex must have `x = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRegion {
    chain: Vec<LatticePoint>,
}

impl ChainRegion {
    pub fn new(chain: Vec<LatticePoint>) -> Result<Self> {
        if chain.is_empty() || chain[0].x != 0 {
            return Err(Error::Precondition("chain must start at x = 0".into()));
        }
        if chain.iter().any(|p| p.y < 0) {
            return Err(Error::Precondition("chain heights must be nonnegative".into()));
        }
        if chain.windows(2).any(|w| w[1].x < w[0].x || w[0] == w[1]) {
            return Err(Error::Precondition("chain must be x-monotone without repeated vertices".into()));
        }
        Ok(ChainRegion { chain })
    }

    /// The `m x n` rectangle.
    pub fn rectangle(m: u32, n: u32) -> Self {
        let (m, n) = (m as i32, n as i32);
        ChainRegion { chain: vec![LatticePoint::new(0, n), LatticePoint::new(m, n)] }
    }

    pub fn chain(&self) -> &[LatticePoint] {
        &self.chain
    }

    pub fn width(&self) -> i32 {
        self.chain.last().map_or(0, |p| p.x)
    }

    /// One-sided limits and maximum of `U` at the abscissa `num / den`.
    fn heights_at(&self, num: i64, den: i64) -> Option<Heights> {
        let x = |p: &LatticePoint| i64::from(p.x) * den;
        if num < 0 || num > x(self.chain.last()?) {
            return None;
        }
        let mut left: Option<Frac> = None;
        let mut right: Option<Frac> = None;
        let mut max: Option<Frac> = None;
        let bump = |f: Frac, max: &mut Option<Frac>| {
            if max.is_none_or(|m| f.gt(&m)) {
                *max = Some(f);
            }
        };
        for w in self.chain.windows(2) {
            let (p, q) = (w[0], w[1]);
            let (px, qx) = (x(&p), x(&q));
            if px == qx {
                if px == num {
                    bump(Frac::int(p.y), &mut max);
                    bump(Frac::int(q.y), &mut max);
                }
                continue;
            }
            if num < px || num > qx {
                continue;
            }
            // y = p.y + (q.y - p.y) (num/den - p.x) / (q.x - p.x)
            let span = i64::from(q.x - p.x) * den;
            let val = i64::from(p.y) * span + i64::from(q.y - p.y) * (num - px);
            let f = Frac { num: val, den: span };
            bump(f, &mut max);
            if num > px {
                left = Some(f);
            }
            if num < qx {
                right = Some(f);
            }
        }
        if self.chain.len() == 1 {
            bump(Frac::int(self.chain[0].y), &mut max);
        }
        Some(Heights { left, right, max: max? })
    }

    fn contains_point(&self, p: LatticePoint) -> bool {
        p.y >= 0 && self.heights_at(i64::from(p.x), 1).is_some_and(|h| !Frac::int(p.y).gt(&h.max))
    }

    /// Doubled-coordinate point membership.
    fn contains_doubled(&self, d: LatticePoint) -> bool {
        d.y >= 0 && self.heights_at(i64::from(d.x), 2).is_some_and(|h| !Frac { num: i64::from(d.y), den: 2 }.gt(&h.max))
    }

    /// True iff the closed segment `ab` (lattice endpoints) lies in the region.
    pub fn contains_segment(&self, a: LatticePoint, b: LatticePoint) -> bool {
        if !self.contains_point(a) || !self.contains_point(b) {
            return false;
        }
        let (p, q) = if a.x <= b.x { (a, b) } else { (b, a) };
        if p.x == q.x {
            return true;
        }
        let mut xs: Vec<i32> = self.chain.iter().map(|v| v.x).filter(|&x| x > p.x && x < q.x).collect();
        xs.push(p.x);
        xs.push(q.x);
        xs.sort_unstable();
        xs.dedup();
        let seg_y = |x: i32| Frac {
            num: i64::from(p.y) * i64::from(q.x - p.x) + i64::from(q.y - p.y) * i64::from(x - p.x),
            den: i64::from(q.x - p.x),
        };
        for w in xs.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (Some(hl), Some(hh)) = (self.heights_at(i64::from(lo), 1), self.heights_at(i64::from(hi), 1)) else {
                return false;
            };
            let (Some(ul), Some(uh)) = (hl.right, hh.left) else { return false };
            if seg_y(lo).gt(&ul) || seg_y(hi).gt(&uh) {
                return false;
            }
        }
        true
    }

    /// All lattice points of the region, row-major.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let top = self.chain.iter().map(|p| p.y).max().unwrap_or(0);
        let mut pts = Vec::new();
        for y in 0..=top {
            for x in 0..=self.width() {
                let p = LatticePoint::new(x, y);
                if self.contains_point(p) {
                    pts.push(p);
                }
            }
        }
        pts
    }

    fn build(&self) -> Search {
        let top = self.chain.iter().map(|p| p.y).max().unwrap_or(0);
        let pts = self.lattice_points();
        let point_set: HashSet<LatticePoint> = pts.iter().copied().collect();
        let mut slots = Vec::new();
        let mut cands: Vec<Edge> = Vec::new();
        for dy in 0..=2 * top {
            for dx in 0..=2 * self.width() {
                if dx % 2 == 0 && dy % 2 == 0 {
                    continue;
                }
                let mid = LatticePoint::new(dx, dy);
                if !self.contains_doubled(mid) {
                    continue;
                }
                let mut list = Vec::new();
                for &a in &pts {
                    let b = LatticePoint::new(mid.x - a.x, mid.y - a.y);
                    if b <= a || !point_set.contains(&b) {
                        continue;
                    }
                    let d = b.sub(a);
                    if d.x.gcd(&d.y) == 1 && self.contains_segment(a, b) {
                        list.push(cands.len());
                        cands.push(Edge::new_unchecked(a, b));
                    }
                }
                slots.push(list);
            }
        }
        let k = cands.len();
        let mut conflicts = vec![Vec::new(); k];
        for i in 0..k {
            for j in i + 1..k {
                let (e, f) = (cands[i], cands[j]);
                if segments_cross(e.a(), e.b(), f.a(), f.b()) {
                    conflicts[i].push(j);
                    conflicts[j].push(i);
                }
            }
        }
        Search { slots, cands, conflicts, blocked: vec![0; k], chosen: Vec::new() }
    }

    /// Number of fine (equivalently unimodular) triangulations.
    pub fn count(&self) -> BigCount {
        let mut n: u64 = 0;
        self.build().run(0, &mut |_| n += 1);
        BigCount::from(n)
    }

    /// Visits every triangulation as its list of edges (boundary included).
    pub fn for_each_edge_set(&self, mut f: impl FnMut(&[Edge])) {
        let mut search = self.build();
        let cands = search.cands.clone();
        let mut buf = Vec::new();
        search.run(0, &mut |chosen: &[usize]| {
            buf.clear();
            buf.extend(chosen.iter().map(|&c| cands[c]));
            f(&buf);
        });
    }

    /// Visits every triangulation as its sorted triangle list.
    pub fn for_each_triangulation(&self, mut f: impl FnMut(&[Triangle])) {
        self.for_each_edge_set(|edges| f(&triangles_of(edges)));
    }
}

/// Recovers the unimodular triangles of a fine triangulation from its edges.
pub fn triangles_of(edges: &[Edge]) -> Vec<Triangle> {
    let set: HashSet<Edge> = edges.iter().copied().collect();
    let mut adj: std::collections::HashMap<LatticePoint, Vec<LatticePoint>> = std::collections::HashMap::new();
    for e in edges {
        adj.entry(e.a()).or_default().push(e.b());
        adj.entry(e.b()).or_default().push(e.a());
    }
    let mut out = Vec::new();
    for e in edges {
        for &c in &adj[&e.a()] {
            if c > e.b() && orient(e.a(), e.b(), c).abs() == 1 && set.contains(&Edge::new_unchecked(e.b(), c)) {
                out.push(Triangle::new_unchecked(e.a(), e.b(), c));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i64,
    den: i64,
}

impl Frac {
    fn int(v: i32) -> Self {
        Frac { num: i64::from(v), den: 1 }
    }

    fn gt(&self, other: &Frac) -> bool {
        i128::from(self.num) * i128::from(other.den) > i128::from(other.num) * i128::from(self.den)
    }
}

struct Heights {
    left: Option<Frac>,
    right: Option<Frac>,
    max: Frac,
}

struct Search {
    slots: Vec<Vec<usize>>,
    cands: Vec<Edge>,
    conflicts: Vec<Vec<usize>>,
    blocked: Vec<u32>,
    chosen: Vec<usize>,
}

impl Search {
    fn run(&mut self, slot: usize, f: &mut impl FnMut(&[usize])) {
        if slot == self.slots.len() {
            f(&self.chosen);
            return;
        }
        for idx in 0..self.slots[slot].len() {
            let c = self.slots[slot][idx];
            if self.blocked[c] > 0 {
                continue;
            }
            for &o in &self.conflicts[c] {
                self.blocked[o] += 1;
            }
            self.chosen.push(c);
            self.run(slot + 1, f);
            self.chosen.pop();
            for &o in &self.conflicts[c] {
                self.blocked[o] -= 1;
            }
        }
    }
}
