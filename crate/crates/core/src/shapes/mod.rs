//! Shapes left over while dismantling a triangulation from the top.
//!
//! A shape is the region below an x-monotone lattice chain running from
//! `x = 0` to `x = m`. Its maximal triangles are the unimodular triangles that
//! sit directly under the chain; removing any interior-disjoint set of them
//! gives a subshape. Counting triangulations of the full rectangle then reduces
//! to an inclusion-exclusion over subshapes (see [`dp`]).

pub mod dp;
pub mod sample;

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::geometry::{orient, LatticePoint, Triangle};
use crate::grid::GridSpec;
use crate::region::ChainRegion;

pub use dp::{count_by_dp, count_by_dp_with, reachable_shapes, shape_census, DpOptions, DpReport, ShapeCounts};
pub use sample::{dp_sample, removal_distribution};

const PASS: u8 = u8::MAX;

/// Compact chain encoding: two height bytes per integer abscissa.
///
/// Byte pair `(left, right)` gives the chain height arriving at and leaving
/// `x`; both are `0xFF` when a segment passes over `x` without a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeKey(pub Box<[u8]>);

/// The region under an upper boundary chain inside the `m x n` grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleShape {
    grid: GridSpec,
    chain: Vec<LatticePoint>,
}

/// A parent/child pair of shapes and how many triangles separate them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshapeDelta {
    pub parent: ShapeKey,
    pub child: ShapeKey,
    pub removed_count: u32,
}

/// The part of the chain a maximal triangle occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Top {
    /// Two chain segments `p-q-r` with `q` above `pr`.
    Peak { q: LatticePoint },
    /// One chain segment `l-r` with the apex below it.
    Under { l: LatticePoint, r: LatticePoint, v: LatticePoint },
}

impl AdmissibleShape {
    /// The whole grid: chain along the top row.
    pub fn full(grid: GridSpec) -> Self {
        let n = grid.n() as i32;
        let chain = (0..=grid.m() as i32).map(|x| LatticePoint::new(x, n)).collect();
        AdmissibleShape { grid, chain }
    }

    /// The flat chain along `y = 0`; its only triangulation is empty.
    pub fn base(grid: GridSpec) -> Self {
        let chain = (0..=grid.m() as i32).map(|x| LatticePoint::new(x, 0)).collect();
        AdmissibleShape { grid, chain }
    }

    /// Builds a shape from every lattice point of its chain, left to right.
    pub fn from_chain(grid: GridSpec, chain: Vec<LatticePoint>) -> Result<Self> {
        let bad = |why: &str| Err(Error::Precondition(format!("bad chain: {why}")));
        let (m, n) = (grid.m() as i32, grid.n() as i32);
        if grid.n() >= u32::from(PASS) {
            return bad("grid too tall for shape keys");
        }
        if chain.first().map(|p| p.x) != Some(0) || chain.last().map(|p| p.x) != Some(m) {
            return bad("must run from x = 0 to x = m");
        }
        if chain.iter().any(|p| p.y < 0 || p.y > n) {
            return bad("heights leave the grid");
        }
        if chain.len() > 1 && (chain[0].x == chain[1].x || chain[chain.len() - 2].x == m) {
            return bad("vertical part on the grid side");
        }
        for w in chain.windows(2) {
            let d = w[1].sub(w[0]);
            if d.x < 0 {
                return bad("not x-monotone");
            }
            if d.x == 0 && d.y.abs() != 1 {
                return bad("vertical jump longer than 1");
            }
            if num_integer::Integer::gcd(&d.x, &d.y) != 1 {
                return bad("segment with an interior lattice point");
            }
        }
        for w in chain.windows(3) {
            if w[0].x == w[2].x {
                return bad("three vertices on one vertical");
            }
        }
        Ok(AdmissibleShape { grid, chain })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// All lattice points of the upper boundary, left to right.
    pub fn chain(&self) -> &[LatticePoint] {
        &self.chain
    }

    pub fn key(&self) -> ShapeKey {
        let m = self.grid.m() as usize;
        let mut bytes = vec![PASS; 2 * (m + 1)];
        for p in &self.chain {
            let x = p.x as usize;
            if bytes[2 * x] == PASS {
                bytes[2 * x] = p.y as u8;
            }
            bytes[2 * x + 1] = p.y as u8;
        }
        ShapeKey(bytes.into_boxed_slice())
    }

    pub fn from_key(grid: GridSpec, key: &ShapeKey) -> Self {
        let mut chain = Vec::with_capacity(key.0.len());
        for (x, pair) in key.0.chunks_exact(2).enumerate() {
            if pair[0] == PASS {
                continue;
            }
            chain.push(LatticePoint::new(x as i32, i32::from(pair[0])));
            if pair[1] != pair[0] {
                chain.push(LatticePoint::new(x as i32, i32::from(pair[1])));
            }
        }
        AdmissibleShape { grid, chain }
    }

    /// Height of the chain at `x = 0`.
    pub fn start_height(&self) -> i32 {
        self.chain[0].y
    }

    /// Twice the area.
    pub fn doubled_area(&self) -> i64 {
        self.chain.windows(2).map(|w| i64::from(w[1].x - w[0].x) * i64::from(w[0].y + w[1].y)).sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.doubled_area() == 0
    }

    /// The same region as a general chain region (for brute-force checks).
    pub fn region(&self) -> ChainRegion {
        ChainRegion::new(self.chain.clone()).expect("shape chains are valid regions")
    }

    /// Largest vertical step of the chain; at most 1 for every reachable shape.
    pub fn max_jump(&self) -> i32 {
        self.chain.windows(2).filter(|w| w[0].x == w[1].x).map(|w| (w[1].y - w[0].y).abs()).max().unwrap_or(0)
    }

    /// Abscissa of the rightmost upward jump, if any.
    pub fn last_up_jump(&self) -> Option<i32> {
        self.chain.windows(2).filter(|w| w[0].x == w[1].x && w[1].y > w[0].y).map(|w| w[0].x).max()
    }

    fn tops(&self) -> Vec<(Triangle, Top)> {
        let c = &self.chain;
        let mut out = Vec::new();
        for i in 0..c.len().saturating_sub(1) {
            let (l, r) = (c[i], c[i + 1]);
            if l.x == r.x {
                continue;
            }
            if i > 0
                && c[i - 1].x < l.x
                && orient(c[i - 1], r, l) == 1
                && clear_beyond(c, i - 1, -1)
                && clear_beyond(c, i + 1, 1)
            {
                out.push((Triangle::new_unchecked(c[i - 1], l, r), Top::Peak { q: l }));
            }
            let (w, h) = (i64::from(r.x - l.x), i64::from(r.y - l.y));
            for x in l.x..=r.x {
                let num = h * i64::from(x - l.x) - 1;
                if num.rem_euclid(w) != 0 {
                    continue;
                }
                let v = LatticePoint::new(x, l.y + num.div_euclid(w) as i32);
                if v.y < 0 {
                    continue;
                }
                // a vertical side must not have chain above it on the same line
                if x == l.x && i > 0 && c[i - 1].x == l.x && c[i - 1].y > l.y {
                    continue;
                }
                if x == r.x && i + 2 < c.len() && c[i + 2].x == r.x && c[i + 2].y > r.y {
                    continue;
                }
                if !clear_beyond(c, i, -1) || !clear_beyond(c, i + 1, 1) {
                    continue;
                }
                out.push((Triangle::new_unchecked(l, r, v), Top::Under { l, r, v }));
            }
        }
        out
    }

    /// Unimodular triangles inside the shape whose upper boundary lies on the chain.
    pub fn maximal_triangles(&self) -> Vec<Triangle> {
        let mut t: Vec<Triangle> = self.tops().into_iter().map(|(t, _)| t).collect();
        t.sort_unstable();
        t
    }

    fn apply(chain: &mut Vec<LatticePoint>, top: Top, m: i32) {
        match top {
            Top::Peak { q } => {
                let i = chain.iter().position(|&p| p == q).expect("peak on chain");
                chain.remove(i);
            }
            Top::Under { l, r, v } => {
                let i = chain.windows(2).position(|w| w[0] == l && w[1] == r).expect("segment on chain");
                chain.insert(i + 1, v);
                if v.x == l.x && i > 0 && chain[i - 1] == v {
                    chain.drain(i..i + 2);
                } else if v.x == r.x && i + 3 < chain.len() && chain[i + 3] == v {
                    chain.drain(i + 2..i + 4);
                }
            }
        }
        while chain.len() > 1 && chain[1].x == 0 {
            chain.remove(0);
        }
        while chain.len() > 1 && chain[chain.len() - 2].x == m {
            chain.pop();
        }
    }

    /// Removes an interior-disjoint set of maximal triangles.
    pub fn remove(&self, triangles: &[Triangle]) -> Result<AdmissibleShape> {
        let tops = self.tops();
        let mut chosen = Vec::with_capacity(triangles.len());
        for t in triangles {
            let Some(&(_, top)) = tops.iter().find(|(u, _)| u == t) else {
                return Err(Error::Precondition(format!("triangle {t} is not maximal in the shape")));
            };
            chosen.push((*t, top));
        }
        for (i, (a, _)) in chosen.iter().enumerate() {
            for (b, _) in &chosen[i + 1..] {
                if a.interiors_overlap(b) {
                    return Err(Error::Precondition(format!("triangles {a} and {b} overlap")));
                }
            }
        }
        let mut chain = self.chain.clone();
        for (_, top) in chosen {
            Self::apply(&mut chain, top, self.grid.m() as i32);
        }
        let child = AdmissibleShape { grid: self.grid, chain };
        debug_assert!(child.max_jump() <= 1, "vertical boundary longer than 1 in {child}");
        Ok(child)
    }

    /// Calls `f(child, removed)` for every nonempty interior-disjoint set of
    /// maximal triangles, optionally restricted to triangles right of `min_x`.
    pub(crate) fn for_each_subshape(&self, min_x: i32, mut f: impl FnMut(&AdmissibleShape, u32)) {
        let tops: Vec<(Triangle, Top)> = self.tops().into_iter().filter(|(t, _)| t.x_range().0 >= min_x).collect();
        let k = tops.len();
        assert!(k <= 64, "too many maximal triangles");
        let mut clash = vec![0u64; k];
        for i in 0..k {
            for j in i + 1..k {
                if tops[i].0.interiors_overlap(&tops[j].0) {
                    clash[i] |= 1 << j;
                    clash[j] |= 1 << i;
                }
            }
        }
        let m = self.grid.m() as i32;
        let mut scratch = self.clone();
        #[allow(clippy::too_many_arguments)]
        fn walk(
            tops: &[(Triangle, Top)],
            clash: &[u64],
            from: usize,
            blocked: u64,
            depth: u32,
            shape: &mut AdmissibleShape,
            m: i32,
            f: &mut dyn FnMut(&AdmissibleShape, u32),
        ) {
            for i in from..tops.len() {
                if blocked >> i & 1 == 1 {
                    continue;
                }
                let saved = shape.chain.clone();
                AdmissibleShape::apply(&mut shape.chain, tops[i].1, m);
                debug_assert!(shape.max_jump() <= 1, "vertical boundary longer than 1 in {shape}");
                f(shape, depth + 1);
                walk(tops, clash, i + 1, blocked | clash[i], depth + 1, shape, m, f);
                shape.chain = saved;
            }
        }
        walk(&tops, &clash, 0, 0, 0, &mut scratch, m, &mut f);
    }

    /// Every proper subshape with the number of triangles removed.
    pub fn admissible_subshapes(&self) -> Vec<SubshapeDelta> {
        let parent = self.key();
        let mut out = Vec::new();
        self.for_each_subshape(0, |child, removed| {
            out.push(SubshapeDelta { parent: parent.clone(), child: child.key(), removed_count: removed });
        });
        out
    }
}

impl fmt::Display for AdmissibleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.chain.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Whether a triangle ending at chain vertex `j` can avoid lying below a
/// neighbour across the vertical line through that vertex.
///
/// If the chain jumps up by one at `c[j]` on the side `dir`, the point above
/// `c[j]` belongs to triangles on the far side; the triangle is only maximal
/// when a single far-side triangle with a vertical edge can own that point,
/// which needs the far-side segment from the jump top to have width 1.
fn clear_beyond(c: &[LatticePoint], j: usize, dir: isize) -> bool {
    let w = c[j];
    let Some(&u) = c.get(j.wrapping_add_signed(dir)) else { return true };
    if u.x != w.x || u.y != w.y + 1 {
        return true;
    }
    c.get(j.wrapping_add_signed(2 * dir)).is_some_and(|far| (far.x - w.x).abs() == 1)
}

/// Vertical extent of a triangle on the line `x = at`.
fn extent(t: &Triangle, at: Ratio<i64>) -> Option<(Ratio<i64>, Ratio<i64>)> {
    let mut lo: Option<Ratio<i64>> = None;
    let mut hi: Option<Ratio<i64>> = None;
    let v = t.vertices();
    for (p, q) in [(v[0], v[1]), (v[1], v[2]), (v[0], v[2])] {
        let (px, qx) = (Ratio::from(i64::from(p.x)), Ratio::from(i64::from(q.x)));
        let ys: Vec<Ratio<i64>> = if p.x == q.x {
            if px == at {
                vec![Ratio::from(i64::from(p.y)), Ratio::from(i64::from(q.y))]
            } else {
                vec![]
            }
        } else {
            let (a, b) = if px < qx { (px, qx) } else { (qx, px) };
            if at < a || at > b {
                vec![]
            } else {
                let py = Ratio::from(i64::from(p.y));
                let slope = Ratio::new(i64::from(q.y - p.y), i64::from(q.x - p.x));
                vec![py + slope * (at - px)]
            }
        };
        for y in ys {
            lo = Some(lo.map_or(y, |l| l.min(y)));
            hi = Some(hi.map_or(y, |h| h.max(y)));
        }
    }
    Some((lo?, hi?))
}

/// True iff some vertical line meets `d1 \ d2` below `d2 \ d1`.
///
/// The triangles must meet in a common face (possibly empty).
pub fn precedes(d1: &Triangle, d2: &Triangle) -> Result<bool> {
    if d1.interiors_overlap(d2) {
        return Err(Error::Geometry(format!("triangles {d1} and {d2} overlap")));
    }
    let ((a1, b1), (a2, b2)) = (d1.x_range(), d2.x_range());
    let (lo, hi) = (a1.max(a2), b1.min(b2));
    if lo > hi {
        return Ok(false);
    }
    let at = Ratio::new(i64::from(lo) + i64::from(hi), 2);
    let (Some(e1), Some(e2)) = (extent(d1, at), extent(d2, at)) else {
        return Ok(false);
    };
    let contains = |a: &(Ratio<i64>, Ratio<i64>), b: &(Ratio<i64>, Ratio<i64>)| a.0 <= b.0 && b.1 <= a.1;
    if contains(&e1, &e2) || contains(&e2, &e1) {
        return Ok(false);
    }
    Ok(e1.0 + e1.1 < e2.0 + e2.1)
}
