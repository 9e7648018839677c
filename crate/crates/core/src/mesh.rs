//! Midpoint-indexed edge structures.
//!
//! Every interior edge of a unimodular triangulation has a half-integral,
//! non-integral midpoint, and each such interior point is the midpoint of
//! exactly one edge. A flip keeps the midpoint and turns the edge into the
//! other diagonal of a lattice parallelogram. Both structures here index
//! edges by their midpoint.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geometry::{orient, Edge, LatticePoint, Triangle};
use crate::grid::GridSpec;
use crate::triangulation::Triangulation;

const NO_SLOT: u32 = u32::MAX;

/// Maps doubled interior midpoints to dense indices.
#[derive(Clone, Debug)]
pub struct MidpointIndex {
    grid: GridSpec,
    stride: usize,
    slots: Vec<u32>,
    midpoints: Vec<LatticePoint>,
}

impl MidpointIndex {
    pub fn new(grid: GridSpec) -> Self {
        let (w, h) = (2 * grid.m() as usize + 1, 2 * grid.n() as usize + 1);
        let mut slots = vec![NO_SLOT; w * h];
        let mut midpoints = Vec::with_capacity(grid.interior_edge_count() as usize);
        for y in 0..h as i32 {
            for x in 0..w as i32 {
                let d = LatticePoint::new(x, y);
                if (x % 2 == 0 && y % 2 == 0) || grid.doubled_on_boundary(d) {
                    continue;
                }
                slots[y as usize * w + x as usize] = midpoints.len() as u32;
                midpoints.push(d);
            }
        }
        debug_assert_eq!(midpoints.len() as u64, grid.interior_edge_count());
        MidpointIndex { grid, stride: w, slots, midpoints }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.midpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.midpoints.is_empty()
    }

    /// Doubled midpoint of slot `i`.
    pub fn midpoint(&self, i: usize) -> LatticePoint {
        self.midpoints[i]
    }

    /// Slot of the segment `ab`, if its midpoint is an interior half-integral point.
    #[inline]
    pub fn slot(&self, a: LatticePoint, b: LatticePoint) -> Option<usize> {
        let d = a.add(b);
        let s = self.slots[d.y as usize * self.stride + d.x as usize];
        (s != NO_SLOT).then_some(s as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct MeshEdge {
    a: LatticePoint,
    b: LatticePoint,
    apex: [LatticePoint; 2],
}

/// A mutable triangulation stored as interior edges with their apexes.
///
/// Flips update six slots in place.
#[derive(Clone, Debug)]
pub struct FlipMesh {
    index: MidpointIndex,
    edges: Vec<MeshEdge>,
}

impl FlipMesh {
    pub fn from_triangulation(t: &Triangulation) -> Result<Self> {
        let index = MidpointIndex::new(t.grid());
        let placeholder = LatticePoint::new(-1, -1);
        let mut edges = vec![MeshEdge { a: placeholder, b: placeholder, apex: [placeholder; 2] }; index.len()];
        let mut filled = vec![0u8; index.len()];
        for tri in t.triangles() {
            let [p, q, r] = tri.vertices();
            for (u, v, w) in [(p, q, r), (q, r, p), (p, r, q)] {
                let Some(s) = index.slot(u, v) else { continue };
                if filled[s] == 2 {
                    return Err(Error::InvalidTriangulation(format!("edge {u}-{v} used three times")));
                }
                if filled[s] == 1 && (edges[s].a, edges[s].b) != (u.min(v), u.max(v)) {
                    return Err(Error::InvalidTriangulation(format!("two edges share the midpoint of {u}-{v}")));
                }
                edges[s].a = u.min(v);
                edges[s].b = u.max(v);
                edges[s].apex[filled[s] as usize] = w;
                filled[s] += 1;
            }
        }
        if filled.iter().any(|&f| f != 2) {
            return Err(Error::InvalidTriangulation("interior midpoint without a complete edge".into()));
        }
        Ok(FlipMesh { index, edges })
    }

    pub fn grid(&self) -> GridSpec {
        self.index.grid()
    }

    pub fn index(&self) -> &MidpointIndex {
        &self.index
    }

    pub fn interior_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> Edge {
        Edge::new_unchecked(self.edges[i].a, self.edges[i].b)
    }

    pub fn apexes(&self, i: usize) -> [LatticePoint; 2] {
        self.edges[i].apex
    }

    /// Unimodular flips happen exactly in lattice parallelograms.
    #[inline]
    pub fn is_flippable(&self, i: usize) -> bool {
        let e = &self.edges[i];
        e.a.add(e.b) == e.apex[0].add(e.apex[1])
    }

    /// Flips slot `i`; returns false (and does nothing) if it is not flippable.
    pub fn flip(&mut self, i: usize) -> bool {
        if !self.is_flippable(i) {
            return false;
        }
        let MeshEdge { a, b, apex: [c, d] } = self.edges[i];
        self.replace_apex(a, c, b, d);
        self.replace_apex(c, b, a, d);
        self.replace_apex(b, d, a, c);
        self.replace_apex(d, a, b, c);
        self.edges[i] = MeshEdge { a: c.min(d), b: c.max(d), apex: [a, b] };
        true
    }

    #[inline]
    fn replace_apex(&mut self, u: LatticePoint, v: LatticePoint, old: LatticePoint, new: LatticePoint) {
        if let Some(s) = self.index.slot(u, v) {
            let ap = &mut self.edges[s].apex;
            if ap[0] == old {
                ap[0] = new;
            } else {
                debug_assert_eq!(ap[1], old);
                ap[1] = new;
            }
        }
    }

    pub fn to_triangulation(&self) -> Triangulation {
        let mut triangles: Vec<Triangle> = Vec::with_capacity(self.edges.len() * 2);
        for e in &self.edges {
            for c in e.apex {
                triangles.push(Triangle::new_unchecked(e.a, e.b, c));
            }
        }
        triangles.sort_unstable();
        triangles.dedup();
        Triangulation::from_triangles(self.grid(), triangles)
    }

    /// Euclidean max and mean over all edges, boundary included.
    pub fn edge_length_stats(&self) -> (f64, f64) {
        let g = self.grid();
        let boundary = g.boundary_edge_count() as f64;
        let mut max: f64 = 1.0;
        let mut sum = boundary;
        for e in &self.edges {
            let d = e.b.sub(e.a);
            let l = f64::from(d.x).hypot(f64::from(d.y));
            max = max.max(l);
            sum += l;
        }
        (max, sum / (boundary + self.edges.len() as f64))
    }

    /// Mean Euclidean length of the interior edges alone.
    pub fn interior_edge_mean(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        let sum: f64 = self.edges.iter().map(|e| e.b.sub(e.a)).map(|d| f64::from(d.x).hypot(f64::from(d.y))).sum();
        sum / self.edges.len() as f64
    }
}

/// Per-midpoint candidate edges, used to store triangulations as short codes.
#[derive(Clone, Debug)]
pub struct CodeSpace {
    index: MidpointIndex,
    candidates: Vec<Vec<Edge>>,
}

impl CodeSpace {
    pub fn new(grid: GridSpec) -> Result<Self> {
        let index = MidpointIndex::new(grid);
        let (m, n) = (grid.m() as i32, grid.n() as i32);
        let mut candidates = Vec::with_capacity(index.len());
        for i in 0..index.len() {
            let mid = index.midpoint(i);
            let mut list = Vec::new();
            for dy in 0..=2 * n {
                for dx in -2 * m..=2 * m {
                    if (dy == 0 && dx <= 0) || (dx - mid.x) % 2 != 0 || (dy - mid.y) % 2 != 0 {
                        continue;
                    }
                    if dx.gcd(&dy) != 1 {
                        continue;
                    }
                    let a = LatticePoint::new((mid.x - dx) / 2, (mid.y - dy) / 2);
                    let b = LatticePoint::new((mid.x + dx) / 2, (mid.y + dy) / 2);
                    if grid.contains(a) && grid.contains(b) {
                        list.push(Edge::new_unchecked(a, b));
                    }
                }
            }
            list.sort_unstable();
            if list.len() > usize::from(u8::MAX) {
                return Err(Error::Budget(format!("grid {grid} too large for byte codes")));
            }
            candidates.push(list);
        }
        Ok(CodeSpace { index, candidates })
    }

    pub fn grid(&self) -> GridSpec {
        self.index.grid()
    }

    pub fn code_len(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self, slot: usize) -> &[Edge] {
        &self.candidates[slot]
    }

    pub fn encode(&self, t: &Triangulation) -> Result<Vec<u8>> {
        let mut code = vec![u8::MAX; self.code_len()];
        for e in t.edges() {
            if let Some(s) = self.index.slot(e.a(), e.b()) {
                let pos = self.candidates[s]
                    .binary_search(&e)
                    .map_err(|_| Error::InvalidTriangulation(format!("edge {e} is not primitive")))?;
                code[s] = pos as u8;
            }
        }
        if code.contains(&u8::MAX) {
            return Err(Error::InvalidTriangulation("missing interior edge".into()));
        }
        Ok(code)
    }

    #[inline]
    pub fn edge_at(&self, code: &[u8], slot: usize) -> Edge {
        self.candidates[slot][code[slot] as usize]
    }

    /// True iff `uv` is an edge of the coded triangulation.
    #[inline]
    pub fn has_edge(&self, code: &[u8], u: LatticePoint, v: LatticePoint) -> bool {
        let mid = u.add(v);
        if mid.x % 2 == 0 && mid.y % 2 == 0 {
            return false;
        }
        match self.index.slot(u, v) {
            Some(s) => {
                let e = self.edge_at(code, s);
                (e.a(), e.b()) == (u.min(v), u.max(v))
            }
            None => {
                let d = v.sub(u);
                d.x.abs() + d.y.abs() == 1
            }
        }
    }

    /// Calls `f` with every flip neighbour of `code`.
    pub fn for_each_neighbor(&self, code: &[u8], mut f: impl FnMut(Vec<u8>)) {
        for s in 0..code.len() {
            let cur = self.edge_at(code, s);
            let (a, b) = (cur.a(), cur.b());
            for (k, alt) in self.candidates[s].iter().enumerate() {
                if k == code[s] as usize {
                    continue;
                }
                let (c, d) = (alt.a(), alt.b());
                // the parallelogram must have area 1, otherwise its halves hold other vertices
                if orient(a, b, c).abs() == 1
                    && self.has_edge(code, a, c)
                    && self.has_edge(code, c, b)
                    && self.has_edge(code, b, d)
                    && self.has_edge(code, d, a)
                {
                    let mut next = code.to_vec();
                    next[s] = k as u8;
                    f(next);
                }
            }
        }
    }

    /// The apex of the triangle on side `side` (+1 left, -1 right) of `ab`.
    fn apex(&self, code: &[u8], a: LatticePoint, b: LatticePoint, side: i64) -> Option<LatticePoint> {
        let g = self.grid();
        let d = b.sub(a);
        // solve d.x * w.y - d.y * w.x = side
        let ext = i64::from(d.x).extended_gcd(&i64::from(-d.y));
        debug_assert_eq!(ext.gcd.abs(), 1);
        let scale = side * ext.gcd;
        let (wy, wx) = (ext.x * scale, ext.y * scale);
        let base = (i64::from(a.x) + wx, i64::from(a.y) + wy);
        let (lo, hi) = k_range(base, (i64::from(d.x), i64::from(d.y)), i64::from(g.m()), i64::from(g.n()))?;
        for k in lo..=hi {
            let c = LatticePoint::new((base.0 + k * i64::from(d.x)) as i32, (base.1 + k * i64::from(d.y)) as i32);
            if self.has_edge(code, a, c) && self.has_edge(code, b, c) {
                debug_assert_eq!(orient(a, b, c), side);
                return Some(c);
            }
        }
        None
    }

    pub fn decode_mesh(&self, code: &[u8]) -> FlipMesh {
        let edges = (0..code.len())
            .map(|s| {
                let e = self.edge_at(code, s);
                let (a, b) = (e.a(), e.b());
                let left = self.apex(code, a, b, 1).expect("coded triangulation is consistent");
                let right = self.apex(code, a, b, -1).expect("coded triangulation is consistent");
                MeshEdge { a, b, apex: [left, right] }
            })
            .collect();
        FlipMesh { index: self.index.clone(), edges }
    }

    pub fn decode(&self, code: &[u8]) -> Triangulation {
        self.decode_mesh(code).to_triangulation()
    }
}

/// Range of `k` keeping `base + k * step` inside `[0,m] x [0,n]`.
fn k_range(base: (i64, i64), step: (i64, i64), m: i64, n: i64) -> Option<(i64, i64)> {
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (b, s, max) in [(base.0, step.0, m), (base.1, step.1, n)] {
        if s == 0 {
            if b < 0 || b > max {
                return None;
            }
            continue;
        }
        // 0 <= b + k s <= max
        let (l, h) = if s > 0 {
            (Integer::div_ceil(&(-b), &s), Integer::div_floor(&(max - b), &s))
        } else {
            (Integer::div_ceil(&(max - b), &s), Integer::div_floor(&(-b), &s))
        };
        lo = lo.max(l);
        hi = hi.min(h);
    }
    (lo <= hi).then_some((lo, hi))
}
