//! Lattice points, primitive edges and unimodular triangles.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the integer lattice.
///
/// Points are ordered row-major: first by `y`, then by `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i32,
    pub y: i32,
}

impl LatticePoint {
    pub const fn new(x: i32, y: i32) -> Self {
        LatticePoint { x, y }
    }

    /// Componentwise sum; used for doubled midpoints.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + other.x, self.y + other.y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - other.x, self.y - other.y)
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `o, a, b`.
#[inline]
pub fn orient(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    let (ax, ay) = (i64::from(a.x - o.x), i64::from(a.y - o.y));
    let (bx, by) = (i64::from(b.x - o.x), i64::from(b.y - o.y));
    ax * by - ay * bx
}

/// True iff the open segments `ab` and `cd` cross in a single interior point.
pub fn segments_cross(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// A primitive lattice segment; endpoints stored in point order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    endpoints: [LatticePoint; 2],
}

impl Edge {
    pub fn new(a: LatticePoint, b: LatticePoint) -> Result<Self> {
        let d = b.sub(a);
        if d.x.gcd(&d.y) != 1 {
            return Err(Error::Geometry(format!("segment {a}-{b} is not primitive")));
        }
        Ok(Self::new_unchecked(a, b))
    }

    pub(crate) fn new_unchecked(a: LatticePoint, b: LatticePoint) -> Self {
        debug_assert_ne!(a, b);
        if a <= b {
            Edge { endpoints: [a, b] }
        } else {
            Edge { endpoints: [b, a] }
        }
    }

    pub fn a(&self) -> LatticePoint {
        self.endpoints[0]
    }

    pub fn b(&self) -> LatticePoint {
        self.endpoints[1]
    }

    pub fn endpoints(&self) -> [LatticePoint; 2] {
        self.endpoints
    }

    /// The midpoint in doubled coordinates.
    pub fn doubled_midpoint(&self) -> LatticePoint {
        self.endpoints[0].add(self.endpoints[1])
    }

    pub fn length(&self) -> f64 {
        let d = self.b().sub(self.a());
        f64::from(d.x).hypot(f64::from(d.y))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.endpoints[0], self.endpoints[1])
    }
}

/// A lattice triangle of area 1/2 with vertices in point order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    vertices: [LatticePoint; 3],
}

impl Triangle {
    pub fn new(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<Self> {
        if orient(a, b, c).abs() != 1 {
            return Err(Error::Geometry(format!("triangle {a} {b} {c} is not unimodular")));
        }
        Ok(Self::new_unchecked(a, b, c))
    }

    pub(crate) fn new_unchecked(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Self {
        let mut vertices = [a, b, c];
        vertices.sort_unstable();
        Triangle { vertices }
    }

    /// Builds the triangle without checking unimodularity; `validate` reports bad ones.
    pub fn from_vertices_raw(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Self {
        Self::new_unchecked(a, b, c)
    }

    pub fn vertices(&self) -> [LatticePoint; 3] {
        self.vertices
    }

    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.vertices;
        [Edge::new_unchecked(a, b), Edge::new_unchecked(b, c), Edge::new_unchecked(a, c)]
    }

    /// Twice the signed area with vertices in stored order.
    pub fn doubled_area(&self) -> i64 {
        let [a, b, c] = self.vertices;
        orient(a, b, c).abs()
    }

    pub fn is_unimodular(&self) -> bool {
        self.doubled_area() == 1
    }

    pub fn contains_vertex(&self, p: LatticePoint) -> bool {
        self.vertices.contains(&p)
    }

    /// The vertex not on `e`, if `e` is an edge of this triangle.
    pub fn apex(&self, e: &Edge) -> Option<LatticePoint> {
        let [a, b] = e.endpoints();
        if !self.contains_vertex(a) || !self.contains_vertex(b) {
            return None;
        }
        self.vertices.iter().copied().find(|&v| v != a && v != b)
    }

    pub fn x_range(&self) -> (i32, i32) {
        let xs = self.vertices.map(|v| v.x);
        (*xs.iter().min().unwrap(), *xs.iter().max().unwrap())
    }

    /// Integer barycentric coordinates of `p` (exact because the triangle is unimodular).
    pub fn barycentric(&self, p: LatticePoint) -> [i64; 3] {
        let [a, b, c] = self.vertices;
        let det = orient(a, b, c);
        debug_assert_eq!(det.abs(), 1);
        let la = orient(p, b, c) * det;
        let lb = orient(a, p, c) * det;
        let lc = orient(a, b, p) * det;
        [la, lb, lc]
    }

    /// True iff the two closed triangles have overlapping interiors.
    pub fn interiors_overlap(&self, other: &Triangle) -> bool {
        !(separated_by_edge_of(self, other) || separated_by_edge_of(other, self))
    }
}

fn separated_by_edge_of(t: &Triangle, other: &Triangle) -> bool {
    let v = t.vertices;
    for i in 0..3 {
        let (p, q, r) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
        let side = orient(p, q, r).signum();
        if other.vertices.iter().all(|&w| orient(p, q, w).signum() * side <= 0) {
            return true;
        }
    }
    false
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices;
        write!(f, "[{a} {b} {c}]")
    }
}
