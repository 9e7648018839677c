//! Unimodular triangulations of a grid: validation, flips, keys and the JSON format.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{orient, Edge, LatticePoint, Triangle};
use crate::grid::GridSpec;

/// A set of unimodular triangles over a grid, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    grid: GridSpec,
    triangles: Vec<Triangle>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TriangleCount {
        expected: u64,
        found: u64,
    },
    OutOfBounds(Triangle),
    Degenerate(Triangle),
    NotUnimodular(Triangle),
    Duplicate(Triangle),
    Overlap(Triangle, Triangle),
    /// An interior edge with a single incident triangle: the union leaves a gap.
    CoverageGap(Edge),
    /// An edge with too many incident triangles, or two on the same side.
    EdgeMisuse(Edge),
    MissingVertex(LatticePoint),
    Area {
        expected: u64,
        found: u64,
    },
    EdgeCount {
        expected: u64,
        found: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TriangleCount { expected, found } => {
                write!(f, "triangle count {found}, expected {expected}")
            }
            Violation::OutOfBounds(t) => write!(f, "triangle {t} leaves the grid"),
            Violation::Degenerate(t) => write!(f, "triangle {t} is degenerate"),
            Violation::NotUnimodular(t) => write!(f, "triangle {t} is not unimodular"),
            Violation::Duplicate(t) => write!(f, "triangle {t} listed twice"),
            Violation::Overlap(a, b) => write!(f, "triangles {a} and {b} overlap"),
            Violation::CoverageGap(e) => write!(f, "interior edge {e} has one incident triangle"),
            Violation::EdgeMisuse(e) => write!(f, "edge {e} is incident to inconsistent triangles"),
            Violation::MissingVertex(p) => write!(f, "grid point {p} is not a vertex"),
            Violation::Area { expected, found } => {
                write!(f, "doubled area {found}, expected {expected}")
            }
            Violation::EdgeCount { expected, found } => {
                write!(f, "edge count {found}, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl Triangulation {
    /// Wraps a triangle list without validating it.
    pub fn from_triangles(grid: GridSpec, mut triangles: Vec<Triangle>) -> Self {
        triangles.sort_unstable();
        Triangulation { grid, triangles }
    }

    /// Wraps and validates.
    pub fn new(grid: GridSpec, triangles: Vec<Triangle>) -> Result<Self> {
        let t = Self::from_triangles(grid, triangles);
        let report = t.validate();
        if !report.valid {
            return Err(Error::InvalidTriangulation(
                report.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            ));
        }
        Ok(t)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// The deterministic start triangulation: every unit cell cut by its SW-NE diagonal.
    pub fn initial(grid: GridSpec) -> Self {
        let mut triangles = Vec::with_capacity(grid.triangle_count() as usize);
        for y in 0..grid.n() as i32 {
            for x in 0..grid.m() as i32 {
                let sw = LatticePoint::new(x, y);
                let se = LatticePoint::new(x + 1, y);
                let ne = LatticePoint::new(x + 1, y + 1);
                let nw = LatticePoint::new(x, y + 1);
                triangles.push(Triangle::new_unchecked(sw, se, ne));
                triangles.push(Triangle::new_unchecked(sw, ne, nw));
            }
        }
        Self::from_triangles(grid, triangles)
    }

    fn on_boundary(&self, e: &Edge) -> bool {
        let (a, b) = (e.a(), e.b());
        let (m, n) = (self.grid.m() as i32, self.grid.n() as i32);
        (a.x == b.x && (a.x == 0 || a.x == m)) || (a.y == b.y && (a.y == 0 || a.y == n))
    }

    /// Every edge with its incident apexes.
    pub fn edge_apexes(&self) -> HashMap<Edge, Vec<LatticePoint>> {
        let mut map: HashMap<Edge, Vec<LatticePoint>> = HashMap::with_capacity(self.triangles.len() * 2);
        for t in &self.triangles {
            let [a, b, c] = t.vertices();
            for (u, v, w) in [(a, b, c), (b, c, a), (a, c, b)] {
                if u == v {
                    continue;
                }
                map.entry(Edge::new_unchecked(u, v)).or_default().push(w);
            }
        }
        map
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self.edge_apexes().into_keys().collect();
        edges.sort_unstable();
        edges
    }

    /// Interior edges with their two apexes, in edge order.
    pub fn interior_edges(&self) -> Vec<(Edge, [LatticePoint; 2])> {
        let mut out: Vec<_> =
            self.edge_apexes().into_iter().filter(|(_, ap)| ap.len() == 2).map(|(e, ap)| (e, [ap[0], ap[1]])).collect();
        out.sort_unstable_by_key(|(e, _)| *e);
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let g = self.grid;
        let mut violations = Vec::new();
        let found = self.triangles.len() as u64;
        if found != g.triangle_count() {
            violations.push(Violation::TriangleCount { expected: g.triangle_count(), found });
        }
        let mut area = 0u64;
        let mut seen = HashSet::with_capacity(self.triangles.len());
        let mut geometric_ok = true;
        for t in &self.triangles {
            let [a, b, c] = t.vertices();
            if ![a, b, c].iter().all(|&p| g.contains(p)) {
                violations.push(Violation::OutOfBounds(*t));
                geometric_ok = false;
            }
            if a == b || b == c || orient(a, b, c) == 0 {
                violations.push(Violation::Degenerate(*t));
                geometric_ok = false;
                continue;
            }
            if !t.is_unimodular() {
                violations.push(Violation::NotUnimodular(*t));
            }
            area += t.doubled_area() as u64;
            if !seen.insert(*t) {
                violations.push(Violation::Duplicate(*t));
            }
        }
        let expected_area = 2 * u64::from(g.m()) * u64::from(g.n());
        if area != expected_area {
            violations.push(Violation::Area { expected: expected_area, found: area });
        }

        let apexes = self.edge_apexes();
        for (e, ap) in &apexes {
            let boundary = self.on_boundary(e);
            let ok = match (boundary, ap.len()) {
                (true, 1) => true,
                (false, 2) => orient(e.a(), e.b(), ap[0]).signum() * orient(e.a(), e.b(), ap[1]).signum() < 0,
                (false, 1) => {
                    violations.push(Violation::CoverageGap(*e));
                    continue;
                }
                _ => false,
            };
            if !ok {
                violations.push(Violation::EdgeMisuse(*e));
            }
        }
        if apexes.len() as u64 != g.edge_count() {
            violations.push(Violation::EdgeCount { expected: g.edge_count(), found: apexes.len() as u64 });
        }

        if geometric_ok {
            let mut by_x: Vec<(i32, i32, Triangle)> = seen
                .iter()
                .map(|t| {
                    let (lo, hi) = t.x_range();
                    (lo, hi, *t)
                })
                .collect();
            by_x.sort_unstable();
            for i in 0..by_x.len() {
                let (_, hi, t) = by_x[i];
                for &(lo2, _, u) in &by_x[i + 1..] {
                    if lo2 >= hi {
                        break;
                    }
                    if t.interiors_overlap(&u) {
                        violations.push(Violation::Overlap(t, u));
                    }
                }
            }
        }

        let vertices: HashSet<LatticePoint> = self.triangles.iter().flat_map(|t| t.vertices()).collect();
        for p in g.points() {
            if !vertices.contains(&p) {
                violations.push(Violation::MissingVertex(p));
            }
        }
        ValidationReport { valid: violations.is_empty(), violations }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidTriangulation(report.violations[0].to_string()))
        }
    }

    /// Interior edges whose two triangles form a strictly convex quadrilateral.
    pub fn flippable_edges(&self) -> Result<Vec<Edge>> {
        self.require_valid()?;
        Ok(self
            .interior_edges()
            .into_iter()
            .filter(|(e, [c, d])| is_strictly_convex_quad(e.a(), e.b(), *c, *d))
            .map(|(e, _)| e)
            .collect())
    }

    /// Replaces the two triangles at `e` by the two on the other diagonal.
    pub fn flip(&self, e: &Edge) -> Result<Triangulation> {
        let incident: Vec<(usize, LatticePoint)> =
            self.triangles.iter().enumerate().filter_map(|(i, t)| t.apex(e).map(|ap| (i, ap))).collect();
        let [(i, c), (j, d)] = incident[..] else {
            return Err(Error::NotFlippable(*e));
        };
        if !is_strictly_convex_quad(e.a(), e.b(), c, d) {
            return Err(Error::NotFlippable(*e));
        }
        let mut triangles = self.triangles.clone();
        triangles[i] = Triangle::new_unchecked(c, d, e.a());
        triangles[j] = Triangle::new_unchecked(c, d, e.b());
        Ok(Self::from_triangles(self.grid, triangles))
    }

    /// Sorted-triangle serialization; equal keys iff equal triangle sets.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(8 + self.triangles.len() * 24);
        key.extend_from_slice(&self.grid.m().to_be_bytes());
        key.extend_from_slice(&self.grid.n().to_be_bytes());
        for t in &self.triangles {
            for v in t.vertices() {
                // row-major byte order so keys sort like triangles
                key.extend_from_slice(&(v.y as u32).to_be_bytes());
                key.extend_from_slice(&(v.x as u32).to_be_bytes());
            }
        }
        key
    }

    /// Maximum and mean Euclidean edge length.
    pub fn edge_length_stats(&self) -> (f64, f64) {
        let edges = self.edges();
        let mut max = 0.0f64;
        let mut sum = 0.0;
        for e in &edges {
            let l = e.length();
            max = max.max(l);
            sum += l;
        }
        (max, sum / edges.len() as f64)
    }

    /// The canonical JSON encoding, byte-exact.
    pub fn to_json(&self) -> String {
        let mut s = format!("{{\"m\":{},\"n\":{},\"triangles\":[", self.grid.m(), self.grid.n());
        for (i, t) in self.triangles.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let [a, b, c] = t.vertices();
            s.push_str(&format!("[[{},{}],[{},{}],[{},{}]]", a.x, a.y, b.x, b.y, c.x, c.y));
        }
        s.push_str("]}");
        s
    }

    /// Parses the JSON encoding; triangles may appear in any order.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            m: u32,
            n: u32,
            triangles: Vec<[[i32; 2]; 3]>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let grid = GridSpec::new(raw.m, raw.n)?;
        let triangles = raw
            .triangles
            .iter()
            .map(|[a, b, c]| {
                Triangle::from_vertices_raw(
                    LatticePoint::new(a[0], a[1]),
                    LatticePoint::new(b[0], b[1]),
                    LatticePoint::new(c[0], c[1]),
                )
            })
            .collect();
        Ok(Self::from_triangles(grid, triangles))
    }
}

/// True iff `a c b d` is a strictly convex quadrilateral with diagonal `ab`.
pub fn is_strictly_convex_quad(a: LatticePoint, b: LatticePoint, c: LatticePoint, d: LatticePoint) -> bool {
    let s1 = orient(a, b, c).signum();
    let s2 = orient(a, b, d).signum();
    let s3 = orient(c, d, a).signum();
    let s4 = orient(c, d, b).signum();
    s1 * s2 < 0 && s3 * s4 < 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i32, y: i32) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn tri(a: (i32, i32), b: (i32, i32), c: (i32, i32)) -> Triangle {
        Triangle::from_vertices_raw(p(a.0, a.1), p(b.0, b.1), p(c.0, c.1))
    }

    #[test]
    fn unit_square_is_valid() {
        let g = GridSpec::new(1, 1).unwrap();
        let t = Triangulation::from_triangles(g, vec![tri((0, 0), (1, 0), (1, 1)), tri((0, 0), (1, 1), (0, 1))]);
        assert!(t.validate().valid);
        assert_eq!(t, Triangulation::initial(g));
    }

    #[test]
    fn single_triangle_is_invalid() {
        let g = GridSpec::new(1, 1).unwrap();
        let t = Triangulation::from_triangles(g, vec![tri((0, 0), (1, 0), (0, 1))]);
        let r = t.validate();
        assert!(!r.valid);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::TriangleCount { .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::CoverageGap(_))));
        assert!(r.violations.contains(&Violation::MissingVertex(p(1, 1))));
    }

    #[test]
    fn overlapping_triangles_reported() {
        let g = GridSpec::new(1, 1).unwrap();
        let t = Triangulation::from_triangles(g, vec![tri((0, 0), (1, 0), (1, 1)), tri((0, 0), (1, 0), (0, 1))]);
        let r = t.validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Overlap(..))));
    }

    #[test]
    fn initial_two_by_two() {
        let g = GridSpec::new(2, 2).unwrap();
        let t = Triangulation::initial(g);
        assert!(t.validate().valid);
        assert_eq!(t.triangles().len(), 8);
        assert_eq!(t.edges().len(), 16);
        for e in t.edges() {
            let d = e.b().sub(e.a());
            assert!(d == p(1, 0) || d == p(0, 1) || d == p(1, 1), "{e}");
        }
    }

    #[test]
    fn unit_square_flip() {
        let g = GridSpec::new(1, 1).unwrap();
        let t = Triangulation::initial(g);
        let diag = Edge::new(p(0, 0), p(1, 1)).unwrap();
        assert_eq!(t.flippable_edges().unwrap(), vec![diag]);
        let u = t.flip(&diag).unwrap();
        assert!(u.validate().valid);
        assert_ne!(u, t);
        let back = u.flip(&Edge::new(p(1, 0), p(0, 1)).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(t.flip(&Edge::new(p(0, 0), p(1, 0)).unwrap()).is_err());
    }

    #[test]
    fn edge_stats_unit_square() {
        let t = Triangulation::initial(GridSpec::new(1, 1).unwrap());
        let (max, mean) = t.edge_length_stats();
        assert!((max - 2f64.sqrt()).abs() < 1e-15);
        assert!((mean - (4.0 + 2f64.sqrt()) / 5.0).abs() < 1e-15);
    }

    #[test]
    fn json_layout_is_exact() {
        let t = Triangulation::initial(GridSpec::new(1, 1).unwrap());
        assert_eq!(t.to_json(), r#"{"m":1,"n":1,"triangles":[[[0,0],[1,0],[1,1]],[[0,0],[0,1],[1,1]]]}"#);
        assert_eq!(Triangulation::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn keys_distinguish_square_triangulations() {
        let t = Triangulation::initial(GridSpec::new(1, 1).unwrap());
        let u = t.flip(&Edge::new(p(0, 0), p(1, 1)).unwrap()).unwrap();
        assert_ne!(t.canonical_key(), u.canonical_key());
        let rebuilt = Triangulation::from_triangles(t.grid(), t.triangles().iter().rev().copied().collect());
        assert_eq!(rebuilt.canonical_key(), t.canonical_key());
    }
}
