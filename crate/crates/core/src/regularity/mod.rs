//! Regularity of triangulations and of partial configurations.
//!
//! A lifting `h` on the points is a witness of regularity when every point
//! lifts strictly above the plane of every lifted triangle it does not belong
//! to. All conditions are homogeneous integer inequalities `Σ c_i h(p_i) > 0`,
//! so a strict solution exists iff one with slack at least 1 does. Each row
//! annihilates affine functions, which lets the solver drop the equations of
//! three affinely independent points.
//!
//! For a full triangulation only the folds across interior edges are needed:
//! a piecewise linear function that is convex across every interior edge of
//! a convex region is convex.

mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{orient, Edge, LatticePoint, Triangle};
use crate::grid::GridSpec;
use crate::mesh::FlipMesh;
use crate::triangulation::Triangulation;
use simplex::Alternative;

/// Where a constraint row comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowSource {
    /// Convexity across an interior edge; `far` must lift above the plane of `near`.
    Fold {
        edge: Edge,
        near: LatticePoint,
        far: LatticePoint,
    },
    /// `point` must lift above the plane of `triangle`.
    Above {
        triangle: Triangle,
        point: LatticePoint,
    },
    Given,
}

impl fmt::Display for RowSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowSource::Fold { edge, near, far } => write!(f, "fold {edge}: {far} above plane of {near}"),
            RowSource::Above { triangle, point } => write!(f, "{point} above {triangle}"),
            RowSource::Given => write!(f, "given"),
        }
    }
}

/// Homogeneous strict inequalities over the heights of `points`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    points: Vec<LatticePoint>,
    rows: Vec<Vec<i64>>,
    sources: Vec<RowSource>,
}

impl LinearSystem {
    pub fn new(points: Vec<LatticePoint>) -> Self {
        LinearSystem { points, rows: Vec::new(), sources: Vec::new() }
    }

    /// Add `Σ row[i] h(points[i]) > 0`.
    pub fn push(&mut self, row: Vec<i64>, source: RowSource) -> Result<()> {
        if row.len() != self.points.len() {
            return Err(Error::Precondition(format!("row has {} entries for {} points", row.len(), self.points.len())));
        }
        self.rows.push(row);
        self.sources.push(source);
        Ok(())
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn sources(&self) -> &[RowSource] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Nonzero terms of row `i` as `(point, coefficient)`.
    pub fn terms(&self, i: usize) -> Vec<(LatticePoint, i64)> {
        self.rows[i].iter().zip(&self.points).filter(|(c, _)| **c != 0).map(|(c, p)| (*p, *c)).collect()
    }

    /// Variables whose equations the solver keeps: all that occur, minus up
    /// to three affinely independent ones when every row kills affine functions.
    fn equations(&self) -> Vec<usize> {
        let used: Vec<usize> = (0..self.points.len()).filter(|&k| self.rows.iter().any(|r| r[k] != 0)).collect();
        let affine_free = self.rows.iter().all(|r| {
            let (mut s, mut sx, mut sy) = (0i64, 0i64, 0i64);
            for (c, p) in r.iter().zip(&self.points) {
                s += c;
                sx += c * i64::from(p.x);
                sy += c * i64::from(p.y);
            }
            s == 0 && sx == 0 && sy == 0
        });
        if !affine_free {
            return used;
        }
        let mut gauge: Vec<usize> = Vec::new();
        for &k in &used {
            let p = self.points[k];
            let independent = match gauge.as_slice() {
                [] => true,
                [a] => self.points[*a] != p,
                [a, b] => orient(self.points[*a], self.points[*b], p) != 0,
                _ => false,
            };
            if independent {
                gauge.push(k);
            }
            if gauge.len() == 3 {
                break;
            }
        }
        used.into_iter().filter(|k| !gauge.contains(k)).collect()
    }
}

/// Verdict with its witness: a lifting if regular, row weights if not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityResult {
    pub regular: bool,
    /// Height per point of the system, every constraint satisfied with slack at least 1.
    pub lifting: Option<Vec<(LatticePoint, BigRational)>>,
    /// Nonnegative weights per row, summing to 1, whose combination is the zero functional.
    pub certificate: Option<Vec<BigRational>>,
}

impl RegularityResult {
    /// Check the witness against `sys` by substitution.
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        match (self.regular, &self.lifting, &self.certificate) {
            (true, Some(h), None) => {
                if h.len() != sys.points.len() || h.iter().zip(&sys.points).any(|((p, _), q)| p != q) {
                    return false;
                }
                let values: Vec<BigRational> = h.iter().map(|(_, v)| v.clone()).collect();
                let (num, den) = common_denominator(&values);
                sys.rows.iter().all(|row| dot(row, &num) >= den)
            }
            (false, None, Some(y)) => {
                if y.len() != sys.rows.len() || y.iter().any(|v| v.is_negative()) || y.iter().all(|v| v.is_zero()) {
                    return false;
                }
                let (w, _) = common_denominator(y);
                (0..sys.points.len()).all(|k| {
                    let s: BigInt =
                        sys.rows.iter().zip(&w).filter(|(_, w)| !w.is_zero()).map(|(row, w)| w * row[k]).sum();
                    s.is_zero()
                })
            }
            _ => false,
        }
    }

    /// Rows with positive weight in the certificate.
    pub fn certificate_support(&self) -> Vec<usize> {
        self.certificate
            .as_ref()
            .map(|y| y.iter().enumerate().filter(|(_, v)| v.is_positive()).map(|(i, _)| i).collect())
            .unwrap_or_default()
    }

    /// JSON with rationals written as `"p/q"` strings.
    pub fn to_json(&self, sys: &LinearSystem) -> Value {
        let rat = |r: &BigRational| format!("{}/{}", r.numer(), r.denom());
        let mut out = json!({ "regular": self.regular });
        if let Some(h) = &self.lifting {
            out["lifting"] = h.iter().map(|(p, v)| json!({ "point": [p.x, p.y], "height": rat(v) })).collect();
        }
        if let Some(y) = &self.certificate {
            out["certificate"] = y
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| {
                    let terms: Vec<Value> = sys.terms(i).iter().map(|(p, c)| json!([[p.x, p.y], c])).collect();
                    json!({ "weight": rat(w), "row": terms, "source": sys.sources[i].to_string() })
                })
                .collect();
        }
        out
    }
}

/// Integer numerators over a shared positive denominator.
fn common_denominator(values: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = values.iter().fold(BigInt::from(1), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
    let num = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    (num, den)
}

fn dot(row: &[i64], h: &[BigInt]) -> BigInt {
    row.iter().zip(h).filter(|(c, _)| **c != 0).map(|(c, v)| v * *c).sum()
}

/// Exact decision of `sys` by fraction-free pivoting.
pub fn solve_strict(sys: &LinearSystem) -> RegularityResult {
    if sys.rows.is_empty() {
        return lifting_result(sys, vec![BigInt::zero(); sys.points.len()]);
    }
    match simplex::solve(&sys.rows, sys.points.len(), &sys.equations()) {
        Alternative::Lifting(h) => lifting_result(sys, h),
        Alternative::Certificate(y, d) => RegularityResult {
            regular: false,
            lifting: None,
            certificate: Some(y.into_iter().map(|v| BigRational::new(v, d.clone())).collect()),
        },
    }
}

fn lifting_result(sys: &LinearSystem, h: Vec<BigInt>) -> RegularityResult {
    RegularityResult {
        regular: true,
        lifting: Some(sys.points.iter().zip(h).map(|(p, v)| (*p, BigRational::from_integer(v))).collect()),
        certificate: None,
    }
}

/// Just the verdict, skipping witness conversion.
fn decide(sys: &LinearSystem) -> bool {
    sys.rows.is_empty()
        || matches!(simplex::solve(&sys.rows, sys.points.len(), &sys.equations()), Alternative::Lifting(_))
}

/// Row `Σ c h > 0` stating that `p` lifts above the plane of `t`.
fn above_row(points: &[LatticePoint], t: &Triangle, p: LatticePoint) -> Vec<i64> {
    let mut row = vec![0i64; points.len()];
    let at = |q: LatticePoint| points.binary_search(&q).expect("point of the system");
    row[at(p)] += 1;
    for (v, l) in t.vertices().into_iter().zip(t.barycentric(p)) {
        row[at(v)] -= l;
    }
    row
}

/// One fold per interior edge of a mesh.
pub fn fold_constraints_mesh(mesh: &FlipMesh) -> LinearSystem {
    let points: Vec<LatticePoint> = mesh.grid().points().collect();
    let mut sys = LinearSystem::new(points);
    for i in 0..mesh.interior_edge_count() {
        let e = mesh.edge(i);
        let [c, d] = mesh.apexes(i);
        let near = Triangle::from_vertices_raw(e.a(), e.b(), c);
        let row = above_row(&sys.points, &near, d);
        sys.rows.push(row);
        sys.sources.push(RowSource::Fold { edge: e, near: c, far: d });
    }
    sys
}

/// One fold per interior edge: the far apex lifts above the plane of the near triangle.
pub fn fold_constraints(t: &Triangulation) -> Result<LinearSystem> {
    Ok(fold_constraints_mesh(&FlipMesh::from_triangulation(t)?))
}

/// A set of interior-disjoint unimodular triangles and the points they cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    triangles: Vec<Triangle>,
    points: Vec<LatticePoint>,
}

impl Configuration {
    pub fn new(mut triangles: Vec<Triangle>) -> Result<Self> {
        triangles.sort_unstable();
        triangles.dedup();
        for t in &triangles {
            if !t.is_unimodular() {
                return Err(Error::Precondition(format!("triangle {t} is not unimodular")));
            }
        }
        for (i, a) in triangles.iter().enumerate() {
            for b in &triangles[i + 1..] {
                if a.interiors_overlap(b) {
                    return Err(Error::Precondition(format!("triangles {a} and {b} overlap")));
                }
            }
        }
        let points: BTreeSet<LatticePoint> = triangles.iter().flat_map(|t| t.vertices()).collect();
        Ok(Configuration { triangles, points: points.into_iter().collect() })
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        let points: BTreeSet<LatticePoint> = t.triangles().iter().flat_map(|t| t.vertices()).collect();
        Configuration { triangles: t.triangles().to_vec(), points: points.into_iter().collect() }
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    fn without(&self, skip: usize) -> Configuration {
        let mut tris = self.triangles.clone();
        tris.remove(skip);
        let points: BTreeSet<LatticePoint> = tris.iter().flat_map(|t| t.vertices()).collect();
        Configuration { triangles: tris, points: points.into_iter().collect() }
    }
}

/// Every covered point outside a triangle lifts above that triangle's plane.
pub fn configuration_constraints(c: &Configuration) -> LinearSystem {
    let mut sys = LinearSystem::new(c.points.clone());
    for t in &c.triangles {
        for &p in &c.points {
            if t.contains_vertex(p) {
                continue;
            }
            sys.rows.push(above_row(&c.points, t, p));
            sys.sources.push(RowSource::Above { triangle: *t, point: p });
        }
    }
    sys
}

pub fn is_regular(t: &Triangulation) -> Result<RegularityResult> {
    Ok(solve_strict(&fold_constraints(t)?))
}

/// Verdict only, for bulk classification.
pub fn is_regular_mesh(mesh: &FlipMesh) -> bool {
    decide(&fold_constraints_mesh(mesh))
}

pub fn is_regular_configuration(c: &Configuration) -> bool {
    decide(&configuration_constraints(c))
}

/// An irregular subset of `t` all of whose proper subsets are regular.
///
/// Greedy: walk the triangles in sorted order and drop each one whose removal
/// keeps the set irregular. Regularity passes to subsets, so one pass already
/// reaches a minimal set; the result is re-verified before returning.
pub fn minimal_irregular(t: &Triangulation) -> Result<Configuration> {
    if is_regular(t)?.regular {
        return Err(Error::Precondition("triangulation is regular".into()));
    }
    let mut config = Configuration::from_triangulation(t);
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < config.len() {
            let smaller = config.without(i);
            if !is_regular_configuration(&smaller) {
                config = smaller;
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
    let minimal =
        !is_regular_configuration(&config) && (0..config.len()).all(|i| is_regular_configuration(&config.without(i)));
    if !minimal {
        return Err(Error::Precondition("greedy shrinking did not reach a minimal irregular set".into()));
    }
    Ok(config)
}

/// The whirlpool triangulation of the 3x3 grid.
///
/// The central square `p0 (1,1)`, `p1 (2,1)`, `p2 (2,2)`, `p3 (1,2)` is cut by
/// `p0 p2`, and each corner `q0 (0,0)`, `q1 (3,0)`, `q2 (3,3)`, `q3 (0,3)` is
/// joined to both `p_i` and `p_{i+1}`, so the long edges form a pinwheel.
pub fn whirlpool() -> Triangulation {
    const TRIANGLES: [[(i32, i32); 3]; 18] = [
        [(0, 0), (1, 0), (2, 1)],
        [(0, 0), (0, 1), (1, 1)],
        [(0, 0), (1, 1), (2, 1)],
        [(1, 0), (2, 0), (2, 1)],
        [(2, 0), (3, 0), (2, 1)],
        [(3, 0), (2, 1), (2, 2)],
        [(3, 0), (3, 1), (2, 2)],
        [(0, 1), (1, 1), (0, 2)],
        [(1, 1), (2, 1), (2, 2)],
        [(1, 1), (0, 2), (0, 3)],
        [(1, 1), (1, 2), (2, 2)],
        [(1, 1), (1, 2), (0, 3)],
        [(3, 1), (2, 2), (3, 2)],
        [(1, 2), (2, 2), (3, 3)],
        [(1, 2), (0, 3), (1, 3)],
        [(1, 2), (1, 3), (2, 3)],
        [(1, 2), (2, 3), (3, 3)],
        [(2, 2), (3, 2), (3, 3)],
    ];
    let p = |(x, y): (i32, i32)| LatticePoint::new(x, y);
    let triangles = TRIANGLES.iter().map(|&[a, b, c]| Triangle::new(p(a), p(b), p(c)).expect("unimodular")).collect();
    Triangulation::new(GridSpec::new(3, 3).expect("3x3"), triangles).expect("whirlpool is a triangulation")
}

/// A non-regular 4x4 triangulation built from four regular 2x2 blocks.
///
/// The blocks are one 2x2 triangulation turned by quarter turns about the
/// grid centre; the first such pinwheel (in sorted triangle order of the
/// seed block) that is irregular is returned.
pub fn patchwork_4x4() -> Result<Triangulation> {
    let grid2 = GridSpec::new(2, 2)?;
    let grid4 = GridSpec::new(4, 4)?;
    let mut blocks = Vec::new();
    crate::region::ChainRegion::rectangle(2, 2).for_each_triangulation(|tris| blocks.push(tris.to_vec()));
    blocks.sort();
    let turn = |p: LatticePoint| LatticePoint::new(4 - p.y, p.x);
    for block in blocks {
        if !is_regular(&Triangulation::new(grid2, block.clone())?)?.regular {
            continue;
        }
        let mut tris = Vec::new();
        let mut quarter = block.clone();
        for _ in 0..4 {
            tris.extend_from_slice(&quarter);
            quarter = quarter
                .iter()
                .map(|t| {
                    let [a, b, c] = t.vertices().map(turn);
                    Triangle::new(a, b, c).expect("rotation keeps area")
                })
                .collect();
        }
        let t = Triangulation::new(grid4, tris)?;
        if !is_regular(&t)?.regular {
            return Ok(t);
        }
    }
    Err(Error::Precondition("no irregular pinwheel of 2x2 blocks".into()))
}
