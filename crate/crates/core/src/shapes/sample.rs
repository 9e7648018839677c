//! Top-down random dismantling driven by shape counts.
//!
//! From the current shape, one maximal triangle is removed with probability
//! proportional to the number of triangulations of what is left. A
//! triangulation usually has several maximal triangles, so these weights sum
//! to more than `f(S)`; whether the output is uniform is checked empirically,
//! and [`removal_distribution`] computes the exact output law for small grids.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use super::{AdmissibleShape, ShapeCounts};
use crate::error::{Error, Result};
use crate::geometry::Triangle;
use crate::triangulation::Triangulation;

/// Uniform integer in `[0, bound)` by rejection on whole bytes.
fn uniform_below(bound: &BigUint, rng: &mut impl RngCore) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        let extra = bytes as u64 * 8 - bits;
        if extra > 0 {
            let last = bytes - 1;
            buf[last] &= 0xFF >> extra;
        }
        let v = BigUint::from_bytes_le(&buf);
        if &v < bound {
            return v;
        }
    }
}

/// One triangulation drawn by the dismantling procedure.
pub fn dp_sample(counts: &ShapeCounts, rng: &mut impl RngCore) -> Result<Triangulation> {
    let grid = counts.grid();
    let mut shape = AdmissibleShape::full(grid);
    let mut removed: Vec<Triangle> = Vec::with_capacity(grid.triangle_count() as usize);
    while !shape.is_degenerate() {
        let options: Vec<(Triangle, AdmissibleShape, BigUint)> = shape
            .maximal_triangles()
            .into_iter()
            .map(|t| {
                let child = shape.remove(&[t])?;
                let w = counts
                    .get(&child)
                    .ok_or_else(|| Error::Precondition(format!("no count stored for shape {child}")))?
                    .0
                    .clone();
                Ok((t, child, w))
            })
            .collect::<Result<_>>()?;
        let total: BigUint = options.iter().map(|o| &o.2).sum();
        if total.is_zero() {
            return Err(Error::Precondition(format!("shape {shape} has no triangulation")));
        }
        let mut pick = uniform_below(&total, rng);
        let mut chosen = None;
        for (t, child, w) in options {
            if pick < w {
                chosen = Some((t, child));
                break;
            }
            pick -= w;
        }
        let (t, child) = chosen.expect("pick below total");
        removed.push(t);
        shape = child;
    }
    Triangulation::new(grid, removed)
}

/// Exact probability of every output of [`dp_sample`], keyed by sorted triangle list.
///
/// Exponential in the grid size; intended for grids with a few dozen triangulations.
pub fn removal_distribution(counts: &ShapeCounts) -> Result<HashMap<Vec<Triangle>, BigRational>> {
    let mut out: HashMap<Vec<Triangle>, BigRational> = HashMap::new();
    let mut path = Vec::new();
    descend(counts, AdmissibleShape::full(counts.grid()), BigRational::one(), &mut path, &mut out)?;
    Ok(out)
}

fn descend(
    counts: &ShapeCounts,
    shape: AdmissibleShape,
    prob: BigRational,
    path: &mut Vec<Triangle>,
    out: &mut HashMap<Vec<Triangle>, BigRational>,
) -> Result<()> {
    if shape.is_degenerate() {
        let mut key = path.clone();
        key.sort_unstable();
        *out.entry(key).or_insert_with(BigRational::zero) += prob;
        return Ok(());
    }
    let mut options = Vec::new();
    for t in shape.maximal_triangles() {
        let child = shape.remove(&[t])?;
        let w = counts.get(&child).ok_or_else(|| Error::Precondition(format!("no count stored for shape {child}")))?;
        if !w.is_zero() {
            options.push((t, child, w.0.clone()));
        }
    }
    let total: BigUint = options.iter().map(|o| &o.2).sum();
    for (t, child, w) in options {
        let p = &prob * BigRational::new(w.into(), total.clone().into());
        path.push(t);
        descend(counts, child, p, path, out)?;
        path.pop();
    }
    Ok(())
}
