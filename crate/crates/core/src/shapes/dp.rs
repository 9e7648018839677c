//! Inclusion-exclusion over subshapes.
//!
//! Every triangulation of a shape contains at least one maximal triangle, and
//! a set of maximal triangles belongs to exactly the triangulations of the
//! subshape left after removing it. Hence
//! `f(S) = sum over nonempty interior-disjoint sets A of (-1)^(|A|-1) f(S \ A)`,
//! with `f = 1` for the flat base chain.

use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use super::{AdmissibleShape, ShapeKey};
use crate::count::BigCount;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Clone, Debug)]
pub struct DpOptions {
    /// Only sum over triangles right of the last upward jump.
    pub prune: bool,
    /// Rough memory cap for the shape graph.
    pub budget_bytes: u64,
    /// Keep every shape count (needed for sampling) instead of evicting.
    pub keep_all: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { prune: false, budget_bytes: 2 << 30, keep_all: false }
    }
}

#[derive(Clone, Debug)]
pub struct DpReport {
    pub count: BigCount,
    pub shape_count: u64,
    /// Largest number of shape counts held at once.
    pub peak_resident: u64,
    /// Largest vertical step seen on any chain.
    pub max_jump: i32,
}

/// Counts for every shape of a grid, as needed by the sampler.
#[derive(Clone, Debug)]
pub struct ShapeCounts {
    grid: GridSpec,
    counts: HashMap<ShapeKey, BigCount>,
}

impl ShapeCounts {
    pub fn build(grid: GridSpec) -> Result<Self> {
        let opts = DpOptions { keep_all: true, ..DpOptions::default() };
        let mut counts = HashMap::new();
        run(grid, &opts, Some(&mut counts))?;
        Ok(ShapeCounts { grid, counts })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, shape: &AdmissibleShape) -> Option<&BigCount> {
        self.counts.get(&shape.key())
    }
}

/// `f(m, n)` by the shape recursion.
pub fn count_by_dp(grid: GridSpec) -> Result<BigCount> {
    Ok(run(grid, &DpOptions::default(), None)?.count)
}

/// Number of shapes reachable from the full grid and the peak number of
/// counts held under the processing order.
pub fn shape_census(grid: GridSpec) -> Result<(BigCount, u64)> {
    let r = run(grid, &DpOptions::default(), None)?;
    Ok((BigCount::from(r.shape_count), r.peak_resident))
}

pub fn count_by_dp_with(grid: GridSpec, opts: &DpOptions) -> Result<DpReport> {
    run(grid, opts, None)
}

/// Every shape reachable from the full grid by removing maximal triangles, in
/// discovery order.
pub fn reachable_shapes(grid: GridSpec) -> Vec<AdmissibleShape> {
    let full = AdmissibleShape::full(grid);
    let mut seen = std::collections::HashSet::new();
    seen.insert(full.key());
    let mut out = vec![full];
    let mut next = 0;
    while next < out.len() {
        let shape = out[next].clone();
        for t in shape.maximal_triangles() {
            let child = shape.remove(&[t]).expect("maximal triangles are removable");
            if seen.insert(child.key()) {
                out.push(child);
            }
        }
        next += 1;
    }
    out
}

/// Child shape id with the inclusion-exclusion sign in the top bit.
const NEGATIVE: u32 = 1 << 31;

fn run(grid: GridSpec, opts: &DpOptions, keep: Option<&mut HashMap<ShapeKey, BigCount>>) -> Result<DpReport> {
    let key_len = 2 * (grid.m() as u64 + 1);
    // key box, map entry, order slot, offsets and a few children
    let per_shape = 2 * key_len + 96;

    let full = AdmissibleShape::full(grid);
    let mut ids: HashMap<ShapeKey, u32> = HashMap::new();
    let mut keys: Vec<ShapeKey> = Vec::new();
    let mut offsets: Vec<u64> = vec![0];
    let mut children: Vec<u32> = Vec::new();
    let mut max_jump = 0;

    ids.insert(full.key(), 0);
    keys.push(full.key());
    let mut next = 0usize;
    while next < keys.len() {
        let shape = AdmissibleShape::from_key(grid, &keys[next]);
        max_jump = max_jump.max(shape.max_jump());
        let min_x = if opts.prune { shape.last_up_jump().unwrap_or(0) } else { 0 };
        let mut list = Vec::new();
        let mut discover = |child: &AdmissibleShape, removed: u32, list: Option<&mut Vec<u32>>| {
            let key = child.key();
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = keys.len() as u32;
                    ids.insert(key.clone(), id);
                    keys.push(key);
                    id
                }
            };
            if let Some(list) = list {
                list.push(if removed.is_multiple_of(2) { id | NEGATIVE } else { id });
            }
        };
        shape.for_each_subshape(min_x, |child, removed| discover(child, removed, Some(&mut list)));
        if opts.prune {
            // the census still covers every shape reachable by single removals
            shape.for_each_subshape(0, |child, removed| {
                if removed == 1 {
                    discover(child, removed, None)
                }
            });
        }
        children.extend_from_slice(&list);
        offsets.push(children.len() as u64);
        next += 1;
        let used = keys.len() as u64 * per_shape + children.len() as u64 * 4;
        if used > opts.budget_bytes {
            return Err(Error::Budget(format!(
                "shape graph of {grid} needs more than {} bytes after discovering {} shapes ({} expanded)",
                opts.budget_bytes,
                keys.len(),
                next
            )));
        }
    }
    drop(ids);

    let total = keys.len();
    let areas: Vec<i64> = keys.iter().map(|k| AdmissibleShape::from_key(grid, k).doubled_area()).collect();
    let mut order: Vec<u32> = (0..total as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (ka, kb) = (&keys[a as usize], &keys[b as usize]);
        (ka.0[1], areas[a as usize], ka).cmp(&(kb.0[1], areas[b as usize], kb))
    });

    let mut refs = vec![0u32; total];
    for &c in &children {
        refs[(c & !NEGATIVE) as usize] += 1;
    }
    let mut values: Vec<Option<BigInt>> = vec![None; total];
    let mut resident = 0u64;
    let mut peak = 0u64;
    for &id in &order {
        let id = id as usize;
        let (lo, hi) = (offsets[id] as usize, offsets[id + 1] as usize);
        let value = if areas[id] == 0 {
            BigInt::from(1)
        } else {
            let mut acc = BigInt::zero();
            for &c in &children[lo..hi] {
                let child = (c & !NEGATIVE) as usize;
                let v = values[child].as_ref().expect("children are processed first");
                if c & NEGATIVE != 0 {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
            acc
        };
        if value.sign() == Sign::Minus {
            return Err(Error::Precondition(format!(
                "negative count for shape {}",
                AdmissibleShape::from_key(grid, &keys[id])
            )));
        }
        if opts.keep_all || refs[id] > 0 || id == 0 {
            values[id] = Some(value);
            resident += 1;
            peak = peak.max(resident);
        }
        if !opts.keep_all {
            for &c in &children[lo..hi] {
                let child = (c & !NEGATIVE) as usize;
                refs[child] -= 1;
                if refs[child] == 0 && child != 0 {
                    values[child] = None;
                    resident -= 1;
                }
            }
        }
    }

    if let Some(map) = keep {
        for (id, key) in keys.iter().enumerate() {
            if let Some(v) = &values[id] {
                map.insert(key.clone(), BigCount(v.magnitude().clone()));
            }
        }
    }
    let count = BigCount(values[0].take().expect("full grid processed").magnitude().clone());
    Ok(DpReport { count, shape_count: total as u64, peak_resident: peak, max_jump })
}
