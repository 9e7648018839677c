//! Exhaustive traversal of the flip graph.
//!
//! Breadth-first search from the initial triangulation. Triangulations are
//! stored as byte codes (one byte per interior midpoint); a layer is only
//! compared against its two neighbours, since a flip changes the distance
//! from the root by at most one. Each layer is sorted by code before it is
//! visited, which fixes the visit order.

use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::count::BigCount;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::mesh::{CodeSpace, FlipMesh};
use crate::regularity::is_regular_mesh;
use crate::shapes::{count_by_dp_with, DpOptions};
use crate::triangulation::Triangulation;

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Memory cap for the stored layers.
    pub budget_bytes: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { budget_bytes: 2 << 30 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub total: BigCount,
    pub regular: BigCount,
    pub irregular: BigCount,
}

impl Tally {
    /// `total,regular,irregular`
    pub fn csv_line(&self) -> String {
        format!("{},{},{}", self.total, self.regular, self.irregular)
    }
}

/// Expected number of triangulations: the exact count when the shape DP is
/// cheap, else the upper bound `2^(3mn-m-n)`.
fn size_estimate(grid: GridSpec) -> (BigCount, bool) {
    let bound = BigCount::power_of_two(grid.interior_edge_count());
    let opts = DpOptions { budget_bytes: 64 << 20, ..DpOptions::default() };
    match count_by_dp_with(grid, &opts) {
        Ok(r) => (r.count, true),
        Err(_) => (bound, false),
    }
}

fn check_budget(grid: GridSpec, code_len: usize, opts: &EnumerationOptions) -> Result<()> {
    let (estimate, exact) = size_estimate(grid);
    // a boxed code plus a slot in a sorted layer or a hash set
    let per = code_len as u64 + 48;
    let needed = estimate.to_u64().and_then(|c| c.checked_mul(per));
    match needed {
        Some(b) if b <= opts.budget_bytes => Ok(()),
        _ => {
            let what = if exact { "exactly" } else { "at most (upper bound 2^(3mn-m-n))" };
            Err(Error::Budget(format!(
                "{grid} has {what} {estimate} triangulations at {per} bytes each, over the budget of {} bytes",
                opts.budget_bytes
            )))
        }
    }
}

fn traverse(
    grid: GridSpec,
    opts: &EnumerationOptions,
    mut visit: impl FnMut(&CodeSpace, &[u8]) -> ControlFlow<()>,
) -> Result<u64> {
    let space = CodeSpace::new(grid)?;
    check_budget(grid, space.code_len(), opts)?;
    let root = space.encode(&Triangulation::initial(grid))?.into_boxed_slice();
    let mut prev: Vec<Box<[u8]>> = Vec::new();
    let mut cur: Vec<Box<[u8]>> = vec![root];
    let mut visited = 0u64;
    while !cur.is_empty() {
        for code in &cur {
            visited += 1;
            if visit(&space, code).is_break() {
                return Ok(visited);
            }
        }
        let mut next: HashSet<Box<[u8]>> = HashSet::new();
        for code in &cur {
            space.for_each_neighbor(code, |nb| {
                if prev.binary_search_by(|c| c.as_ref().cmp(&nb)).is_err()
                    && cur.binary_search_by(|c| c.as_ref().cmp(&nb)).is_err()
                {
                    next.insert(nb.into_boxed_slice());
                }
            });
        }
        let mut layer: Vec<Box<[u8]>> = next.into_iter().collect();
        layer.sort_unstable();
        prev = std::mem::replace(&mut cur, layer);
    }
    Ok(visited)
}

/// Visit every triangulation once, as codes, in the deterministic order.
pub fn enumerate_codes(
    grid: GridSpec,
    opts: &EnumerationOptions,
    mut visit: impl FnMut(&CodeSpace, &[u8]),
) -> Result<BigCount> {
    let n = traverse(grid, opts, |s, c| {
        visit(s, c);
        ControlFlow::Continue(())
    })?;
    Ok(BigCount::from(n))
}

/// Visit every triangulation once; returns how many were visited.
pub fn enumerate_all(grid: GridSpec, mut visitor: impl FnMut(&Triangulation)) -> Result<BigCount> {
    enumerate_codes(grid, &EnumerationOptions::default(), |s, c| visitor(&s.decode(c)))
}

/// The `k`-th triangulation (1-based) in the visit order.
pub fn kth(grid: GridSpec, k: u64) -> Result<Triangulation> {
    kth_with(grid, k, &EnumerationOptions::default())
}

pub fn kth_with(grid: GridSpec, k: u64, opts: &EnumerationOptions) -> Result<Triangulation> {
    let total = count_by_dp_with(grid, &DpOptions { budget_bytes: opts.budget_bytes, ..DpOptions::default() })?.count;
    if k == 0 || BigCount::from(k) > total {
        return Err(Error::OutOfRange { k: k.to_string(), max: total.to_string() });
    }
    let mut found = None;
    let mut seen = 0u64;
    traverse(grid, opts, |s, c| {
        seen += 1;
        if seen == k {
            found = Some(s.decode(c));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    found.ok_or_else(|| Error::OutOfRange { k: k.to_string(), max: seen.to_string() })
}

/// Classify every triangulation by [`is_regular_mesh`].
pub fn tally_regularity(grid: GridSpec) -> Result<Tally> {
    tally_regularity_with(grid, &EnumerationOptions::default(), |_| {})
}

/// As [`tally_regularity`], handing each irregular triangulation to `on_irregular`.
pub fn tally_regularity_with(
    grid: GridSpec,
    opts: &EnumerationOptions,
    mut on_irregular: impl FnMut(&FlipMesh),
) -> Result<Tally> {
    let (mut total, mut irregular) = (0u64, 0u64);
    traverse(grid, opts, |s, c| {
        total += 1;
        let mesh = s.decode_mesh(c);
        if !is_regular_mesh(&mesh) {
            irregular += 1;
            on_irregular(&mesh);
        }
        ControlFlow::Continue(())
    })?;
    Ok(Tally {
        total: BigCount::from(total),
        regular: BigCount::from(total - irregular),
        irregular: BigCount::from(irregular),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: u32, n: u32) -> GridSpec {
        GridSpec::new(m, n).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_all(grid(1, 1), |_| {}).unwrap(), BigCount::from(2));
        assert_eq!(enumerate_all(grid(2, 2), |_| {}).unwrap(), BigCount::from(64));
        assert_eq!(enumerate_all(grid(2, 3), |_| {}).unwrap(), BigCount::from(852));
    }

    #[test]
    fn kth_is_injective_on_2x2() {
        let keys: HashSet<Vec<u8>> = (1..=64).map(|k| kth(grid(2, 2), k).unwrap().canonical_key()).collect();
        assert_eq!(keys.len(), 64);
        assert!(kth(grid(2, 2), 0).is_err());
        assert!(kth(grid(2, 2), 65).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_codes(grid(3, 3), &EnumerationOptions { budget_bytes: 1000 }, |_, _| {}).unwrap_err();
        assert!(err.to_string().contains("46456"));
    }
}
