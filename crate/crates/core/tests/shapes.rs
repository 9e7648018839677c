use std::collections::BTreeSet;

use gridtri_core::count::binomial;
use gridtri_core::region::ChainRegion;
use gridtri_core::shapes::{
    count_by_dp, count_by_dp_with, precedes, reachable_shapes, shape_census, AdmissibleShape, DpOptions,
};
use gridtri_core::strips::{count_width2, count_width3};
use gridtri_core::{BigCount, GridSpec, Triangle};
use num_bigint::BigInt;

fn grid(m: u32, n: u32) -> GridSpec {
    GridSpec::new(m, n).unwrap()
}

/// Triangles of a triangulation with nothing above them.
fn top_triangles(tris: &[Triangle]) -> Vec<Triangle> {
    tris.iter().filter(|t| !tris.iter().any(|u| u != *t && precedes(t, u).unwrap())).copied().collect()
}

#[test]
fn maximal_triangles_match_brute_force() {
    for (m, n) in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4), (4, 1), (2, 3), (3, 2), (1, 6), (6, 1)] {
        for shape in reachable_shapes(grid(m, n)) {
            let mut brute = BTreeSet::new();
            shape.region().for_each_triangulation(|t| brute.extend(top_triangles(t)));
            let fast: BTreeSet<Triangle> = shape.maximal_triangles().into_iter().collect();
            assert_eq!(fast, brute, "shape {shape} of {m}x{n}: {:?}", shape.chain());
        }
    }
}

#[test]
fn inclusion_exclusion_holds_on_every_shape_of_2x2() {
    let g = grid(2, 2);
    let shapes = reachable_shapes(g);
    assert!(shapes.len() > 10);
    for shape in shapes {
        let brute = BigInt::from(shape.region().count().0);
        if shape.is_degenerate() {
            assert_eq!(brute, BigInt::from(1));
            continue;
        }
        let mut sum = BigInt::from(0);
        for delta in shape.admissible_subshapes() {
            let child = AdmissibleShape::from_key(g, &delta.child);
            assert_eq!(
                (shape.doubled_area() - child.doubled_area()) as u32,
                delta.removed_count,
                "removed count of {shape} -> {child}"
            );
            let f = BigInt::from(child.region().count().0);
            if delta.removed_count % 2 == 1 {
                sum += f;
            } else {
                sum -= f;
            }
        }
        assert_eq!(sum, brute, "shape {shape}");
    }
}

#[test]
fn subshapes_are_distinct_and_bounded() {
    let bound = |m: u32| ((3.0 + 13f64.sqrt()) / 2.0).powi(m as i32);
    for (m, n) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
        for shape in reachable_shapes(grid(m, n)) {
            let subs = shape.admissible_subshapes();
            let distinct: BTreeSet<_> = subs.iter().map(|d| d.child.clone()).collect();
            assert_eq!(distinct.len(), subs.len(), "shape {shape}");
            assert!((subs.len() as f64) <= bound(m), "shape {shape} has {} subshapes", subs.len());
        }
    }
}

#[test]
fn shape_counts_respect_the_polynomial_bound() {
    let (one, _) = shape_census(grid(1, 1)).unwrap();
    assert_eq!(one, BigCount::from(4));
    for (m, n) in [(1, 3), (2, 2), (2, 4), (3, 3), (4, 2)] {
        let (shapes, peak) = shape_census(grid(m, n)).unwrap();
        let bound = u64::from(3 * n + 2).pow(m - 1) * u64::from(n + 1).pow(2);
        assert!(shapes.to_u64().unwrap() <= bound, "{m}x{n}: {shapes} > {bound}");
        assert!(peak <= shapes.to_u64().unwrap());
    }
}

#[test]
fn order_relation_is_acyclic_on_2x2() {
    let g = grid(2, 2);
    let mut seen = 0;
    ChainRegion::rectangle(2, 2).for_each_triangulation(|tris| {
        seen += 1;
        let k = tris.len();
        let above: Vec<Vec<usize>> =
            (0..k).map(|i| (0..k).filter(|&j| i != j && precedes(&tris[i], &tris[j]).unwrap()).collect()).collect();
        // repeatedly strip triangles with nothing above them
        let mut alive = vec![true; k];
        let mut left = k;
        while left > 0 {
            let top = (0..k).find(|&i| alive[i] && above[i].iter().all(|&j| !alive[j]));
            let i = top.expect("a cycle of the order relation");
            alive[i] = false;
            left -= 1;
        }
    });
    assert_eq!(seen, 64);
    assert_eq!(g.triangle_count(), 8);
}

#[test]
fn pruned_sums_agree() {
    for m in 1..=3u32 {
        for n in 1..=3u32 {
            let g = grid(m, n);
            let plain = count_by_dp(g).unwrap();
            let pruned = count_by_dp_with(g, &DpOptions { prune: true, ..DpOptions::default() }).unwrap();
            assert_eq!(pruned.count, plain, "{m}x{n}");
        }
    }
}

#[test]
fn agrees_with_strip_recursions() {
    for n in 1..=8 {
        assert_eq!(count_by_dp(grid(1, n)).unwrap(), binomial(2 * u64::from(n), u64::from(n)));
        assert_eq!(count_by_dp(grid(2, n)).unwrap(), count_width2(n), "2x{n}");
    }
    for n in 1..=4 {
        assert_eq!(count_by_dp(grid(3, n)).unwrap(), count_width3(n), "3x{n}");
    }
}

#[test]
fn transposed_grids_agree() {
    for (m, n) in [(2, 3), (2, 5), (3, 4)] {
        assert_eq!(count_by_dp(grid(m, n)).unwrap(), count_by_dp(grid(n, m)).unwrap());
    }
}

#[test]
fn jumps_stay_unit() {
    let r = count_by_dp_with(grid(3, 4), &DpOptions::default()).unwrap();
    assert!(r.max_jump <= 1);
}
