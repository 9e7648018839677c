//! Randomised invariants of flips, encodings, edge statistics and the
//! regularity witnesses.

use gridtri_core::mesh::{CodeSpace, FlipMesh};
use gridtri_core::regularity::{fold_constraints, is_regular};
use gridtri_core::walk::Walker;
use gridtri_core::{GridSpec, Triangulation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Grids with mn <= 25.
fn small_grid() -> impl Strategy<Value = GridSpec> {
    (1u32..=25, 1u32..=25).prop_filter("mn <= 25", |(m, n)| m * n <= 25).prop_map(|(m, n)| GridSpec::new(m, n).unwrap())
}

fn scrambled(g: GridSpec, seed: u64, steps: u32) -> Triangulation {
    let mut w = Walker::new(&Triangulation::initial(g), seed).unwrap();
    for _ in 0..steps {
        w.step();
    }
    w.mesh().to_triangulation()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    /// 50 cases x 2000 flips: every flip keeps the triangulation valid and
    /// flipping the new edge restores the previous one.
    #[test]
    fn flips_are_valid_involutions(g in small_grid(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = Triangulation::initial(g);
        for _ in 0..2000 {
            let edges = t.flippable_edges().unwrap();
            // every triangulation of a grid has a flippable edge
            prop_assert!(!edges.is_empty());
            let e = edges[rng.gen_range(0..edges.len())];
            let next = t.flip(&e).unwrap();
            prop_assert!(next.validate().valid);
            let old_edges = t.edges();
            let new_edges = next.edges();
            prop_assert!(!new_edges.contains(&e));
            let fresh: Vec<_> = new_edges.iter().filter(|x| !old_edges.contains(x)).collect();
            prop_assert_eq!(fresh.len(), 1);
            prop_assert_eq!(&next.flip(fresh[0]).unwrap(), &t);
            t = next;
        }
    }

    #[test]
    fn mesh_flips_agree_with_triangulation_flips(g in small_grid(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mesh = FlipMesh::from_triangulation(&Triangulation::initial(g)).unwrap();
        for _ in 0..200 {
            let i = rng.gen_range(0..mesh.interior_edge_count());
            let before = mesh.to_triangulation();
            let e = mesh.edge(i);
            let expected = before.flip(&e);
            prop_assert_eq!(mesh.is_flippable(i), expected.is_ok());
            if mesh.flip(i) {
                prop_assert_eq!(mesh.to_triangulation(), expected.unwrap());
            }
        }
    }

    #[test]
    fn encodings_round_trip(g in small_grid(), seed in any::<u64>(), steps in 0u32..5000) {
        let t = scrambled(g, seed, steps);
        prop_assert_eq!(&Triangulation::from_json(&t.to_json()).unwrap(), &t);
        let space = CodeSpace::new(g).unwrap();
        let code = space.encode(&t).unwrap();
        prop_assert_eq!(code.len(), space.code_len());
        prop_assert_eq!(&space.decode(&code), &t);
    }

    #[test]
    fn edge_statistics_are_bounded(g in small_grid(), seed in any::<u64>(), steps in 0u32..5000) {
        let t = scrambled(g, seed, steps);
        let (max, avg) = t.edge_length_stats();
        prop_assert!(max >= 2f64.sqrt() - 1e-12);
        prop_assert!(avg >= 1.0 && avg <= max);
        prop_assert_eq!(t.edges().len() as u64, g.edge_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn regularity_witnesses_verify(m in 1u32..=5, n in 1u32..=5, seed in any::<u64>(), steps in 0u32..20_000) {
        let t = scrambled(GridSpec::new(m, n).unwrap(), seed, steps);
        let r = is_regular(&t).unwrap();
        prop_assert!(r.verify(&fold_constraints(&t).unwrap()));
        if m.min(n) <= 2 {
            prop_assert!(r.regular);
        }
    }
}
