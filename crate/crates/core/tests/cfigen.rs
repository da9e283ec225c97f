use num_bigint::BigUint;
use proptest::prelude::*;

use twintour_core::cfigen::{
    cfi_contraction, cfi_isomorphism, cfi_pair, circular_contraction, has_consistent_transversal, toroidal_grid,
    twist_iso, BaseGraph, CfiGraph,
};
use twintour_core::graphcore::{ArcColoredDigraph, RelStructure, Tournament};
use twintour_core::isokit::automorphism_group;
use twintour_core::widths::{verify_contraction, LinearOrder};

fn k4(alpha: Vec<u8>) -> CfiGraph {
    CfiGraph::new(BaseGraph::complete(4), LinearOrder::identity(4), alpha).unwrap()
}

fn acd(t: &Tournament) -> ArcColoredDigraph {
    t.into()
}

fn total(a: &[u8]) -> u32 {
    a.iter().map(|&x| x as u32).sum::<u32>() % 3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equal_totals_give_fiber_preserving_isomorphisms(alpha in prop::collection::vec(0u8..3, 4), beta in prop::collection::vec(0u8..3, 4)) {
        let a = k4(alpha.clone());
        let found = cfi_isomorphism(&a, &beta).unwrap();
        prop_assert_eq!(found.is_some(), total(&alpha) == total(&beta));
        if let Some(p) = found {
            let b = k4(beta);
            prop_assert!(acd(&a.tournament()).is_isomorphism(&acd(&b.tournament()), p.images()));
            for x in 0..a.n() {
                prop_assert_eq!(a.fiber(x), b.fiber(p.apply(x)));
                for y in 0..a.n() {
                    prop_assert_eq!(a.adjacent(x, y), b.adjacent(p.apply(x), p.apply(y)));
                }
            }
        }
    }

    #[test]
    fn twists_move_along_paths(alpha in prop::collection::vec(0u8..3, 4), path in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let a = k4(alpha.clone());
        let (beta, p) = twist_iso(&a, &path).unwrap();
        prop_assert_eq!(total(&alpha), total(&beta));
        prop_assert_eq!(beta[path[0]], (alpha[path[0]] + 1) % 3);
        prop_assert_eq!(beta[path[3]], (alpha[path[3]] + 2) % 3);
        let b = k4(beta);
        prop_assert!(acd(&a.tournament()).is_isomorphism(&acd(&b.tournament()), p.images()));
    }

    #[test]
    fn transversal_exists_iff_untwisted(alpha in prop::collection::vec(0u8..3, 4)) {
        prop_assert_eq!(has_consistent_transversal(&k4(alpha.clone())), total(&alpha) == 0);
    }
}

#[test]
fn gadget_shape() {
    let g = k4(vec![0; 4]);
    assert_eq!(g.n(), 36);
    let t = g.tournament();
    for x in 0..36 {
        for y in 0..36 {
            if x != y {
                assert!(t.has_edge(x, y) != t.has_edge(y, x));
            }
        }
    }
    assert!(!g.adjacent(0, 1));
}

#[test]
fn k4_automorphisms() {
    let (a, _) = cfi_pair(&BaseGraph::complete(4), &LinearOrder::identity(4)).unwrap();
    assert_eq!(*automorphism_group(&acd(&a.tournament())).order(), BigUint::from(27u32));
}

#[test]
fn contraction_lifts_the_base_sequence() {
    let (a, b) = cfi_pair(&BaseGraph::complete(4), &LinearOrder::identity(4)).unwrap();
    let base = RelStructure::from_tournament(&Tournament::transitive(4));
    let (_, seq) = twintour_core::widths::exact_twin_width(&base).unwrap();
    for g in [&a, &b] {
        let s = cfi_contraction(g, &seq).unwrap();
        assert_eq!(s.n(), 36);
        let w = verify_contraction(&RelStructure::from_tournament(&g.tournament()), &s).unwrap();
        assert!(w < 36);
    }
}

#[test]
fn base_graph_checks() {
    assert!(BaseGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap().n() == 3);
    assert!(CfiGraph::new(BaseGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap(), LinearOrder::identity(3), vec![0; 3])
        .is_err());
    assert!(BaseGraph::wall(1).unwrap().is_3_regular());
    assert!(BaseGraph::toroidal_grid(3, 4).is_connected());
    assert!(twist_iso(&k4(vec![0; 4]), &[0]).is_err());
}

#[test]
fn red_grids_and_circular_sequences() {
    let g = toroidal_grid(4, 4);
    assert_eq!(g.n(), 16);
    let seq = twintour_core::cfigen::grid_red_contraction(4, 4);
    assert!(verify_contraction(&g, &seq).unwrap() <= 6);
    for m in 1..8 {
        let t = RelStructure::from_tournament(&Tournament::circular(m));
        assert!(verify_contraction(&t, &circular_contraction(m)).unwrap() <= 1);
    }
}
