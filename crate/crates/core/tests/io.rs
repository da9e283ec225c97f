use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twintour_core::graphcore::{Digraph, RelStructure, Tournament};
use twintour_core::io::*;
use twintour_core::permgroup::{PermGroup, Permutation};
use twintour_core::widths::{dpd_from_order, dtd_from_dpd, ContractionBuilder, LinearOrder};
use twintour_core::wl::{partition_sequence, PartitionOutcome};
use twintour_core::Error;

fn tournament(max: usize) -> impl Strategy<Value = Tournament> {
    (0..=max, any::<u64>()).prop_map(|(n, seed)| Tournament::random(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn tournaments(t in tournament(20)) {
        prop_assert_eq!(parse_tournament(&write_tournament(&t)).unwrap(), t.clone());
        prop_assert_eq!(parse_any_digraph(&write_tournament(&t)).unwrap(), t.digraph().clone());
    }

    #[test]
    fn digraphs(n in 0usize..12, edges in prop::collection::btree_set((0usize..12, 0usize..12), 0..40)) {
        let g = Digraph::from_edges(n, edges.into_iter().filter(|&(u, v)| u < n && v < n && u != v)).unwrap();
        prop_assert_eq!(parse_digraph(&write_digraph(&g)).unwrap(), g.clone());
        prop_assert_eq!(parse_any_digraph(&write_digraph(&g)).unwrap(), g);
    }

    #[test]
    fn structures(t in tournament(12), red in prop::collection::vec((0usize..12, 0usize..12), 0..10)) {
        let mut a = RelStructure::from_tournament(&t);
        for (u, v) in red {
            if u < t.n() && v < t.n() && u != v {
                a.add_red(u, v).unwrap();
            }
        }
        let b = parse_struct(&write_struct(&a)).unwrap();
        prop_assert_eq!(b.n(), a.n());
        prop_assert_eq!(b.relations(), a.relations());
        prop_assert_eq!(b.red_edges(), a.red_edges());
    }

    #[test]
    fn contractions(n in 1usize..20, merges in prop::collection::vec((0usize..20, 0usize..20), 0..60)) {
        let mut b = ContractionBuilder::new(n);
        for (u, v) in merges {
            b.merge_vertices(u % n, v % n);
        }
        for v in 1..n {
            b.merge_vertices(0, v);
        }
        let seq = b.finish();
        prop_assert_eq!(parse_contractions(&write_contractions(&seq)).unwrap(), seq);
    }

    #[test]
    fn orders_and_decompositions((t, s) in tournament(12).prop_flat_map(|t| { let n = t.n(); (Just(t), shuffled(n)) })) {
        let ord = LinearOrder::from_sequence(&s).unwrap();
        prop_assert_eq!(parse_order(&write_order(&ord)).unwrap(), ord.clone());
        let dpd = dpd_from_order(t.digraph(), &ord);
        prop_assert_eq!(parse_dpd(&write_dpd(&dpd), t.n()).unwrap(), dpd.clone());
        if t.n() > 0 {
            let dtd = dtd_from_dpd(t.digraph(), &dpd).unwrap();
            prop_assert_eq!(parse_dtd(&write_dtd(&dtd), t.n()).unwrap(), dtd);
        }
    }

    #[test]
    fn groups(gens in prop::collection::vec(shuffled(7), 0..4)) {
        let g = PermGroup::new(7, gens.into_iter().map(|v| Permutation::from_images(v).unwrap()).collect()).unwrap();
        prop_assert!(parse_group(&write_group(&g)).unwrap().same_group(&g));
    }
}

#[test]
fn partition_sequences() {
    for m in 1..6 {
        let t = Tournament::circular(m);
        let PartitionOutcome::Sequence(s) = partition_sequence(&t, 1).unwrap() else {
            panic!("circular({m}) exceeded")
        };
        assert_eq!(parse_partition_sequence(&write_partition_sequence(&s), t.n()).unwrap(), s);
    }
}

#[test]
fn errors_carry_positions() {
    let at = |r: Result<Tournament, Error>| match r {
        Err(Error::Parse { line, column, .. }) => (line, column),
        other => panic!("expected a parse error, got {other:?}"),
    };
    assert_eq!(at(parse_tournament("tournament 2\n0x\n00\n")).0, 2);
    // A clash between (i,j) and (j,i) is reported at the upper entry.
    assert_eq!(at(parse_tournament("# comment\n\ntournament 2\n01\n11\n")), (4, 2));
    assert!(parse_tournament("").is_err());
    assert!(parse_struct("struct 2\nrel E 1\n0 5\n").is_err());
    assert!(parse_contractions("contractions 3\n0 1\n1 2\n").is_err());
    assert!(parse_order("order 3\n0 1 1\n").is_err());
}
