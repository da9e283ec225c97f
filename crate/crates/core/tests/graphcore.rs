#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twintour_core::graphcore::{
    mixed_degree_partition, mixed_neighbors, scc, wcc, Digraph, Partition, RelStructure, Tournament,
};

fn tournament(max: usize) -> impl Strategy<Value = Tournament> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| Tournament::random(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn tournament_axioms(t in tournament(16)) {
        let n = t.n();
        for u in 0..n {
            prop_assert!(!t.has_edge(u, u));
            for v in u + 1..n {
                prop_assert!(t.has_edge(u, v) != t.has_edge(v, u));
            }
        }
        prop_assert_eq!(t.digraph().edge_count(), n * (n - 1) / 2);
    }

    #[test]
    fn code_round_trip(t in tournament(11)) {
        prop_assert_eq!(Tournament::from_code(t.n(), t.code()), t);
    }

    #[test]
    fn relabel_keeps_score_sequence((t, p) in tournament(14).prop_flat_map(|t| { let n = t.n(); (Just(t), permutation(n)) })) {
        let u = t.relabel(&p);
        for v in 0..t.n() {
            prop_assert_eq!(t.out_degree(v), u.out_degree(p[v]));
        }
    }

    #[test]
    fn scc_of_tournament_is_a_chain(t in tournament(14)) {
        let p = scc(t.digraph());
        // Between two strong components all edges point the same way.
        for i in 0..p.len() {
            for j in 0..p.len() {
                if i != j {
                    let dirs: Vec<bool> = p.part(i).iter().flat_map(|&u| p.part(j).iter().map(move |&v| (u, v)))
                        .map(|(u, v)| t.has_edge(u, v)).collect();
                    prop_assert!(dirs.iter().all(|&d| d == dirs[0]));
                }
            }
        }
        prop_assert!(p.refines(&wcc(t.digraph())));
        prop_assert!(wcc(t.digraph()).is_trivial());
    }

    #[test]
    fn mixed_neighbors_are_symmetric(t in tournament(12), a in 0usize..12, b in 0usize..12) {
        let (v, w) = (a % t.n(), b % t.n());
        prop_assume!(v != w);
        let mut x = mixed_neighbors(&t, v, w).unwrap();
        let mut y = mixed_neighbors(&t, w, v).unwrap();
        x.sort_unstable();
        y.sort_unstable();
        prop_assert_eq!(&x, &y);
        // With singleton parts every mixed neighbour is its own foreign part.
        if t.has_edge(v, w) {
            prop_assert_eq!(mixed_degree_partition(&t, &Partition::discrete(t.n()), v, w).unwrap(), x.len());
        }
    }

    #[test]
    fn discrete_quotient_is_the_structure(t in tournament(10)) {
        let a = RelStructure::from_tournament(&t);
        let q = a.quotient(&Partition::discrete(t.n())).unwrap();
        prop_assert_eq!(q.red_degree(), 0);
        prop_assert_eq!(&q.relations()[0].1, &a.relations()[0].1);
        let trivial = a.quotient(&Partition::trivial(t.n())).unwrap();
        prop_assert_eq!(trivial.n(), 1);
        prop_assert_eq!(trivial.red_degree(), 0);
    }
}

#[test]
fn quotient_examples() {
    let chain = RelStructure::from_tournament(&Tournament::transitive(3));
    let q = chain.quotient(&Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap()).unwrap();
    assert_eq!(q.red_degree(), 0);
    assert!(q.relations()[0].1.get(0, 1));
    let cycle = RelStructure::from_tournament(&Tournament::circular(1));
    let q = cycle.quotient(&Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap()).unwrap();
    assert_eq!(q.red_edges().len(), 1);
    assert_eq!(q.red_degree(), 1);
}

#[test]
fn red_edges_break_homogeneity() {
    let mut a = RelStructure::new(3);
    a.add_red(0, 2).unwrap();
    assert!(!a.homogeneous(&[0, 1], &[2]));
    assert!(a.homogeneous(&[1], &[2]));
}

#[test]
fn bad_inputs_are_rejected() {
    assert!(Digraph::from_edges(2, [(0, 2)]).is_err());
    assert!(Tournament::from_digraph(Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap()).is_err());
    assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
    assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
    assert!(mixed_neighbors(&Tournament::circular(1), 1, 1).is_err());
}
