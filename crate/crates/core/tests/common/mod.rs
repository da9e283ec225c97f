//! Oracles shared by the integration tests. Everything here is deliberately
//! naive and independent of the library's search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use twintour_core::graphcore::{Digraph, Tournament};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

fn upper_code(n: usize, edge: impl Fn(usize, usize) -> bool) -> u64 {
    let mut c = 0u64;
    let mut b = 0;
    for u in 0..n {
        for v in u + 1..n {
            if edge(u, v) {
                c |= 1 << b;
            }
            b += 1;
        }
    }
    c
}

/// Least code over all relabellings.
pub fn canonical_code(t: &Tournament, perms: &[Vec<usize>]) -> u64 {
    let n = t.n();
    perms
        .iter()
        .map(|p| {
            let mut inv = vec![0; n];
            for (v, &x) in p.iter().enumerate() {
                inv[x] = v;
            }
            upper_code(n, |u, v| t.has_edge(inv[u], inv[v]))
        })
        .min()
        .unwrap()
}

/// One tournament per isomorphism class for each size `0..=max`.
/// Classes of size `n` are found by adding a vertex to every class of size
/// `n-1` in every possible way.
pub fn classes_up_to(max: usize) -> Vec<Vec<Tournament>> {
    let mut all = vec![vec![Tournament::transitive(0)]];
    for n in 1..=max {
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for r in &all[n - 1] {
            for mask in 0u32..1 << (n - 1) {
                let t = Tournament::from_fn(n, |u, v| match (u == n - 1, v == n - 1) {
                    (false, false) => r.has_edge(u, v),
                    (true, _) => mask >> v & 1 == 1,
                    (_, true) => mask >> u & 1 == 0,
                });
                if seen.insert(canonical_code(&t, &perms)) {
                    reps.push(t);
                }
            }
        }
        all.push(reps);
    }
    all
}

/// Number of tournament isomorphism classes on n vertices, n = 0..=7.
pub const CLASS_COUNTS: [usize; 8] = [1, 1, 1, 2, 4, 12, 56, 456];

/// Every bijection `p` with `u→v ⇔ p[u]→p[v]`.
pub fn isomorphisms(a: &Tournament, b: &Tournament, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if a.n() != b.n() {
        return Vec::new();
    }
    let n = a.n();
    perms
        .iter()
        .filter(|p| (0..n).all(|u| (0..n).all(|v| u == v || a.has_edge(u, v) == b.has_edge(p[u], p[v]))))
        .cloned()
        .collect()
}

/// Cut width of the order given as a vertex sequence: most edges leaving a
/// prefix.
pub fn cutwidth_of_sequence(g: &Digraph, seq: &[usize]) -> usize {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in seq.iter().enumerate() {
        pos[v] = i;
    }
    (0..n.saturating_sub(1)).map(|i| g.edges().filter(|&(u, v)| pos[u] <= i && i < pos[v]).count()).max().unwrap_or(0)
}

/// `|M(v,w)|` straight from the definition.
pub fn md(t: &Tournament, v: usize, w: usize) -> usize {
    (0..t.n())
        .filter(|&u| u != v && u != w)
        .filter(|&u| (t.has_edge(u, v) && t.has_edge(w, u)) || (t.has_edge(v, u) && t.has_edge(u, w)))
        .count()
}

pub fn relabel_random<R: rand::Rng>(t: &Tournament, rng: &mut R) -> (Tournament, Vec<usize>) {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..t.n()).collect();
    p.shuffle(rng);
    (t.relabel(&p), p)
}
