//! Individualization-refinement search, used as an oracle and for the small
//! quotient tournaments inside the lifting step.

use crate::graphcore::{ArcColoredDigraph, Tournament};
use crate::permgroup::{Coset, IsoSet, PermGroup, Permutation};

type Signature = (u32, Vec<(u32, u32, u32)>);

fn signature(g: &ArcColoredDigraph, c: &[u32], v: usize) -> Signature {
    let mut s: Vec<(u32, u32, u32)> =
        (0..g.n()).filter(|&w| w != v).map(|w| (g.color(v, w), g.color(w, v), c[w])).collect();
    s.sort_unstable();
    (c[v], s)
}

fn class_count(c: &[u32]) -> usize {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// Joint color refinement to the coarsest equitable coloring. Returns false
/// as soon as the two color histograms differ.
fn refine(g1: &ArcColoredDigraph, c1: &mut [u32], g2: &ArcColoredDigraph, c2: &mut [u32]) -> bool {
    loop {
        let before = class_count(c1);
        let s1: Vec<Signature> = (0..g1.n()).map(|v| signature(g1, c1, v)).collect();
        let s2: Vec<Signature> = (0..g2.n()).map(|v| signature(g2, c2, v)).collect();
        let mut all: Vec<&Signature> = s1.iter().chain(&s2).collect();
        all.sort_unstable();
        all.dedup();
        let id = |s: &Signature| all.binary_search(&s).unwrap() as u32;
        for (v, s) in s1.iter().enumerate() {
            c1[v] = id(s);
        }
        for (v, s) in s2.iter().enumerate() {
            c2[v] = id(s);
        }
        let (mut h1, mut h2) = (c1.to_vec(), c2.to_vec());
        h1.sort_unstable();
        h2.sort_unstable();
        if h1 != h2 {
            return false;
        }
        if class_count(c1) == before {
            return true;
        }
    }
}

/// Smallest non-singleton cell, ties broken by color.
fn target_cell(c: &[u32]) -> Option<u32> {
    let mut size = std::collections::BTreeMap::new();
    for &x in c {
        *size.entry(x).or_insert(0usize) += 1;
    }
    size.into_iter().filter(|&(_, s)| s > 1).min_by_key(|&(col, s)| (s, col)).map(|(col, _)| col)
}

const INDIVIDUAL: u32 = u32::MAX;

fn search(g1: &ArcColoredDigraph, g2: &ArcColoredDigraph, mut c1: Vec<u32>, mut c2: Vec<u32>) -> Option<Vec<usize>> {
    if !refine(g1, &mut c1, g2, &mut c2) {
        return None;
    }
    match target_cell(&c1) {
        None => {
            let mut at = vec![0; c2.len()];
            for (w, &col) in c2.iter().enumerate() {
                at[col as usize] = w;
            }
            let p: Vec<usize> = c1.iter().map(|&col| at[col as usize]).collect();
            g1.is_isomorphism(g2, &p).then_some(p)
        }
        Some(col) => {
            let x = c1.iter().position(|&a| a == col).unwrap();
            for y in (0..c2.len()).filter(|&y| c2[y] == col) {
                let (mut d1, mut d2) = (c1.clone(), c2.clone());
                d1[x] = INDIVIDUAL;
                d2[y] = INDIVIDUAL;
                if let Some(p) = search(g1, g2, d1, d2) {
                    return Some(p);
                }
            }
            None
        }
    }
}

fn loop_colors(g: &ArcColoredDigraph) -> Vec<u32> {
    (0..g.n()).map(|v| g.color(v, v)).collect()
}

fn orbit_of(gens: &[Permutation], n: usize, x: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    seen
}

/// Generators of `Aut(g)`: along the first path of the search tree, each
/// level contributes one automorphism per orbit of the pointwise stabilizer
/// of the earlier points.
pub fn automorphism_group(g: &ArcColoredDigraph) -> PermGroup {
    let n = g.n();
    let mut c = loop_colors(g);
    let mut c2 = c.clone();
    refine(g, &mut c, g, &mut c2);
    let mut path = Vec::new();
    while let Some(col) = target_cell(&c) {
        let x = c.iter().position(|&a| a == col).unwrap();
        path.push((c.clone(), x, col));
        c[x] = INDIVIDUAL;
        let mut c2 = c.clone();
        refine(g, &mut c, g, &mut c2);
    }
    let mut gens: Vec<Permutation> = Vec::new();
    for (c, x, col) in path.iter().rev() {
        let mut orbit = orbit_of(&gens, n, *x);
        for y in 0..n {
            if c[y] != *col || orbit[y] {
                continue;
            }
            let (mut d1, mut d2) = (c.clone(), c.clone());
            d1[*x] = INDIVIDUAL;
            d2[y] = INDIVIDUAL;
            if let Some(p) = search(g, g, d1, d2) {
                gens.push(Permutation::from_images(p).expect("search returns bijections"));
                orbit = orbit_of(&gens, n, *x);
            }
        }
    }
    PermGroup::new(n, gens).expect("generators have the right degree")
}

/// Color-preserving isomorphisms between two arc-colored digraphs; loop
/// colors act as vertex colors.
pub fn small_iso(g1: &ArcColoredDigraph, g2: &ArcColoredDigraph) -> IsoSet {
    if g1.n() != g2.n() {
        return IsoSet::Empty;
    }
    match search(g1, g2, loop_colors(g1), loop_colors(g2)) {
        None => IsoSet::Empty,
        Some(p) => {
            let rep = Permutation::from_images(p).expect("search returns bijections");
            IsoSet::Coset(Coset::new(automorphism_group(g1), rep).expect("degrees agree"))
        }
    }
}

pub fn brute_force_iso(t1: &Tournament, t2: &Tournament) -> IsoSet {
    small_iso(&t1.into(), &t2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn cycles_and_chains() {
        let c = Tournament::circular(1);
        let s = brute_force_iso(&c, &c);
        assert_eq!(s.size(), BigUint::from(3u32));
        let t = Tournament::transitive(5);
        assert_eq!(brute_force_iso(&t, &t).size(), BigUint::from(1u32));
        assert!(brute_force_iso(&c, &Tournament::transitive(3)).is_empty());
        assert!(brute_force_iso(&c, &Tournament::transitive(4)).is_empty());
    }

    #[test]
    fn colors_respected() {
        let c: ArcColoredDigraph = (&Tournament::circular(2)).into();
        assert_eq!(small_iso(&c, &c).size(), BigUint::from(5u32));
        let mut d = c.clone();
        d.set_loop(0, 7);
        assert!(small_iso(&c, &d).is_empty());
        assert_eq!(small_iso(&d, &d).size(), BigUint::from(1u32));
        let one: ArcColoredDigraph = (&Tournament::transitive(1)).into();
        assert_eq!(small_iso(&one, &one).size(), BigUint::from(1u32));
    }

    #[test]
    fn empty_graph() {
        let z: ArcColoredDigraph = (&Tournament::transitive(0)).into();
        assert!(!small_iso(&z, &z).is_empty());
    }
}
