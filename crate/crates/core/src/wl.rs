//! k-dimensional Weisfeiler-Leman refinement and partition sequences.
//!
//! New colors are numbered by sorting the distinct `(old color, signature)`
//! keys of a round, so ids only depend on the input up to isomorphism and are
//! shared between graphs refined jointly. The multiset signature of a tuple is
//! a pair of 64-bit additive hashes over its extensions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphcore::{scc, wcc, ArcColoredDigraph, ArcColoredTournament, Digraph, Partition, Tournament};

/// Default cap on the number of tuples `n^k` per graph.
pub const DEFAULT_MAX_TUPLES: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableColoring {
    k: usize,
    n: usize,
    colors: Vec<u32>,
    rounds: usize,
    num_colors: usize,
}

impl StableColoring {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Refinement rounds that changed the partition.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Number of colors in the shared table (over all jointly refined graphs).
    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color_of(&self, tuple: &[usize]) -> u32 {
        assert_eq!(tuple.len(), self.k);
        self.colors[tuple.iter().fold(0, |acc, &v| acc * self.n + v)]
    }

    /// Color of the pair `(v, w)`; for k = 2 only.
    #[inline]
    pub fn pair(&self, v: usize, w: usize) -> u32 {
        debug_assert_eq!(self.k, 2);
        self.colors[v * self.n + w]
    }

    /// Color of the constant tuple `(v, …, v)`.
    pub fn vertex_color(&self, v: usize) -> u32 {
        let idx = (0..self.k).fold(0, |acc, _| acc * self.n + v);
        self.colors[idx]
    }

    pub fn vertex_colors(&self) -> Vec<u32> {
        (0..self.n).map(|v| self.vertex_color(v)).collect()
    }

    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.colors {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    pub fn diagonal_colors(&self) -> BTreeSet<u32> {
        (0..self.n).map(|v| self.vertex_color(v)).collect()
    }

    /// Colors carried by edges of `g` (k = 2).
    pub fn edge_colors(&self, g: &Digraph) -> BTreeSet<u32> {
        g.edges().map(|(v, w)| self.pair(v, w)).collect()
    }

    /// The arc coloring `λ(v,w) = χ(v,w)` on arcs and loops (k = 2).
    pub fn arc_colored(&self, t: &Tournament) -> ArcColoredTournament {
        ArcColoredTournament::new(t.clone(), |v, w| self.pair(v, w)).expect("colors below sentinel")
    }
}

#[inline]
fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[inline]
fn lanes(x: u64) -> (u64, u64) {
    (splitmix(x ^ 0x5851_f42d_4c95_7f2d), splitmix(x.rotate_left(17) ^ 0x1405_7b7e_f767_814f))
}

type Key = (u32, u64, u64);

/// Runs refinement jointly; `observe` sees the per-graph colorings after the
/// initial coloring and after every round.
pub fn wl_refine_observed(
    k: usize,
    graphs: &[&ArcColoredDigraph],
    max_tuples: usize,
    mut observe: impl FnMut(&[Vec<u32>]),
) -> Result<Vec<StableColoring>> {
    if k < 2 {
        return Err(Error::arg("WL dimension must be at least 2"));
    }
    let n = graphs.first().map_or(0, |g| g.n());
    if graphs.iter().any(|g| g.n() != n) {
        return Err(Error::arg("joint refinement needs equal vertex counts"));
    }
    let tuples = n
        .checked_pow(k as u32)
        .filter(|&t| t <= max_tuples)
        .ok_or_else(|| Error::Limit(format!("{n}^{k} tuples exceed the cap of {max_tuples}")))?;
    let mut colors = initial_colors(k, n, graphs);
    let mut count = distinct(&colors);
    observe(&colors);
    let mut rounds = 0;
    loop {
        let keys: Vec<Vec<Key>> = graphs
            .iter()
            .zip(&colors)
            .map(|(_, c)| if k == 2 { signatures2(n, c) } else { signatures_k(k, n, c) })
            .collect();
        let mut all: Vec<Key> = keys.iter().flatten().copied().collect();
        all.par_sort_unstable();
        all.dedup();
        if all.len() == count {
            break;
        }
        colors =
            keys.iter().map(|ks| ks.par_iter().map(|key| all.binary_search(key).unwrap() as u32).collect()).collect();
        count = all.len();
        rounds += 1;
        observe(&colors);
    }
    debug_assert!(colors.iter().all(|c| c.len() == tuples));
    Ok(colors.into_iter().map(|colors| StableColoring { k, n, colors, rounds, num_colors: count }).collect())
}

fn distinct(colors: &[Vec<u32>]) -> usize {
    colors.iter().flatten().collect::<BTreeSet<_>>().len()
}

fn initial_colors(k: usize, n: usize, graphs: &[&ArcColoredDigraph]) -> Vec<Vec<u32>> {
    let types: Vec<Vec<Vec<u64>>> = graphs
        .iter()
        .map(|g| {
            (0..n.pow(k as u32))
                .map(|idx| {
                    let t = decode(idx, k, n);
                    let mut ty = Vec::with_capacity(k * k);
                    for &a in &t {
                        for &b in &t {
                            ty.push(((a == b) as u64) << 32 | g.color(a, b) as u64);
                        }
                    }
                    ty
                })
                .collect()
        })
        .collect();
    let table: BTreeSet<&Vec<u64>> = types.iter().flatten().collect();
    let ids: HashMap<&Vec<u64>, u32> = table.into_iter().enumerate().map(|(i, t)| (t, i as u32)).collect();
    types.iter().map(|ts| ts.iter().map(|t| ids[t]).collect()).collect()
}

fn decode(mut idx: usize, k: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for i in (0..k).rev() {
        t[i] = idx % n;
        idx /= n;
    }
    t
}

fn signatures2(n: usize, c: &[u32]) -> Vec<Key> {
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (v, w) = (idx / n, idx % n);
            let (mut h1, mut h2) = (0u64, 0u64);
            for u in 0..n {
                let x = (c[v * n + u] as u64) << 32 | c[u * n + w] as u64;
                let (a, b) = lanes(x);
                h1 = h1.wrapping_add(a);
                h2 = h2.wrapping_add(b);
            }
            (c[idx], h1, h2)
        })
        .collect()
}

fn signatures_k(k: usize, n: usize, c: &[u32]) -> Vec<Key> {
    let pow: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    (0..c.len())
        .into_par_iter()
        .map(|idx| {
            let t = decode(idx, k, n);
            let (mut h1, mut h2) = (0u64, 0u64);
            for w in 0..n {
                let mut acc = 0x243f_6a88_85a3_08d3u64;
                for i in 0..k {
                    let j = idx - t[i] * pow[i] + w * pow[i];
                    acc = splitmix(acc ^ c[j] as u64);
                }
                let (a, b) = lanes(acc);
                h1 = h1.wrapping_add(a);
                h2 = h2.wrapping_add(b);
            }
            (c[idx], h1, h2)
        })
        .collect()
}

pub fn wl_refine(k: usize, g: &ArcColoredDigraph) -> Result<StableColoring> {
    Ok(wl_refine_joint(k, &[g])?.pop().unwrap())
}

/// Refines several graphs with one shared color table.
pub fn wl_refine_joint(k: usize, graphs: &[&ArcColoredDigraph]) -> Result<Vec<StableColoring>> {
    wl_refine_observed(k, graphs, DEFAULT_MAX_TUPLES, |_| {})
}

/// True iff some color has different multiplicities in `g` and `h`.
pub fn wl_distinguishes(k: usize, g: &ArcColoredDigraph, h: &ArcColoredDigraph) -> Result<bool> {
    if g.n() != h.n() {
        return Ok(true);
    }
    let r = wl_refine_joint(k, &[g, h])?;
    Ok(r[0].histogram() != r[1].histogram())
}

pub fn is_2wl_homogeneous(g: &ArcColoredDigraph) -> bool {
    let chi = wl_refine(2, g).expect("2-WL within limits");
    chi.diagonal_colors().len() <= 1
}

/// Subgraph of `g` keeping the edges whose stable color lies in `c`.
pub fn color_subgraph(g: &Digraph, chi: &StableColoring, c: &BTreeSet<u32>) -> Result<Digraph> {
    if chi.k() != 2 || chi.n() != g.n() {
        return Err(Error::arg("color_subgraph needs a 2-WL coloring of the same graph"));
    }
    let diag = chi.diagonal_colors();
    if let Some(x) = c.iter().find(|x| diag.contains(x)) {
        return Err(Error::arg(format!("color {x} is a vertex color")));
    }
    Digraph::from_edges(g.n(), g.edges().filter(|&(v, w)| c.contains(&chi.pair(v, w))))
}

/// The chain `Q_0 ≺ … ≺ Q_l` with `Q_i = scc(T[{c_1..c_i}])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSequence {
    pub partitions: Vec<Partition>,
    pub colors: Vec<u32>,
}

impl PartitionSequence {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionOutcome {
    Sequence(PartitionSequence),
    /// No cross-cluster edge of small mixed degree exists at this level.
    TwinWidthExceeded {
        level: usize,
    },
}

pub fn partition_sequence(t: &Tournament, k: usize) -> Result<PartitionOutcome> {
    let chi = wl_refine(2, &t.into())?;
    partition_sequence_with(t, &chi, k)
}

/// Maximum over `v` of the number of parts of `q` reached by `c`-edges from `v`.
pub fn fan_out(t: &Tournament, chi: &StableColoring, q: &Partition, c: u32) -> usize {
    let mut seen = vec![usize::MAX; q.len()];
    let mut best = 0;
    for v in 0..t.n() {
        let mut cnt = 0;
        for &w in t.digraph().out_neighbors(v) {
            if chi.pair(v, w) == c && seen[q.part_of(w)] != v {
                seen[q.part_of(w)] = v;
                cnt += 1;
            }
        }
        best = best.max(cnt);
    }
    best
}

/// Partition sequence from a given 2-WL coloring of `t` (possibly from a
/// joint refinement).
pub fn partition_sequence_with(t: &Tournament, chi: &StableColoring, k: usize) -> Result<PartitionOutcome> {
    let n = t.n();
    if chi.k() != 2 || chi.n() != n {
        return Err(Error::arg("need a 2-WL coloring of the tournament"));
    }
    if chi.diagonal_colors().len() > 1 {
        return Err(Error::arg("tournament is not 2-WL-homogeneous"));
    }
    let mut by_color: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (v, w) in t.digraph().edges() {
        by_color.entry(chi.pair(v, w)).or_default().push((v, w));
    }
    for es in by_color.values_mut() {
        es.sort_unstable();
    }
    let mut q = Partition::discrete(n);
    let mut seq = PartitionSequence { partitions: vec![q.clone()], colors: Vec::new() };
    let mut chosen = BTreeSet::new();
    let mut hit = vec![false; n];
    while q.len() > 1 {
        let qualifying = by_color.iter().filter(|(c, _)| !chosen.contains(*c)).filter(|(_, es)| {
            es.iter().any(|&(v, w)| {
                q.part_of(v) != q.part_of(w) && crate::graphcore::md_unchecked(t, &q, v, w, &mut hit[..q.len()]) <= k
            })
        });
        let mut picked = None;
        let mut any = false;
        for (&c, _) in qualifying {
            any = true;
            if fan_out(t, chi, &q, c) <= 2 * k + 1 {
                picked = Some(c);
                break;
            }
            log::warn!("color {c} qualifies but violates the 2k+1 fan bound at level {}", seq.len());
        }
        let c = match (picked, any) {
            (Some(c), _) => c,
            (None, false) => return Ok(PartitionOutcome::TwinWidthExceeded { level: seq.len() }),
            (None, true) => {
                return Err(Error::internal(format!(
                    "every qualifying color breaks the 2k+1 fan bound at level {}",
                    seq.len()
                )))
            }
        };
        chosen.insert(c);
        let sub = color_subgraph(t.digraph(), chi, &chosen)?;
        let next = scc(&sub);
        if next != wcc(&sub) {
            return Err(Error::internal("strong and weak components of a color subgraph differ"));
        }
        if !(q.refines(&next) && next.len() < q.len()) {
            return Err(Error::internal("partition sequence did not coarsen"));
        }
        q = next;
        seq.partitions.push(q.clone());
        seq.colors.push(c);
    }
    Ok(PartitionOutcome::Sequence(seq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acd(t: &Tournament) -> ArcColoredDigraph {
        t.into()
    }

    #[test]
    fn three_cycle_classes() {
        let chi = wl_refine(2, &acd(&Tournament::circular(1))).unwrap();
        assert_eq!(chi.histogram().len(), 3);
        assert_eq!(chi.diagonal_colors().len(), 1);
        assert_eq!(chi.colors().len(), 9);
    }

    #[test]
    fn transitive_vertex_colors() {
        let chi = wl_refine(2, &acd(&Tournament::transitive(3))).unwrap();
        assert_eq!(chi.diagonal_colors().len(), 3);
        assert!(!is_2wl_homogeneous(&acd(&Tournament::transitive(3))));
        assert!(is_2wl_homogeneous(&acd(&Tournament::circular(1))));
        assert!(is_2wl_homogeneous(&acd(&Tournament::transitive(1))));
    }

    #[test]
    fn dimension_checked() {
        assert!(wl_refine(1, &acd(&Tournament::circular(1))).is_err());
        let g = acd(&Tournament::circular(2));
        assert!(matches!(wl_refine_observed(3, &[&g], 100, |_| {}), Err(Error::Limit(_))));
    }

    #[test]
    fn distinguishing() {
        let c = acd(&Tournament::circular(1));
        let t = acd(&Tournament::transitive(3));
        assert!(!wl_distinguishes(2, &c, &c).unwrap());
        assert!(wl_distinguishes(2, &c, &t).unwrap());
        assert!(wl_distinguishes(2, &c, &acd(&Tournament::transitive(4))).unwrap());
        assert!(wl_distinguishes(3, &c, &t).unwrap());
    }

    #[test]
    fn color_subgraph_filters() {
        let t = Tournament::circular(1);
        let chi = wl_refine(2, &acd(&t)).unwrap();
        let all = chi.edge_colors(t.digraph());
        assert_eq!(all.len(), 1);
        assert_eq!(color_subgraph(t.digraph(), &chi, &all).unwrap(), *t.digraph());
        assert_eq!(color_subgraph(t.digraph(), &chi, &BTreeSet::new()).unwrap().edge_count(), 0);
        assert!(color_subgraph(t.digraph(), &chi, &chi.diagonal_colors()).is_err());
    }

    #[test]
    fn partition_sequence_examples() {
        let t = Tournament::circular(1);
        match partition_sequence(&t, 1).unwrap() {
            PartitionOutcome::Sequence(s) => {
                assert_eq!(s.len(), 1);
                assert!(s.partitions[1].is_trivial());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(partition_sequence(&t, 0).unwrap(), PartitionOutcome::TwinWidthExceeded { level: 0 });
        assert!(partition_sequence(&Tournament::transitive(3), 1).is_err());
    }

    #[test]
    fn circular_two_respects_fan_bound() {
        let t = Tournament::circular(2);
        let chi = wl_refine(2, &acd(&t)).unwrap();
        let PartitionOutcome::Sequence(s) = partition_sequence_with(&t, &chi, 1).unwrap() else { panic!() };
        assert!(s.partitions.last().unwrap().is_trivial());
        for (i, &c) in s.colors.iter().enumerate() {
            assert!(fan_out(&t, &chi, &s.partitions[i], c) <= 3);
        }
    }
}
