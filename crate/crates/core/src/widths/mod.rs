//! Contraction sequences and width parameters.
//!
//! A contraction sequence is stored as its merge list. Parts are named by
//! their smallest vertex; merging `a` and `b` yields a part named
//! `min(a, b)`.

mod decomp;
mod exact;

pub use decomp::{
    contraction_from_dpd, contraction_from_dtd, cutwidth_of_order, dpd_from_order, dtd_from_dpd, incidence_digraph,
    validate_dpd, validate_dtd, DirectedPathDecomposition, DirectedTreeDecomposition, Violation,
};
pub use exact::{dtd_width_at_most, exact_cutwidth, exact_dpw, exact_twin_width, EXACT_TWW_MAX};

use crate::error::{Error, Result};
use crate::graphcore::{Partition, RelStructure, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSequence {
    n: usize,
    merges: Vec<(usize, usize)>,
}

impl ContractionSequence {
    /// Checks that every merge names two live parts and that the sequence
    /// ends in the trivial partition.
    pub fn new(n: usize, merges: Vec<(usize, usize)>) -> Result<Self> {
        if merges.len() != n.saturating_sub(1) {
            return Err(Error::Contraction {
                step: merges.len().min(n.saturating_sub(1)),
                message: format!("expected {} merges, got {}", n.saturating_sub(1), merges.len()),
            });
        }
        let mut alive = vec![true; n];
        for (step, &(a, b)) in merges.iter().enumerate() {
            let bad = |m: String| Error::Contraction { step, message: m };
            if a >= n || b >= n {
                return Err(bad(format!("part id out of range in ({a},{b})")));
            }
            if a == b {
                return Err(bad(format!("merging part {a} with itself")));
            }
            if !alive[a] || !alive[b] {
                let dead = if alive[a] { b } else { a };
                return Err(bad(format!("part {dead} no longer exists")));
            }
            alive[a.max(b)] = false;
        }
        Ok(ContractionSequence { n, merges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[(usize, usize)] {
        &self.merges
    }

    /// `P_1, …, P_n`.
    pub fn partitions(&self) -> Vec<Partition> {
        let mut label: Vec<usize> = (0..self.n).collect();
        let mut out = vec![Partition::discrete(self.n)];
        for &(a, b) in &self.merges {
            let (lo, hi) = (a.min(b), a.max(b));
            for l in label.iter_mut() {
                if *l == hi {
                    *l = lo;
                }
            }
            out.push(Partition::from_labels(&label));
        }
        out
    }
}

/// Builds a sequence from merges of arbitrary representatives.
#[derive(Clone, Debug)]
pub struct ContractionBuilder {
    parent: Vec<usize>,
    merges: Vec<(usize, usize)>,
}

impl ContractionBuilder {
    pub fn new(n: usize) -> Self {
        ContractionBuilder { parent: (0..n).collect(), merges: Vec::new() }
    }

    /// Part id (minimum vertex) of the part containing `v`.
    pub fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = v;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// Merges the parts containing `u` and `v`; returns false if they were
    /// already the same part.
    pub fn merge_vertices(&mut self, u: usize, v: usize) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.merges.push((lo, hi));
        true
    }

    pub fn parts_left(&self) -> usize {
        self.parent.len() - self.merges.len()
    }

    /// Completes the sequence by merging whatever remains into part 0.
    pub fn finish(mut self) -> ContractionSequence {
        for v in 1..self.parent.len() {
            self.merge_vertices(0, v);
        }
        ContractionSequence { n: self.parent.len(), merges: self.merges }
    }
}

/// Red degree of `A/P_i` for `i = 1..n`, maintained incrementally.
pub fn red_degree_profile(a: &RelStructure, seq: &ContractionSequence) -> Result<Vec<usize>> {
    let n = a.n();
    if seq.n() != n {
        return Err(Error::arg(format!("sequence is for {} vertices, structure has {n}", seq.n())));
    }
    let mut parts: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut masks: Vec<VertexSet> = (0..n).map(|v| VertexSet::from_slice(n, &[v])).collect();
    let mut alive = vec![true; n];
    let mut red: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| a.red().get(u, v)).collect()).collect();
    let mut deg: Vec<usize> = red.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let mut out = vec![deg.iter().copied().max().unwrap_or(0)];
    for &(x, y) in seq.merges() {
        let (lo, hi) = (x.min(y), x.max(y));
        let moved = std::mem::take(&mut parts[hi]);
        for &v in &moved {
            masks[lo].insert(v);
        }
        parts[lo].extend(moved);
        alive[hi] = false;
        for c in 0..n {
            if red[hi][c] {
                red[hi][c] = false;
                red[c][hi] = false;
                deg[c] -= 1;
            }
        }
        deg[hi] = 0;
        for c in 0..n {
            if c == lo || !alive[c] {
                continue;
            }
            let r = !a.homogeneous_masked(&parts[lo], &masks[lo], &parts[c], &masks[c]);
            if r != red[lo][c] {
                red[lo][c] = r;
                red[c][lo] = r;
                if r {
                    deg[c] += 1;
                    deg[lo] += 1;
                } else {
                    deg[c] -= 1;
                    deg[lo] -= 1;
                }
            }
        }
        out.push(deg.iter().copied().max().unwrap_or(0));
    }
    Ok(out)
}

/// Width of the sequence: the maximum red degree over all quotients.
pub fn verify_contraction(a: &RelStructure, seq: &ContractionSequence) -> Result<usize> {
    Ok(red_degree_profile(a, seq)?.into_iter().max().unwrap_or(0))
}

/// Bijection from vertices to positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOrder {
    pos: Vec<usize>,
}

impl LinearOrder {
    pub fn from_positions(pos: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; pos.len()];
        for &p in &pos {
            if p >= pos.len() || seen[p] {
                return Err(Error::arg(format!("positions are not a permutation (at {p})")));
            }
            seen[p] = true;
        }
        Ok(LinearOrder { pos })
    }

    /// `seq[i]` is the vertex at position `i`.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let mut pos = vec![usize::MAX; seq.len()];
        for (i, &v) in seq.iter().enumerate() {
            if v >= seq.len() || pos[v] != usize::MAX {
                return Err(Error::arg(format!("vertex sequence is not a permutation (at {v})")));
            }
            pos[v] = i;
        }
        Ok(LinearOrder { pos })
    }

    pub fn identity(n: usize) -> Self {
        LinearOrder { pos: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    pub fn sequence(&self) -> Vec<usize> {
        let mut s = vec![0; self.pos.len()];
        for (v, &p) in self.pos.iter().enumerate() {
            s[p] = v;
        }
        s
    }
}

/// Order in which every part of every `P_i` is an interval: the leaves of
/// the merge tree read left to right, smaller part first.
pub fn order_for_tww(seq: &ContractionSequence) -> LinearOrder {
    let n = seq.n();
    if n == 0 {
        return LinearOrder::identity(0);
    }
    // Nodes 0..n are leaves, n.. are merges; children[node] = (left, right).
    let mut children: Vec<(usize, usize)> = Vec::with_capacity(seq.merges().len());
    let mut top: Vec<usize> = (0..n).collect();
    for &(a, b) in seq.merges() {
        let (lo, hi) = (a.min(b), a.max(b));
        children.push((top[lo], top[hi]));
        top[lo] = n + children.len() - 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![top[0]];
    while let Some(x) = stack.pop() {
        if x < n {
            order.push(x);
        } else {
            let (l, r) = children[x - n];
            stack.push(r);
            stack.push(l);
        }
    }
    LinearOrder::from_sequence(&order).expect("merge tree covers every vertex once")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::Tournament;

    fn chain(n: usize) -> ContractionSequence {
        ContractionSequence::new(n, (1..n).map(|i| (0, i)).collect()).unwrap()
    }

    #[test]
    fn validation_reports_step() {
        assert!(ContractionSequence::new(3, vec![(0, 1), (0, 2)]).is_ok());
        let e = ContractionSequence::new(3, vec![(0, 1), (1, 2)]).unwrap_err();
        assert_eq!(e, Error::Contraction { step: 1, message: "part 1 no longer exists".into() });
        assert!(matches!(ContractionSequence::new(3, vec![(0, 1)]), Err(Error::Contraction { .. })));
        assert!(matches!(ContractionSequence::new(2, vec![(1, 1)]), Err(Error::Contraction { step: 0, .. })));
        assert_eq!(ContractionSequence::new(1, vec![]).unwrap().partitions().len(), 1);
    }

    #[test]
    fn transitive_consecutive_is_zero() {
        let t = Tournament::transitive(5);
        assert_eq!(verify_contraction(&RelStructure::from_tournament(&t), &chain(5)).unwrap(), 0);
    }

    #[test]
    fn cycle_is_one() {
        let a = RelStructure::from_tournament(&Tournament::circular(1));
        for m in [vec![(0, 1), (0, 2)], vec![(1, 2), (0, 1)], vec![(0, 2), (0, 1)]] {
            assert_eq!(verify_contraction(&a, &ContractionSequence::new(3, m).unwrap()).unwrap(), 1);
        }
    }

    #[test]
    fn circular_left_to_right_exceeds_one() {
        for m in 2..8 {
            let t = Tournament::circular(m);
            let w = verify_contraction(&RelStructure::from_tournament(&t), &chain(t.n())).unwrap();
            assert!(w >= 2, "T_{m}");
        }
    }

    #[test]
    fn profile_matches_quotients() {
        let t = Tournament::circular(3);
        let a = RelStructure::from_tournament(&t);
        let seq = ContractionSequence::new(7, vec![(3, 5), (0, 6), (1, 2), (0, 3), (0, 4), (0, 1)]).unwrap();
        let prof = red_degree_profile(&a, &seq).unwrap();
        let direct: Vec<usize> = seq.partitions().iter().map(|p| a.quotient(p).unwrap().red_degree()).collect();
        assert_eq!(prof, direct);
    }

    #[test]
    fn builder_and_order() {
        let mut b = ContractionBuilder::new(4);
        assert!(b.merge_vertices(3, 2));
        assert!(!b.merge_vertices(2, 3));
        b.merge_vertices(1, 3);
        let seq = b.finish();
        assert_eq!(seq.merges(), &[(2, 3), (1, 2), (0, 1)]);
        let ord = order_for_tww(&seq);
        assert_eq!(ord.sequence(), vec![0, 1, 2, 3]);
        let ord = order_for_tww(&ContractionSequence::new(2, vec![(0, 1)]).unwrap());
        assert_eq!(ord.sequence(), vec![0, 1]);
    }

    #[test]
    fn order_intervals_for_transitive_chain() {
        let ord = order_for_tww(&chain(4));
        let s = ord.sequence();
        assert!(s == vec![0, 1, 2, 3] || s == vec![3, 2, 1, 0]);
    }
}
