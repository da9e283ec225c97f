use std::collections::BTreeMap;
use std::fmt;

use super::{ContractionBuilder, ContractionSequence, LinearOrder};
use crate::error::{Error, Result};
use crate::graphcore::{scc, Digraph, Tournament, VertexSet};

/// Why a decomposition is invalid, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("decomposition is for {expected} vertices, graph has {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("vertex {0} is in no bag")]
    Uncovered(usize),
    #[error("vertex {vertex} is missing from bag {bag} inside its interval")]
    NotContiguous { vertex: usize, bag: usize },
    #[error("edge ({from},{to}) has no bags l <= r with {to} in l and {from} in r")]
    EdgeOrder { from: usize, to: usize },
    #[error("vertex {vertex} is in the bags of nodes {first} and {second}")]
    Overlap { vertex: usize, first: usize, second: usize },
    #[error("guard of node {node} misses a walk leaving its subtree through {witness}")]
    Guard { node: usize, witness: usize },
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Decomposition(v.to_string())
    }
}

fn sorted_set(n: usize, mut s: Vec<usize>, what: &str) -> Result<Vec<usize>> {
    s.sort_unstable();
    s.dedup();
    if let Some(&v) = s.last().filter(|&&v| v >= n) {
        return Err(Error::Decomposition(format!("{what} contains vertex {v} outside 0..{n}")));
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedPathDecomposition {
    n: usize,
    bags: Vec<Vec<usize>>,
}

impl DirectedPathDecomposition {
    pub fn new(n: usize, bags: Vec<Vec<usize>>) -> Result<Self> {
        let bags = bags.into_iter().map(|b| sorted_set(n, b, "bag")).collect::<Result<_>>()?;
        Ok(DirectedPathDecomposition { n, bags })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// First and last bag of every vertex, `None` for uncovered ones.
    fn spans(&self) -> Vec<Option<(usize, usize)>> {
        let mut span: Vec<Option<(usize, usize)>> = vec![None; self.n];
        for (i, b) in self.bags.iter().enumerate() {
            for &v in b {
                span[v] = Some(span[v].map_or((i, i), |(l, _)| (l, i)));
            }
        }
        span
    }
}

pub fn validate_dpd(g: &Digraph, d: &DirectedPathDecomposition) -> std::result::Result<(), Violation> {
    if g.n() != d.n {
        return Err(Violation::SizeMismatch { expected: d.n, actual: g.n() });
    }
    let span = d.spans();
    for (v, s) in span.iter().enumerate() {
        let Some((l, r)) = *s else { return Err(Violation::Uncovered(v)) };
        if let Some(bag) = (l..=r).find(|&i| d.bags[i].binary_search(&v).is_err()) {
            return Err(Violation::NotContiguous { vertex: v, bag });
        }
    }
    for (v, w) in g.edges() {
        let (first_w, last_v) = (span[w].unwrap().0, span[v].unwrap().1);
        if first_w > last_v {
            return Err(Violation::EdgeOrder { from: v, to: w });
        }
    }
    Ok(())
}

/// Rooted tree with a bag per node and a guard on each tree edge. The guard
/// of edge `(parent(t), t)` is stored at `t`; the root's guard is empty.
/// Empty bags are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedTreeDecomposition {
    n: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    bags: Vec<Vec<usize>>,
    guards: Vec<Vec<usize>>,
    root: usize,
}

impl DirectedTreeDecomposition {
    pub fn new(n: usize, parent: Vec<Option<usize>>, bags: Vec<Vec<usize>>, guards: Vec<Vec<usize>>) -> Result<Self> {
        let nodes = parent.len();
        if nodes == 0 || bags.len() != nodes || guards.len() != nodes {
            return Err(Error::Decomposition("tree needs at least one node and one bag and guard per node".into()));
        }
        let roots: Vec<usize> = (0..nodes).filter(|&t| parent[t].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Decomposition(format!("tree has {} roots", roots.len())));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); nodes];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= nodes {
                    return Err(Error::Decomposition(format!("parent {p} of node {t} does not exist")));
                }
                children[p].push(t);
            }
        }
        let mut seen = vec![false; nodes];
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            seen[t] = true;
            stack.extend_from_slice(&children[t]);
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(Error::Decomposition(format!("node {t} is not reachable from the root")));
        }
        let bags: Vec<Vec<usize>> = bags.into_iter().map(|b| sorted_set(n, b, "bag")).collect::<Result<_>>()?;
        let guards: Vec<Vec<usize>> = guards.into_iter().map(|b| sorted_set(n, b, "guard")).collect::<Result<_>>()?;
        if !guards[root].is_empty() {
            return Err(Error::Decomposition("the root has no incoming tree edge to guard".into()));
        }
        Ok(DirectedTreeDecomposition { n, parent, children, bags, guards, root })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t]
    }

    /// Guard of the tree edge entering `t`.
    pub fn guard(&self, t: usize) -> &[usize] {
        &self.guards[t]
    }

    /// `Γ(t)`: the bag plus the guards of all tree edges at `t`.
    pub fn gamma(&self, t: usize) -> Vec<usize> {
        let mut s = self.bags[t].clone();
        s.extend_from_slice(&self.guards[t]);
        for &c in &self.children[t] {
            s.extend_from_slice(&self.guards[c]);
        }
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn width(&self) -> usize {
        (0..self.nodes()).map(|t| self.gamma(t).len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes());
        let mut stack = vec![(self.root, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
            } else {
                stack.push((t, true));
                stack.extend(self.children[t].iter().rev().map(|&c| (c, false)));
            }
        }
        out
    }

    /// `β(R_t)` for every node.
    pub fn subtree_sets(&self) -> Vec<VertexSet> {
        let mut sub: Vec<VertexSet> = self.bags.iter().map(|b| VertexSet::from_slice(self.n, b)).collect();
        for t in self.post_order() {
            if let Some(p) = self.parent[t] {
                let vs: Vec<usize> = sub[t].iter().collect();
                for v in vs {
                    sub[p].insert(v);
                }
            }
        }
        sub
    }
}

/// Vertices reachable from `start` inside `allowed`, following out-edges or
/// in-edges.
fn reach(g: &Digraph, start: &[usize], allowed: &[bool], forward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut stack: Vec<usize> = start.to_vec();
    for &s in start {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        let next = if forward { g.out_neighbors(v) } else { g.in_neighbors(v) };
        for &w in next {
            if allowed[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

pub fn validate_dtd(g: &Digraph, d: &DirectedTreeDecomposition) -> std::result::Result<(), Violation> {
    if g.n() != d.n {
        return Err(Violation::SizeMismatch { expected: d.n, actual: g.n() });
    }
    let mut owner: Vec<Option<usize>> = vec![None; d.n];
    for (t, b) in d.bags.iter().enumerate() {
        for &v in b {
            if let Some(first) = owner[v] {
                return Err(Violation::Overlap { vertex: v, first, second: t });
            }
            owner[v] = Some(t);
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        return Err(Violation::Uncovered(v));
    }
    let sub = d.subtree_sets();
    for t in 0..d.nodes() {
        if t == d.root {
            continue;
        }
        let mut allowed = vec![true; d.n];
        for &x in &d.guards[t] {
            allowed[x] = false;
        }
        let start: Vec<usize> = sub[t].iter().filter(|&v| allowed[v]).collect();
        let fwd = reach(g, &start, &allowed, true);
        let bwd = reach(g, &start, &allowed, false);
        if let Some(x) = (0..d.n).find(|&x| allowed[x] && !sub[t].contains(x) && fwd[x] && bwd[x]) {
            return Err(Violation::Guard { node: t, witness: x });
        }
    }
    Ok(())
}

/// Edges leaving each prefix of the order, maximised.
pub fn cutwidth_of_order(g: &Digraph, ord: &LinearOrder) -> usize {
    let mut in_prefix = vec![false; g.n()];
    let mut cut: isize = 0;
    let mut best = 0;
    for v in ord.sequence() {
        in_prefix[v] = true;
        cut += g.out_neighbors(v).iter().filter(|&&w| !in_prefix[w]).count() as isize;
        cut -= g.in_neighbors(v).iter().filter(|&&u| in_prefix[u] && u != v).count() as isize;
        best = best.max(cut as usize);
    }
    best
}

/// Bag `i` holds the vertices placed at or before `i` whose last
/// out-neighbour is at or after `i`.
pub fn dpd_from_order(g: &Digraph, ord: &LinearOrder) -> DirectedPathDecomposition {
    let n = g.n();
    let seq = ord.sequence();
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let p = ord.position(v);
        let last = g.out_neighbors(v).iter().map(|&w| ord.position(w)).fold(p, usize::max);
        for bag in &mut bags[p..=last] {
            bag.push(v);
        }
    }
    debug_assert!(seq.iter().enumerate().all(|(i, v)| bags[i].contains(v)));
    DirectedPathDecomposition::new(n, bags).expect("bags hold valid vertices")
}

/// The path read backwards as a tree: node `i` has parent `i+1`, keeps the
/// vertices new in bag `i`, and its edge is guarded by `β(i) ∩ β(i+1)`.
pub fn dtd_from_dpd(g: &Digraph, d: &DirectedPathDecomposition) -> Result<DirectedTreeDecomposition> {
    validate_dpd(g, d)?;
    let p = d.bags.len();
    if p == 0 {
        return DirectedTreeDecomposition::new(0, vec![None], vec![vec![]], vec![vec![]]);
    }
    let inter =
        |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect() };
    let parent = (0..p).map(|i| (i + 1 < p).then_some(i + 1)).collect();
    let mut bags = Vec::with_capacity(p);
    let mut guards = Vec::with_capacity(p);
    for i in 0..p {
        let fresh = match i {
            0 => d.bags[0].clone(),
            _ => d.bags[i].iter().copied().filter(|x| d.bags[i - 1].binary_search(x).is_err()).collect(),
        };
        bags.push(fresh);
        guards.push(if i + 1 < p { inter(&d.bags[i], &d.bags[i + 1]) } else { Vec::new() });
    }
    DirectedTreeDecomposition::new(d.n, parent, bags, guards)
}

/// Contract the vertices from left to right, ordered by their last bag.
pub fn contraction_from_dpd(t: &Tournament, d: &DirectedPathDecomposition) -> Result<ContractionSequence> {
    validate_dpd(t.digraph(), d)?;
    let span = d.spans();
    let mut vs: Vec<usize> = (0..t.n()).collect();
    vs.sort_by_key(|&v| (span[v].unwrap().1, v));
    let mut b = ContractionBuilder::new(t.n());
    for &v in vs.iter().skip(1) {
        b.merge_vertices(vs[0], v);
    }
    Ok(b.finish())
}

/// Children of `node` sorted so that edges between their subtrees, away from
/// `Γ(node)`, point from earlier to later children.
fn ordered_children(t: &Tournament, d: &DirectedTreeDecomposition, sub: &[VertexSet], node: usize) -> Vec<usize> {
    let gamma = VertexSet::from_slice(t.n(), &d.gamma(node));
    let x: Vec<usize> = sub[node].iter().filter(|&v| !gamma.contains(v)).collect();
    let comps = scc(t.induced(&x).digraph());
    let mut order: Vec<&Vec<usize>> = comps.parts().iter().collect();
    order.sort_by(|a, b| {
        if a[0] == b[0] {
            std::cmp::Ordering::Equal
        } else if t.has_edge(x[a[0]], x[b[0]]) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let mut rank = vec![usize::MAX; t.n()];
    for (i, c) in order.iter().enumerate() {
        for &v in c.iter() {
            rank[x[v]] = i;
        }
    }
    let mut kids = d.children(node).to_vec();
    kids.sort_by_key(|&c| (sub[c].iter().map(|v| rank[v]).min().unwrap_or(usize::MAX), c));
    kids
}

/// Contraction sequence built bottom-up along the tree: after the first `k`
/// children of a node are absorbed, vertices of their subtrees are merged
/// when no vertex outside tells them apart by in-edges.
pub fn contraction_from_dtd(t: &Tournament, d: &DirectedTreeDecomposition) -> Result<ContractionSequence> {
    validate_dtd(t.digraph(), d)?;
    let n = t.n();
    let sub = d.subtree_sets();
    let in_rows: Vec<VertexSet> = (0..n).map(|v| VertexSet::from_slice(n, t.digraph().in_neighbors(v))).collect();
    let mut b = ContractionBuilder::new(n);
    for node in d.post_order() {
        let mut z = VertexSet::new(n);
        for c in ordered_children(t, d, &sub, node) {
            for v in sub[c].iter() {
                z.insert(v);
            }
            let mut classes: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
            for v in z.iter() {
                let sig: Vec<u64> = in_rows[v].words().iter().zip(z.words()).map(|(r, m)| r & !m).collect();
                let first = *classes.entry(sig).or_insert(v);
                b.merge_vertices(first, v);
            }
        }
    }
    Ok(b.finish())
}

/// The incidence digraph of an undirected graph: vertices `0..n`, then one
/// vertex per edge pointing at both endpoints. The returned order puts the
/// original vertices first.
pub fn incidence_digraph(n: usize, edges: &[(usize, usize)]) -> Result<(Digraph, LinearOrder)> {
    let mut arcs = Vec::with_capacity(2 * edges.len());
    for (i, &(v, w)) in edges.iter().enumerate() {
        if v == w || v >= n || w >= n {
            return Err(Error::arg(format!("bad edge ({v},{w})")));
        }
        arcs.push((n + i, v));
        arcs.push((n + i, w));
    }
    let g = Digraph::from_edges(n + edges.len(), arcs)?;
    Ok((g, LinearOrder::identity(n + edges.len())))
}

impl fmt::Display for DirectedPathDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dpd {}", self.bags.len())?;
        for b in &self.bags {
            let s: Vec<String> = b.iter().map(usize::to_string).collect();
            writeln!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}
