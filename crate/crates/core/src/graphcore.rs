//! Digraphs, tournaments, arc colorings, partitions and binary relational
//! structures with a red relation.
//!
//! Vertices are dense ids `0..n`. Adjacency is kept both as a bit matrix and
//! as sorted neighbor lists.

use std::fmt;

use crate::error::{Error, Result};

/// Square bit matrix, row-major with 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, val: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if val {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(i))
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.row_ones(i).map(move |j| (i, j)))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pairs()).finish()
    }
}

/// Iterate set bits of a word slice.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

/// Vertex subset as a bit mask over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { words: vec![0; n.div_ceil(64).max(1)] }
    }

    pub fn from_slice(n: usize, vs: &[usize]) -> Self {
        let mut s = Self::new(n);
        for &v in vs {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    /// Size of the intersection with a row of a bit matrix.
    #[inline]
    pub fn count_in(&self, row: &[u64]) -> usize {
        self.words.iter().zip(row).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    adj: BitMatrix,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph { adj: BitMatrix::new(n), out: vec![Vec::new(); n], inn: vec![Vec::new(); n] }
    }

    /// Build from an edge list; rejects loops, duplicates and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = BitMatrix::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::arg(format!("self-loop at {u}")));
            }
            if adj.get(u, v) {
                return Err(Error::arg(format!("duplicate edge ({u},{v})")));
            }
            adj.set(u, v, true);
        }
        Ok(Self::from_matrix(adj))
    }

    /// Build from a matrix with an empty diagonal.
    pub fn from_matrix(adj: BitMatrix) -> Self {
        let n = adj.n();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in adj.pairs() {
            debug_assert!(u != v);
            out[u].push(v);
            inn[v].push(u);
        }
        Digraph { adj, out, inn }
    }

    pub fn n(&self) -> usize {
        self.adj.n()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Induced subgraph; vertex `i` of the result is `vs[i]`.
    pub fn induced(&self, vs: &[usize]) -> Digraph {
        let mut adj = BitMatrix::new(vs.len());
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate() {
                if self.has_edge(a, b) {
                    adj.set(i, j, true);
                }
            }
        }
        Self::from_matrix(adj)
    }

    /// Image under a vertex bijection: edge (u,v) becomes (p[u], p[v]).
    pub fn relabel(&self, p: &[usize]) -> Digraph {
        let mut adj = BitMatrix::new(self.n());
        for (u, v) in self.edges() {
            adj.set(p[u], p[v], true);
        }
        Self::from_matrix(adj)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, {:?})", self.n(), self.adj)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tournament(Digraph);

impl Tournament {
    pub fn from_digraph(g: Digraph) -> Result<Self> {
        let n = g.n();
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) == g.has_edge(v, u) {
                    return Err(Error::arg(format!(
                        "pair {{{u},{v}}} has {} directions",
                        if g.has_edge(u, v) { 2 } else { 0 }
                    )));
                }
            }
        }
        Ok(Tournament(g))
    }

    /// `beats(u, v)` decides the direction of each pair `u < v`.
    pub fn from_fn(n: usize, mut beats: impl FnMut(usize, usize) -> bool) -> Self {
        let mut adj = BitMatrix::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if beats(u, v) {
                    adj.set(u, v, true);
                } else {
                    adj.set(v, u, true);
                }
            }
        }
        Tournament(Digraph::from_matrix(adj))
    }

    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    /// Circular tournament on `2m+1` vertices: `i -> i+j` for `j = 1..=m`.
    pub fn circular(m: usize) -> Self {
        let n = 2 * m + 1;
        Self::from_fn(n, |u, v| v - u <= m)
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_fn(n, |_, _| rng.gen_bool(0.5))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.has_edge(u, v)
    }

    pub fn digraph(&self) -> &Digraph {
        &self.0
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.0.out_neighbors(v).len()
    }

    pub fn induced(&self, vs: &[usize]) -> Tournament {
        Tournament(self.0.induced(vs))
    }

    pub fn relabel(&self, p: &[usize]) -> Tournament {
        Tournament(self.0.relabel(p))
    }

    /// Rank among all labelled tournaments of this size (upper triangle bits).
    pub fn code(&self) -> u64 {
        let n = self.n();
        assert!(n * n.saturating_sub(1) / 2 <= 64);
        let mut c = 0u64;
        let mut b = 0;
        for u in 0..n {
            for v in u + 1..n {
                if self.has_edge(u, v) {
                    c |= 1 << b;
                }
                b += 1;
            }
        }
        c
    }

    pub fn from_code(n: usize, code: u64) -> Self {
        let mut b = 0;
        Self::from_fn(n, |_, _| {
            let r = code >> b & 1 == 1;
            b += 1;
            r
        })
    }
}

/// Sentinel for ordered pairs that carry no arc.
pub const NO_ARC: u32 = u32::MAX;

/// Digraph with colors on arcs and loops, stored as a full color matrix.
/// Entry `(u,v)` is `NO_ARC` when `u != v` and there is no arc.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ArcColoredDigraph {
    n: usize,
    colors: Vec<u32>,
}

impl ArcColoredDigraph {
    pub fn from_matrix(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::arg("color matrix has wrong size"));
        }
        if (0..n).any(|v| colors[v * n + v] == NO_ARC) {
            return Err(Error::arg("loops must be colored"));
        }
        Ok(ArcColoredDigraph { n, colors })
    }

    /// Arcs colored 0, loops colored by `vertex_color`.
    pub fn from_digraph(g: &Digraph, vertex_color: impl Fn(usize) -> u32) -> Self {
        let n = g.n();
        let mut colors = vec![NO_ARC; n * n];
        for (u, v) in g.edges() {
            colors[u * n + v] = 0;
        }
        for v in 0..n {
            colors[v * n + v] = vertex_color(v);
        }
        ArcColoredDigraph { n, colors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.colors[u * self.n + v]
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u != v && self.color(u, v) != NO_ARC
    }

    pub fn set_loop(&mut self, v: usize, c: u32) {
        self.colors[v * self.n + v] = c;
    }

    pub fn matrix(&self) -> &[u32] {
        &self.colors
    }

    pub fn induced(&self, vs: &[usize]) -> ArcColoredDigraph {
        let m = vs.len();
        let mut colors = Vec::with_capacity(m * m);
        for &a in vs {
            for &b in vs {
                colors.push(self.color(a, b));
            }
        }
        ArcColoredDigraph { n: m, colors }
    }

    /// Pull back along `p`: result has color `self.color(p[u], p[v])` at `(u,v)`.
    pub fn pullback(&self, p: &[usize]) -> ArcColoredDigraph {
        let n = self.n;
        let mut colors = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                colors.push(self.color(p[u], p[v]));
            }
        }
        ArcColoredDigraph { n, colors }
    }

    /// True iff `p` maps self onto `other` preserving all colors.
    pub fn is_isomorphism(&self, other: &ArcColoredDigraph, p: &[usize]) -> bool {
        self.n == other.n
            && p.len() == self.n
            && (0..self.n).all(|u| (0..self.n).all(|v| self.color(u, v) == other.color(p[u], p[v])))
    }

    pub fn underlying(&self) -> Digraph {
        let mut adj = BitMatrix::new(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if self.has_arc(u, v) {
                    adj.set(u, v, true);
                }
            }
        }
        Digraph::from_matrix(adj)
    }
}

impl From<&Tournament> for ArcColoredDigraph {
    fn from(t: &Tournament) -> Self {
        ArcColoredDigraph::from_digraph(t.digraph(), |_| 0)
    }
}

impl From<&Digraph> for ArcColoredDigraph {
    fn from(g: &Digraph) -> Self {
        ArcColoredDigraph::from_digraph(g, |_| 0)
    }
}

/// Tournament with a total coloring of its arcs and loops.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArcColoredTournament {
    tournament: Tournament,
    colored: ArcColoredDigraph,
}

impl ArcColoredTournament {
    /// `lambda(u, v)` is queried for every arc and every loop.
    pub fn new(tournament: Tournament, lambda: impl Fn(usize, usize) -> u32) -> Result<Self> {
        let n = tournament.n();
        let mut colors = vec![NO_ARC; n * n];
        for u in 0..n {
            for v in 0..n {
                if u == v || tournament.has_edge(u, v) {
                    let c = lambda(u, v);
                    if c == NO_ARC {
                        return Err(Error::arg(format!("pair ({u},{v}) uses the reserved color")));
                    }
                    colors[u * n + v] = c;
                }
            }
        }
        Ok(ArcColoredTournament { tournament, colored: ArcColoredDigraph { n, colors } })
    }

    pub fn from_colored(colored: ArcColoredDigraph) -> Result<Self> {
        let tournament = Tournament::from_digraph(colored.underlying())?;
        Ok(ArcColoredTournament { tournament, colored })
    }

    pub fn n(&self) -> usize {
        self.tournament.n()
    }

    pub fn tournament(&self) -> &Tournament {
        &self.tournament
    }

    pub fn colored(&self) -> &ArcColoredDigraph {
        &self.colored
    }

    #[inline]
    pub fn lambda(&self, u: usize, v: usize) -> u32 {
        self.colored.color(u, v)
    }

    pub fn induced(&self, vs: &[usize]) -> ArcColoredTournament {
        ArcColoredTournament { tournament: self.tournament.induced(vs), colored: self.colored.induced(vs) }
    }
}

/// Partition of `0..n` into nonempty parts. Parts are sorted internally and
/// ordered by their least element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
    part_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut parts = parts;
        for p in &mut parts {
            if p.is_empty() {
                return Err(Error::arg("empty part"));
            }
            p.sort_unstable();
            for &v in p.iter() {
                if v >= n {
                    return Err(Error::arg(format!("vertex {v} out of range")));
                }
                if seen[v] {
                    return Err(Error::arg(format!("vertex {v} in two parts")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::arg(format!("vertex {v} not covered")));
        }
        parts.sort_unstable_by_key(|p| p[0]);
        let mut part_of = vec![0; n];
        for (i, p) in parts.iter().enumerate() {
            for &v in p {
                part_of[v] = i;
            }
        }
        Ok(Partition { parts, part_of })
    }

    /// Parts are the classes of equal labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let i = *map.entry(l).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[i].push(v);
        }
        Self::new(labels.len(), parts).expect("labels define a partition")
    }

    pub fn discrete(n: usize) -> Self {
        Partition { parts: (0..n).map(|v| vec![v]).collect(), part_of: (0..n).collect() }
    }

    pub fn trivial(n: usize) -> Self {
        if n == 0 {
            return Partition { parts: vec![], part_of: vec![] };
        }
        Partition { parts: vec![(0..n).collect()], part_of: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.parts.len() == self.n()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() <= 1
    }

    /// Every part of `self` lies inside a part of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.n() == other.n() && self.parts.iter().all(|p| p.iter().all(|&v| other.part_of(v) == other.part_of(p[0])))
    }
}

/// Binary relational structure with named relations and a symmetric red
/// relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelStructure {
    n: usize,
    relations: Vec<(String, BitMatrix)>,
    red: BitMatrix,
}

impl RelStructure {
    pub fn new(n: usize) -> Self {
        RelStructure { n, relations: Vec::new(), red: BitMatrix::new(n) }
    }

    /// One relation `E` holding the edges of `g`.
    pub fn from_digraph(g: &Digraph) -> Self {
        let mut a = Self::new(g.n());
        a.relations.push(("E".into(), g.matrix().clone()));
        a
    }

    pub fn from_tournament(t: &Tournament) -> Self {
        Self::from_digraph(t.digraph())
    }

    pub fn add_relation(&mut self, name: impl Into<String>, rel: BitMatrix) -> Result<()> {
        if rel.n() != self.n {
            return Err(Error::arg("relation size mismatch"));
        }
        self.relations.push((name.into(), rel));
        Ok(())
    }

    pub fn add_red(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::arg(format!("red edge ({u},{v}) out of range")));
        }
        if u == v {
            return Err(Error::arg(format!("red loop at {u}")));
        }
        self.red.set(u, v, true);
        self.red.set(v, u, true);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[(String, BitMatrix)] {
        &self.relations
    }

    pub fn red(&self) -> &BitMatrix {
        &self.red
    }

    /// Unordered red edges `(u, v)` with `u < v`.
    pub fn red_edges(&self) -> Vec<(usize, usize)> {
        self.red.pairs().filter(|&(u, v)| u < v).collect()
    }

    /// Vertex `v` becomes `p[v]`.
    pub fn relabel(&self, p: &[usize]) -> RelStructure {
        let map = |b: &BitMatrix| {
            let mut m = BitMatrix::new(self.n);
            for (u, v) in b.pairs() {
                m.set(p[u], p[v], true);
            }
            m
        };
        RelStructure {
            n: self.n,
            relations: self.relations.iter().map(|(name, b)| (name.clone(), map(b))).collect(),
            red: map(&self.red),
        }
    }

    /// Adds `<` of the given positions as an extra relation.
    pub fn with_order(&self, pos: &[usize]) -> RelStructure {
        let mut m = BitMatrix::new(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if pos[u] < pos[v] {
                    m.set(u, v, true);
                }
            }
        }
        let mut a = self.clone();
        a.relations.push(("<".into(), m));
        a
    }

    pub fn induced(&self, vs: &[usize]) -> RelStructure {
        let sub = |m: &BitMatrix| {
            let mut r = BitMatrix::new(vs.len());
            for (i, &a) in vs.iter().enumerate() {
                for (j, &b) in vs.iter().enumerate() {
                    if m.get(a, b) {
                        r.set(i, j, true);
                    }
                }
            }
            r
        };
        RelStructure {
            n: vs.len(),
            relations: self.relations.iter().map(|(s, m)| (s.clone(), sub(m))).collect(),
            red: sub(&self.red),
        }
    }

    /// Homogeneity of a pair of disjoint vertex sets: every relation holds on
    /// all or none of `X x Y` and of `Y x X`, and no red edge joins them.
    pub fn homogeneous(&self, x: &[usize], y: &[usize]) -> bool {
        let ym = VertexSet::from_slice(self.n, y);
        let xm = VertexSet::from_slice(self.n, x);
        self.homogeneous_masked(x, &xm, y, &ym)
    }

    pub(crate) fn homogeneous_masked(&self, x: &[usize], xm: &VertexSet, y: &[usize], ym: &VertexSet) -> bool {
        if x.iter().any(|&v| ym.count_in(self.red.row(v)) > 0) {
            return false;
        }
        self.relations.iter().all(|(_, r)| uniform(r, x, ym, y.len()) && uniform(r, y, xm, x.len()))
    }

    /// Red degree: maximum degree of the red graph.
    pub fn red_degree(&self) -> usize {
        (0..self.n).map(|v| self.red.row(v).iter().map(|w| w.count_ones() as usize).sum()).max().unwrap_or(0)
    }

    /// The quotient `A/P`; vertex `i` of the result is part `i` of `P`.
    pub fn quotient(&self, p: &Partition) -> Result<RelStructure> {
        if p.n() != self.n {
            return Err(Error::arg("partition domain differs from structure"));
        }
        let k = p.len();
        let masks: Vec<VertexSet> = p.parts().iter().map(|q| VertexSet::from_slice(self.n, q)).collect();
        let mut q = RelStructure::new(k);
        let mut hom = vec![vec![true; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let h = self.homogeneous_masked(p.part(i), &masks[i], p.part(j), &masks[j]);
                hom[i][j] = h;
                hom[j][i] = h;
                if !h {
                    q.add_red(i, j)?;
                }
            }
        }
        for (name, r) in &self.relations {
            let mut m = BitMatrix::new(k);
            for i in 0..k {
                for j in 0..k {
                    if !hom[i][j] {
                        continue;
                    }
                    let (x, y) = (p.part(i), &masks[j]);
                    if x.iter().all(|&v| y.count_in(r.row(v)) == p.part(j).len()) {
                        m.set(i, j, true);
                    }
                }
            }
            q.relations.push((name.clone(), m));
        }
        Ok(q)
    }
}

/// Every row of `a` meets `b` in nothing or in everything, the same way.
fn uniform(r: &BitMatrix, a: &[usize], b: &VertexSet, blen: usize) -> bool {
    let first = b.count_in(r.row(a[0]));
    (first == 0 || first == blen) && a[1..].iter().all(|&v| b.count_in(r.row(v)) == first)
}

/// Mixed neighbors of `(v, w)`: `(N-(v) ∩ N+(w)) ∪ (N+(v) ∩ N-(w))`.
pub fn mixed_neighbors(t: &Tournament, v: usize, w: usize) -> Result<Vec<usize>> {
    check_pair(t.n(), v, w)?;
    Ok(mixed_unchecked(t, v, w).collect())
}

fn mixed_unchecked(t: &Tournament, v: usize, w: usize) -> impl Iterator<Item = usize> + '_ {
    (0..t.n()).filter(move |&u| u != v && u != w && t.has_edge(u, v) != t.has_edge(u, w))
}

fn check_pair(n: usize, v: usize, w: usize) -> Result<()> {
    if v >= n || w >= n {
        return Err(Error::arg(format!("vertex out of range: ({v},{w}) with n={n}")));
    }
    if v == w {
        return Err(Error::arg("mixed neighbors need two distinct vertices"));
    }
    Ok(())
}

/// Number of parts other than those of `v` and `w` meeting `M(v, w)`.
/// Requires `(v,w)` to be an edge between distinct parts.
pub fn mixed_degree_partition(t: &Tournament, q: &Partition, v: usize, w: usize) -> Result<usize> {
    check_pair(t.n(), v, w)?;
    if !t.has_edge(v, w) {
        return Err(Error::arg(format!("({v},{w}) is not an edge")));
    }
    if q.part_of(v) == q.part_of(w) {
        return Err(Error::arg(format!("({v},{w}) is not cross-cluster")));
    }
    Ok(md_unchecked(t, q, v, w, &mut vec![false; q.len()]))
}

pub(crate) fn md_unchecked(t: &Tournament, q: &Partition, v: usize, w: usize, hit: &mut [bool]) -> usize {
    let (qv, qw) = (q.part_of(v), q.part_of(w));
    let mut count = 0;
    for u in mixed_unchecked(t, v, w) {
        let p = q.part_of(u);
        if p != qv && p != qw && !hit[p] {
            hit[p] = true;
            count += 1;
        }
    }
    for u in mixed_unchecked(t, v, w) {
        hit[q.part_of(u)] = false;
    }
    count
}

/// Strongly connected components (iterative Tarjan).
pub fn scc(g: &Digraph) -> Partition {
    let n = g.n();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut labels = vec![0; n];
    let mut next = 0;
    let mut comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        if index[s] != usize::MAX {
            continue;
        }
        call.push((s, 0));
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i == 0 {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let nb = g.out_neighbors(v);
            if *i < nb.len() {
                let w = nb[*i];
                *i += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let x = stack.pop().unwrap();
                    on_stack[x] = false;
                    labels[x] = comp;
                    if x == v {
                        break;
                    }
                }
                comp += 1;
            }
        }
    }
    Partition::from_labels(&labels)
}

/// Weakly connected components.
pub fn wcc(g: &Digraph) -> Partition {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let labels: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    Partition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Tournament {
        Tournament::circular(1)
    }

    #[test]
    fn circular_is_regular() {
        let t = Tournament::circular(3);
        assert_eq!(t.n(), 7);
        assert!((0..7).all(|v| t.out_degree(v) == 3));
        assert!(t.has_edge(0, 1) && t.has_edge(0, 3) && t.has_edge(4, 0));
    }

    #[test]
    fn mixed_neighbor_examples() {
        assert_eq!(mixed_neighbors(&three_cycle(), 0, 1).unwrap(), vec![2]);
        assert!(mixed_neighbors(&Tournament::transitive(3), 0, 1).unwrap().is_empty());
        assert!(mixed_neighbors(&three_cycle(), 1, 1).is_err());
    }

    #[test]
    fn md_examples() {
        let t = three_cycle();
        assert_eq!(mixed_degree_partition(&t, &Partition::discrete(3), 0, 1).unwrap(), 1);
        let q = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert!(mixed_degree_partition(&t, &q, 0, 1).is_err());
        assert_eq!(mixed_degree_partition(&t, &q, 1, 2).unwrap(), 0);
    }

    #[test]
    fn components() {
        let c = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(scc(&c).len(), 1);
        let e = Digraph::empty(4);
        assert_eq!(scc(&e).len(), 4);
        assert_eq!(wcc(&e).len(), 4);
        let p = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(scc(&p).is_discrete());
        assert!(wcc(&p).is_trivial());
    }

    #[test]
    fn quotient_examples() {
        let a = RelStructure::from_tournament(&Tournament::transitive(3));
        let p = Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        let q = a.quotient(&p).unwrap();
        assert_eq!(q.red_degree(), 0);
        assert!(q.relations()[0].1.get(0, 1));

        let c = RelStructure::from_tournament(&three_cycle());
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let q = c.quotient(&p).unwrap();
        assert!(q.red().get(0, 1));
        assert_eq!(q.red_degree(), 1);

        let d = c.quotient(&Partition::discrete(3)).unwrap();
        assert_eq!(d, c);
        assert_eq!(c.quotient(&Partition::trivial(3)).unwrap().red_degree(), 0);
    }

    #[test]
    fn red_degree_examples() {
        let mut a = RelStructure::new(6);
        assert_eq!(a.red_degree(), 0);
        a.add_red(0, 1).unwrap();
        assert_eq!(a.red_degree(), 1);
        for v in 2..6 {
            a.add_red(0, v).unwrap();
        }
        assert_eq!(a.red_degree(), 5);
        assert!(a.add_red(2, 2).is_err());
    }

    #[test]
    fn existing_red_breaks_homogeneity() {
        let mut a = RelStructure::from_tournament(&Tournament::transitive(3));
        a.add_red(0, 2).unwrap();
        assert!(!a.homogeneous(&[0], &[1, 2]));
        assert!(a.homogeneous(&[0], &[1]));
    }

    #[test]
    fn tournament_validation() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(Tournament::from_digraph(g).is_err());
        assert!(Digraph::from_edges(2, [(0, 1), (0, 1)]).is_err());
        assert!(Digraph::from_edges(2, [(1, 1)]).is_err());
    }

    #[test]
    fn code_roundtrip() {
        for c in 0..64 {
            assert_eq!(Tournament::from_code(4, c).code(), c);
        }
    }
}
