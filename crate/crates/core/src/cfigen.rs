//! CFI tournaments over 3-regular bases, toroidal grids, walls and explicit
//! contraction sequences for them.
//!
//! Gadget vertex `(v, f)` has id `9v + i`, where `i` indexes the functions of
//! `M_{α(v)}(v)` in lexicographic order of their values on the neighbours of
//! `v` sorted by the base order. Base edges are oriented from the smaller to
//! the larger id.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graphcore::{RelStructure, Tournament};
use crate::permgroup::Permutation;
use crate::widths::{order_for_tww, ContractionBuilder, ContractionSequence, LinearOrder};

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl BaseGraph {
    /// Edges are normalised to `(min, max)` and deduplicated.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut es = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::arg(format!("loop at {u}")));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        es.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &es {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(BaseGraph { n, edges: es, adj })
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// `G_{n,m}` on `Z_n × Z_m`, vertex `(i, j)` has id `i·m + j`. Loops and
    /// parallel edges of the degenerate sizes are dropped.
    pub fn toroidal_grid(n: usize, m: usize) -> Self {
        let id = |i: usize, j: usize| i * m + j;
        let mut es = Vec::new();
        for i in 0..n {
            for j in 0..m {
                es.push((id(i, j), id(i, (j + 1) % m)));
                es.push((id(i, j), id((i + 1) % n, j)));
            }
        }
        Self::new(n * m, es.into_iter().filter(|(a, b)| a != b)).unwrap()
    }

    /// `W_{2k+2}`: the `(2k+2)²` torus without the vertical edges
    /// `(i,c)(i+1,c)` where `i` and `c` have the same parity.
    pub fn wall(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::arg("wall needs k >= 1"));
        }
        let s = 2 * k + 2;
        let id = |i: usize, j: usize| i * s + j;
        let mut es = Vec::new();
        for i in 0..s {
            for j in 0..s {
                es.push((id(i, j), id(i, (j + 1) % s)));
                if i % 2 != j % 2 {
                    es.push((id(i, j), id((i + 1) % s, j)));
                }
            }
        }
        Self::new(s * s, es)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_3_regular(&self) -> bool {
        self.adj.iter().all(|a| a.len() == 3)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_parents(0).iter().all(Option::is_some)
    }

    /// BFS tree from `root`; the root is its own parent.
    fn bfs_parents(&self, root: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        parent[root] = Some(root);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Every edge as a red edge, no other relations.
    pub fn red_structure(&self) -> RelStructure {
        let mut a = RelStructure::new(self.n);
        for &(u, v) in &self.edges {
            a.add_red(u, v).expect("edges are valid");
        }
        a
    }
}

/// The red toroidal grid `G_{n,m}^red`.
pub fn toroidal_grid(n: usize, m: usize) -> RelStructure {
    BaseGraph::toroidal_grid(n, m).red_structure()
}

/// Row by row, merge row `r` into row 0 column by column; the remaining red
/// cycle is merged left to right.
pub fn grid_red_contraction(n: usize, m: usize) -> ContractionSequence {
    let mut b = ContractionBuilder::new(n * m);
    for r in 1..n {
        for j in 0..m {
            b.merge_vertices(j, r * m + j);
        }
    }
    for j in 1..m {
        b.merge_vertices(0, j);
    }
    b.finish()
}

/// Width-1 sequence for the circular tournament on `2m+1` vertices: grow
/// `{0,1}` through `2m, 2m-1, …` and `{m, m+1}` through `m-1, m-2, …`
/// alternately, then join them.
pub fn circular_contraction(m: usize) -> ContractionSequence {
    let n = 2 * m + 1;
    let mut b = ContractionBuilder::new(n);
    if m >= 1 {
        b.merge_vertices(0, 1);
        b.merge_vertices(m, m + 1);
        for k in 0..m.saturating_sub(2) {
            b.merge_vertices(0, 2 * m - k);
            b.merge_vertices(m, m - 1 - k);
        }
        b.merge_vertices(0, m);
    }
    b.finish()
}

/// Values of a gadget function on the three neighbours, in base order.
pub type GadgetFn = [u8; 3];

/// `M_a(v)` in lexicographic order together with its orientation `F_a(v)`.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub functions: Vec<GadgetFn>,
    pub tournament: Tournament,
}

/// `(f, g) ∈ F`: at the first neighbour where they differ, `g = f + 1`.
fn f_arc(f: &GadgetFn, g: &GadgetFn) -> bool {
    match (0..3).find(|&i| f[i] != g[i]) {
        Some(i) => (f[i] + 1) % 3 == g[i],
        None => false,
    }
}

/// Neighbours of `v` sorted by the base order.
fn ordered_neighbors(base: &BaseGraph, order: &LinearOrder, v: usize) -> [usize; 3] {
    let mut nb = [base.adj[v][0], base.adj[v][1], base.adj[v][2]];
    nb.sort_by_key(|&w| order.position(w));
    nb
}

pub fn gadget(base: &BaseGraph, order: &LinearOrder, v: usize, a: u8) -> Result<Gadget> {
    if v >= base.n() || base.neighbors(v).len() != 3 {
        return Err(Error::arg(format!("base vertex {v} does not have degree 3")));
    }
    let nb = ordered_neighbors(base, order, v);
    let mut functions = Vec::with_capacity(9);
    for code in 0..27u8 {
        let f = [code / 9, code / 3 % 3, code % 3];
        let balance: i32 = (0..3).map(|i| if v < nb[i] { f[i] as i32 } else { -(f[i] as i32) }).sum();
        if balance.rem_euclid(3) == (a % 3) as i32 {
            functions.push(f);
        }
    }
    let tournament = Tournament::from_fn(functions.len(), |x, y| f_arc(&functions[x], &functions[y]));
    Ok(Gadget { functions, tournament })
}

/// `CFI₃(Ĝ, <, α)` with its tournament encoding.
#[derive(Clone, Debug)]
pub struct CfiGraph {
    base: BaseGraph,
    order: LinearOrder,
    alpha: Vec<u8>,
    nbrs: Vec<[usize; 3]>,
    funcs: Vec<Vec<GadgetFn>>,
}

impl CfiGraph {
    pub fn new(base: BaseGraph, order: LinearOrder, alpha: Vec<u8>) -> Result<Self> {
        let n = base.n();
        if !base.is_3_regular() {
            return Err(Error::arg("base graph is not 3-regular"));
        }
        if !base.is_connected() {
            return Err(Error::arg("base graph is not connected"));
        }
        if order.n() != n || alpha.len() != n {
            return Err(Error::arg("order and twist must cover every base vertex"));
        }
        let alpha: Vec<u8> = alpha.into_iter().map(|a| a % 3).collect();
        let mut nbrs = Vec::with_capacity(n);
        let mut funcs = Vec::with_capacity(n);
        for v in 0..n {
            nbrs.push(ordered_neighbors(&base, &order, v));
            funcs.push(gadget(&base, &order, v, alpha[v])?.functions);
        }
        Ok(CfiGraph { base, order, alpha, nbrs, funcs })
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn order(&self) -> &LinearOrder {
        &self.order
    }

    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn n(&self) -> usize {
        9 * self.base.n()
    }

    pub fn fiber(&self, x: usize) -> usize {
        x / 9
    }

    pub fn function(&self, x: usize) -> GadgetFn {
        self.funcs[x / 9][x % 9]
    }

    fn slot(&self, v: usize, w: usize) -> usize {
        self.nbrs[v].iter().position(|&u| u == w).expect("w is a neighbour of v")
    }

    /// Undirected CFI edge between different gadgets.
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        let (v, w) = (x / 9, y / 9);
        v != w && self.base.has_edge(v, w) && self.function(x)[self.slot(v, w)] == self.function(y)[self.slot(w, v)]
    }

    /// Directed edge inside a gadget.
    pub fn intra_arc(&self, x: usize, y: usize) -> bool {
        x / 9 == y / 9 && f_arc(&self.function(x), &self.function(y))
    }

    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &(v, w) in self.base.edges() {
            for i in 0..9 {
                for j in 0..9 {
                    if self.adjacent(9 * v + i, 9 * w + j) {
                        out.push((9 * v + i, 9 * w + j));
                    }
                }
            }
        }
        out
    }

    /// `T(Ĝ, <, α)`: gadget arcs as in `F`; between gadgets `v < w` the
    /// non-adjacent pairs point up the order and the adjacent ones down.
    pub fn tournament(&self) -> Tournament {
        Tournament::from_fn(self.n(), |x, y| {
            let (v, w) = (x / 9, y / 9);
            if v == w {
                self.intra_arc(x, y)
            } else {
                (self.order.position(v) < self.order.position(w)) != self.adjacent(x, y)
            }
        })
    }

    fn id_of(&self, v: usize, f: &GadgetFn) -> usize {
        9 * v + self.funcs[v].iter().position(|g| g == f).expect("function lies in the gadget")
    }

    /// Same base, order and orientation with another twist.
    pub fn with_alpha(&self, alpha: Vec<u8>) -> Result<CfiGraph> {
        CfiGraph::new(self.base.clone(), self.order.clone(), alpha)
    }
}

/// Shift along a path from `path[0]` to its last vertex. Returns the new
/// twist (first vertex +1, last −1) and the isomorphism
/// `(u, f) ↦ (u, f + h_u)` between the two CFI graphs.
pub fn twist_iso(cfi: &CfiGraph, path: &[usize]) -> Result<(Vec<u8>, Permutation)> {
    let n = cfi.base.n();
    if path.len() < 2 || path[0] == *path.last().unwrap() {
        return Err(Error::arg("twist path needs two distinct end points"));
    }
    if let Some(&x) = path.iter().find(|&&x| x >= n) {
        return Err(Error::arg(format!("path vertex {x} out of range")));
    }
    let mut h = vec![[0u8; 3]; n];
    for e in path.windows(2) {
        let (a, b) = (e[0], e[1]);
        if !cfi.base.has_edge(a, b) {
            return Err(Error::arg(format!("({a},{b}) is not a base edge")));
        }
        // Traversal a -> b. With orientation a -> b both ends shift by 1,
        // against it both shift by 2.
        let s = if a < b { 1 } else { 2 };
        let (ia, ib) = (cfi.slot(a, b), cfi.slot(b, a));
        h[a][ia] = (h[a][ia] + s) % 3;
        h[b][ib] = (h[b][ib] + s) % 3;
    }
    let mut beta = cfi.alpha.clone();
    beta[path[0]] = (beta[path[0]] + 1) % 3;
    let last = *path.last().unwrap();
    beta[last] = (beta[last] + 2) % 3;
    let target = cfi.with_alpha(beta.clone())?;
    let images = (0..cfi.n())
        .map(|x| {
            let u = x / 9;
            let f = cfi.function(x);
            target.id_of(u, &[(f[0] + h[u][0]) % 3, (f[1] + h[u][1]) % 3, (f[2] + h[u][2]) % 3])
        })
        .collect();
    Ok((beta, Permutation::from_images(images)?))
}

/// An isomorphism `CFI(α) → CFI(β)` built from twists along BFS paths, or
/// `None` when the total twists differ.
pub fn cfi_isomorphism(cfi: &CfiGraph, beta: &[u8]) -> Result<Option<Permutation>> {
    let n = cfi.base.n();
    if beta.len() != n {
        return Err(Error::arg("twist must cover every base vertex"));
    }
    let total = |a: &[u8]| a.iter().map(|&x| x as usize).sum::<usize>() % 3;
    if total(cfi.alpha()) != total(beta) {
        return Ok(None);
    }
    let parents = cfi.base.bfs_parents(0);
    let mut cur = cfi.clone();
    let mut phi = Permutation::identity(cfi.n());
    for u in 1..n {
        let mut path = vec![u];
        while *path.last().unwrap() != 0 {
            path.push(parents[*path.last().unwrap()].unwrap());
        }
        while cur.alpha[u] != beta[u] % 3 {
            let (next, step) = twist_iso(&cur, &path)?;
            phi = phi.then(&step);
            cur = cur.with_alpha(next)?;
        }
    }
    Ok(Some(phi))
}

/// Whether one vertex per gadget can be picked with all picks pairwise
/// CFI-adjacent along base edges.
pub fn has_consistent_transversal(cfi: &CfiGraph) -> bool {
    fn go(cfi: &CfiGraph, v: usize, pick: &mut Vec<usize>) -> bool {
        if v == cfi.base.n() {
            return true;
        }
        for i in 0..9 {
            let x = 9 * v + i;
            if cfi.base.neighbors(v).iter().filter(|&&w| w < v).all(|&w| cfi.adjacent(x, pick[w])) {
                pick.push(x);
                if go(cfi, v + 1, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
    go(cfi, 0, &mut Vec::new())
}

/// Collapse every gadget, then follow `base_seq` on the gadget parts.
pub fn cfi_contraction(cfi: &CfiGraph, base_seq: &ContractionSequence) -> Result<ContractionSequence> {
    let n = cfi.base.n();
    if base_seq.n() != n {
        return Err(Error::arg(format!("base sequence is for {} vertices, base has {n}", base_seq.n())));
    }
    let mut b = ContractionBuilder::new(9 * n);
    for v in 0..n {
        for i in 1..9 {
            b.merge_vertices(9 * v, 9 * v + i);
        }
    }
    for &(x, y) in base_seq.merges() {
        b.merge_vertices(9 * x, 9 * y);
    }
    Ok(b.finish())
}

/// `α_0` and `α_1` over `base`, twisted at vertex 0.
pub fn cfi_pair(base: &BaseGraph, order: &LinearOrder) -> Result<(CfiGraph, CfiGraph)> {
    let zero = vec![0u8; base.n()];
    let mut one = zero.clone();
    one[0] = 1;
    Ok((CfiGraph::new(base.clone(), order.clone(), zero)?, CfiGraph::new(base.clone(), order.clone(), one)?))
}

/// The pair over `W_{2k+2}`, ordered by the red grid sequence, with that
/// sequence as the base certificate.
pub fn hard_pair(k: usize) -> Result<(CfiGraph, CfiGraph, ContractionSequence)> {
    let base = BaseGraph::wall(k)?;
    let s = 2 * k + 2;
    let seq = grid_red_contraction(s, s);
    let order = order_for_tww(&seq);
    let (a, b) = cfi_pair(&base, &order)?;
    Ok((a, b, seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::widths::verify_contraction;

    fn k4() -> (BaseGraph, LinearOrder) {
        (BaseGraph::complete(4), LinearOrder::identity(4))
    }

    #[test]
    fn gadgets() {
        let (g, o) = k4();
        for a in 0..3 {
            let gd = gadget(&g, &o, 1, a).unwrap();
            assert_eq!(gd.functions.len(), 9);
            assert_eq!(gd.tournament.digraph().edge_count(), 36);
        }
        assert!(gadget(&g, &o, 0, 0).unwrap().functions.contains(&[0, 0, 0]));
        let path = BaseGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(gadget(&path, &LinearOrder::identity(3), 1, 0).is_err());
    }

    #[test]
    fn grids_and_walls() {
        assert_eq!(BaseGraph::toroidal_grid(4, 5).n(), 20);
        assert_eq!(BaseGraph::toroidal_grid(4, 5).edges().len(), 40);
        let w = BaseGraph::wall(2).unwrap();
        assert_eq!(w.n(), 36);
        assert_eq!(w.edges().len(), 54);
        assert!(w.is_3_regular() && w.is_connected());
        assert!(BaseGraph::wall(3).unwrap().is_3_regular());
    }

    #[test]
    fn grid_sequences() {
        assert!(verify_contraction(&toroidal_grid(1, 7), &grid_red_contraction(1, 7)).unwrap() <= 2);
        assert!(verify_contraction(&toroidal_grid(4, 4), &grid_red_contraction(4, 4)).unwrap() <= 6);
        assert!(verify_contraction(&toroidal_grid(8, 5), &grid_red_contraction(8, 5)).unwrap() <= 6);
    }

    #[test]
    fn circular_sequences() {
        for m in 0..12 {
            let t = Tournament::circular(m);
            let w = verify_contraction(&RelStructure::from_tournament(&t), &circular_contraction(m)).unwrap();
            assert!(w <= 1, "m = {m}");
        }
    }

    #[test]
    fn tournament_encoding() {
        let (g, o) = k4();
        let c = CfiGraph::new(g, o, vec![1, 0, 0, 0]).unwrap();
        let t = c.tournament();
        assert_eq!(t.n(), 36);
        assert_eq!(c.undirected_edges().len(), 6 * 27);
        assert!((0..36).all(|x| c.function(x).len() == 3));
    }

    #[test]
    fn twists() {
        let (g, o) = k4();
        let c = CfiGraph::new(g, o, vec![0; 4]).unwrap();
        let (beta, phi) = twist_iso(&c, &[0, 2, 3]).unwrap();
        assert_eq!(beta, vec![1, 0, 0, 2]);
        let d = c.with_alpha(beta.clone()).unwrap();
        for x in 0..36 {
            if x / 9 == 1 {
                assert_eq!(phi.apply(x), x);
            }
            for y in 0..36 {
                assert_eq!(c.adjacent(x, y), d.adjacent(phi.apply(x), phi.apply(y)));
                assert_eq!(c.intra_arc(x, y), d.intra_arc(phi.apply(x), phi.apply(y)));
            }
        }
        let (back, psi) = twist_iso(&d, &[3, 2, 0]).unwrap();
        assert_eq!(back, vec![0; 4]);
        assert!(phi.then(&psi).is_identity());
        assert!(twist_iso(&c, &[0, 0]).is_err());
    }

    #[test]
    fn non_isomorphism_mechanism() {
        let (g, o) = k4();
        let (a, b) = cfi_pair(&g, &o).unwrap();
        assert!(has_consistent_transversal(&a));
        assert!(!has_consistent_transversal(&b));
        assert!(cfi_isomorphism(&a, b.alpha()).unwrap().is_none());
    }

    #[test]
    fn cfi_sequence_on_k4() {
        let (g, o) = k4();
        let (a, _) = cfi_pair(&g, &o).unwrap();
        let base_seq = ContractionSequence::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let seq = cfi_contraction(&a, &base_seq).unwrap();
        assert!(verify_contraction(&RelStructure::from_tournament(&a.tournament()), &seq).unwrap() <= 35);
    }
}
