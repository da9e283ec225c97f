//! Backtracking over a stabilizer chain.
//!
//! An element of `G` factors as `g = t_0 ∘ t_1 ∘ … ∘ t_{m-1}` with `t_i` from
//! the i-th transversal. After fixing `t_0..t_j` the images of all points
//! fixed by `G^(j+1)` are known, so each node checks the newly determined
//! points against everything determined so far.

use std::collections::{BTreeMap, HashSet};

use super::{Coset, IsoSet, Level, PermGroup, Permutation};
use crate::graphcore::ArcColoredDigraph;

pub(crate) trait Constraint {
    /// `img` is valid on every point with `det[x]`; `fresh` lists the points
    /// determined at this node (already marked in `det`).
    fn check(&self, img: &[usize], det: &[bool], det_list: &[usize], fresh: &[usize]) -> bool;
}

struct Chain<'a> {
    levels: &'a [Level],
    /// Points fixed by the whole group.
    fixed0: Vec<usize>,
    /// `fresh[l]`: points fixed by `G^(l+1)` but not by `G^(l)`.
    fresh: Vec<Vec<usize>>,
}

impl<'a> Chain<'a> {
    fn new(group: &'a PermGroup) -> Self {
        let n = group.degree();
        let levels = group.levels();
        let fixed_by = |l: usize| -> Vec<bool> {
            match levels.get(l) {
                None => vec![true; n],
                Some(level) => (0..n).map(|x| level.gens.iter().all(|g| g.apply(x) == x)).collect(),
            }
        };
        let mut prev = fixed_by(0);
        let fixed0 = (0..n).filter(|&x| prev[x]).collect();
        let mut fresh = Vec::with_capacity(levels.len());
        for l in 0..levels.len() {
            let next = fixed_by(l + 1);
            fresh.push((0..n).filter(|&x| next[x] && !prev[x]).collect());
            prev = next;
        }
        Chain { levels, fixed0, fresh }
    }

    fn dfs(&self, l: usize, p: &Permutation, st: &mut State, c: &dyn Constraint) -> Option<Permutation> {
        if l == self.levels.len() {
            return Some(p.clone());
        }
        let level = &self.levels[l];
        for &x in &level.orbit {
            let q = level.transversal[x].as_ref().unwrap().then(p);
            if let Some(r) = self.descend(l, q, st, c) {
                return Some(r);
            }
        }
        None
    }

    /// Accept `q` as the partial product through level `l` and continue.
    fn descend(&self, l: usize, q: Permutation, st: &mut State, c: &dyn Constraint) -> Option<Permutation> {
        let fresh = &self.fresh[l];
        for &x in fresh {
            st.det[x] = true;
        }
        let mut out = None;
        if c.check(q.images(), &st.det, &st.list, fresh) {
            let len = st.list.len();
            st.list.extend_from_slice(fresh);
            out = self.dfs(l + 1, &q, st, c);
            st.list.truncate(len);
        }
        for &x in fresh {
            st.det[x] = false;
        }
        out
    }
}

struct State {
    det: Vec<bool>,
    list: Vec<usize>,
}

impl State {
    fn with(n: usize, pts: &[usize]) -> Self {
        let mut det = vec![false; n];
        for &x in pts {
            det[x] = true;
        }
        State { det, list: pts.to_vec() }
    }
}

/// First element of `group` satisfying `c`, in chain order.
fn find_element(group: &PermGroup, c: &dyn Constraint) -> Option<Permutation> {
    let chain = Chain::new(group);
    let n = group.degree();
    let id = Permutation::identity(n);
    let mut st = State::with(n, &chain.fixed0);
    if !c.check(id.images(), &st.det, &[], &chain.fixed0) {
        return None;
    }
    chain.dfs(0, &id, &mut st, c)
}

/// The subgroup `{g ∈ group : c(g)}`; `c` must define a subgroup.
fn find_subgroup(group: &PermGroup, c: &dyn Constraint) -> PermGroup {
    let chain = Chain::new(group);
    let n = group.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut fixed: Vec<usize> = chain.fixed0.clone();
    let mut prefix_fixed = vec![fixed.clone()];
    for l in 0..chain.levels.len() {
        fixed.extend_from_slice(&chain.fresh[l]);
        prefix_fixed.push(fixed.clone());
    }
    for i in (0..chain.levels.len()).rev() {
        let level = &chain.levels[i];
        let mut reached = super::orbit(&gens, n, level.base);
        for &beta in &level.orbit {
            if reached.binary_search(&beta).is_ok() {
                continue;
            }
            let mut st = State::with(n, &prefix_fixed[i]);
            let u = level.transversal[beta].clone().unwrap();
            if let Some(g) = chain.descend(i, u, &mut st, c) {
                gens.push(g);
                reached = super::orbit(&gens, n, level.base);
            }
        }
    }
    PermGroup::new(n, gens).expect("found generators share the degree")
}

/// `Iso = K·(γ₀θ)` where `K` solves the self-problem and `γ₀` the transport.
fn transport(coset: &Coset, to_self: &dyn Constraint, to_target: &dyn Constraint) -> IsoSet {
    match find_element(&coset.group, to_target) {
        None => IsoSet::Empty,
        Some(g0) => {
            let k = find_subgroup(&coset.group, to_self);
            IsoSet::Coset(Coset { group: k, rep: g0.then(&coset.rep) })
        }
    }
}

struct ColorCheck<'a> {
    g1: &'a ArcColoredDigraph,
    g2: &'a ArcColoredDigraph,
    /// Points the check looks at; everything else is ignored.
    active: Vec<bool>,
    /// Per-point color profile over the active points, a cheap unary filter.
    prof1: Vec<u64>,
    prof2: Vec<u64>,
}

impl<'a> ColorCheck<'a> {
    fn new(g1: &'a ArcColoredDigraph, g2: &'a ArcColoredDigraph, active: Vec<bool>) -> Self {
        let prof1 = profiles(g1, &active);
        let prof2 = profiles(g2, &active);
        ColorCheck { g1, g2, active, prof1, prof2 }
    }
}

fn profiles(g: &ArcColoredDigraph, active: &[bool]) -> Vec<u64> {
    (0..g.n())
        .map(|v| {
            let mut row: Vec<(u32, u32)> =
                (0..g.n()).filter(|&w| active[w]).map(|w| (g.color(v, w), g.color(w, v))).collect();
            row.sort_unstable();
            let mut h = 0xcbf2_9ce4_8422_2325u64 ^ g.color(v, v) as u64;
            for (a, b) in row {
                h = (h ^ ((a as u64) << 32 | b as u64)).wrapping_mul(0x100_0000_01b3);
                h ^= h >> 29;
            }
            h
        })
        .collect()
}

impl Constraint for ColorCheck<'_> {
    fn check(&self, img: &[usize], _det: &[bool], det_list: &[usize], fresh: &[usize]) -> bool {
        for &x in fresh.iter().filter(|&&x| self.active[x]) {
            let px = img[x];
            if self.prof1[x] != self.prof2[px] || self.g1.color(x, x) != self.g2.color(px, px) {
                return false;
            }
            for &y in det_list.iter().chain(fresh).filter(|&&y| self.active[y]) {
                let py = img[y];
                if self.g1.color(x, y) != self.g2.color(px, py) || self.g1.color(y, x) != self.g2.color(py, px) {
                    return false;
                }
            }
        }
        true
    }
}

fn same_profiles(g1: &ArcColoredDigraph, g2: &ArcColoredDigraph) -> bool {
    let all = vec![true; g1.n()];
    let mut p1 = profiles(g1, &all);
    let mut p2 = profiles(g2, &all);
    p1.sort_unstable();
    p2.sort_unstable();
    p1 == p2
}

/// `{φ ∈ Γθ : φ is a color-preserving isomorphism g1 → g2}`.
pub fn coset_transporter_graph(g1: &ArcColoredDigraph, g2: &ArcColoredDigraph, c: &Coset) -> IsoSet {
    if g1.n() != g2.n() || c.degree() != g1.n() {
        return IsoSet::Empty;
    }
    let pulled = g2.pullback(c.rep.images());
    if !same_profiles(g1, &pulled) {
        return IsoSet::Empty;
    }
    let all = vec![true; g1.n()];
    let to_target = ColorCheck::new(g1, &pulled, all.clone());
    let to_self = ColorCheck::new(g1, g1, all);
    transport(c, &to_self, &to_target)
}

/// Same result as `coset_transporter_graph` for a coset `Γθ` where `Γ` is the
/// direct product of groups acting on the `parts`, each part mapped by `θ`
/// onto a part. Parts are glued one at a time; before each step the base is
/// moved so that the points whose arcs tell the new part apart come first.
pub fn coset_transporter_graph_parts(
    g1: &ArcColoredDigraph,
    g2: &ArcColoredDigraph,
    c: &Coset,
    parts: &[Vec<usize>],
) -> IsoSet {
    let n = g1.n();
    if g2.n() != n || c.degree() != n {
        return IsoSet::Empty;
    }
    let pulled = g2.pullback(c.rep.images());
    if !same_profiles(g1, &pulled) {
        return IsoSet::Empty;
    }
    let mut part_of = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &x in p {
            part_of[x] = i;
        }
    }
    let mut factor_gens: Vec<Vec<Permutation>> = vec![Vec::new(); parts.len()];
    for g in c.group.generators() {
        match g.moved_points().next() {
            Some(x) if g.moved_points().all(|y| part_of[y] == part_of[x]) => factor_gens[part_of[x]].push(g.clone()),
            _ => return coset_transporter_graph(g1, g2, c),
        }
    }
    // Points of `done` whose colors towards `p` are not constant.
    let relevant = |done: &[usize], p: &[usize]| -> Vec<usize> {
        done.iter()
            .copied()
            .filter(|&x| {
                let first = (g1.color(x, p[0]), g1.color(p[0], x));
                p.iter().any(|&y| (g1.color(x, y), g1.color(y, x)) != first)
            })
            .collect()
    };
    let mut left: Vec<usize> = (0..parts.len()).filter(|&i| !parts[i].is_empty()).collect();
    let mut done: Vec<usize> = Vec::new();
    let mut active = vec![false; n];
    let mut gens: Vec<Permutation> = Vec::new();
    let mut rep = Permutation::identity(n);
    while !left.is_empty() {
        // Fewest constraining points first; ties to the earlier part.
        let (pos, rel) = left
            .iter()
            .enumerate()
            .map(|(pos, &i)| (pos, relevant(&done, &parts[i])))
            .min_by_key(|(pos, r)| (r.len(), *pos))
            .unwrap();
        let i = left.remove(pos);
        let mut prefix = parts[i].clone();
        prefix.extend(rel);
        gens.extend(factor_gens[i].iter().cloned());
        let group = PermGroup::with_base_prefix(n, gens.clone(), &prefix).expect("generators share the degree");
        for &x in &parts[i] {
            active[x] = true;
        }
        done.extend_from_slice(&parts[i]);
        let target = pulled.pullback(rep.images());
        let to_target = ColorCheck::new(g1, &target, active.clone());
        let to_self = ColorCheck::new(g1, g1, active.clone());
        let step = Coset { group, rep: rep.clone() };
        match transport(&step, &to_self, &to_target) {
            IsoSet::Empty => return IsoSet::Empty,
            IsoSet::Coset(k) => {
                gens = k.group.generators().to_vec();
                rep = k.rep;
            }
        }
    }
    let group = PermGroup::new(n, gens).expect("generators share the degree");
    IsoSet::Coset(Coset { group, rep: rep.then(&c.rep) })
}

/// Set system on `0..n`; edges are stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> crate::Result<Self> {
        let mut es: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            if let Some(&x) = e.iter().find(|&&x| x >= n) {
                return Err(crate::Error::arg(format!("hyperedge point {x} out of range")));
            }
            es.push(e);
        }
        es.sort();
        es.dedup();
        Ok(Hypergraph { n, edges: es })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    fn pullback(&self, p: &Permutation) -> Hypergraph {
        let inv = p.inverse();
        let edges = self.edges.iter().map(|e| e.iter().map(|&y| inv.apply(y)).collect()).collect();
        Hypergraph::new(self.n, edges).unwrap()
    }

    fn size_profile(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            *m.entry(e.len()).or_insert(0) += 1;
        }
        m
    }
}

struct EdgeCheck<'a> {
    edges: &'a [Vec<usize>],
    incident: Vec<Vec<usize>>,
    target: HashSet<Vec<usize>>,
    /// Edges of the target, and the target edges through each point.
    edges2: Vec<Vec<usize>>,
    incident2: Vec<Vec<usize>>,
}

impl<'a> EdgeCheck<'a> {
    fn new(h1: &'a Hypergraph, h2: &Hypergraph) -> Self {
        let incidence = |h: &Hypergraph| {
            let mut inc = vec![Vec::new(); h.n];
            for (i, e) in h.edges.iter().enumerate() {
                for &x in e {
                    inc[x].push(i);
                }
            }
            inc
        };
        EdgeCheck {
            edges: &h1.edges,
            incident: incidence(h1),
            target: h2.edges.iter().cloned().collect(),
            edges2: h2.edges.clone(),
            incident2: incidence(h2),
        }
    }
}

impl Constraint for EdgeCheck<'_> {
    fn check(&self, img: &[usize], det: &[bool], _det_list: &[usize], fresh: &[usize]) -> bool {
        let mut buf = Vec::new();
        for &x in fresh {
            if self.incident[x].len() != self.incident2[img[x]].len() {
                return false;
            }
            for &ei in &self.incident[x] {
                let e = &self.edges[ei];
                if e.iter().all(|&y| det[y]) {
                    buf.clear();
                    buf.extend(e.iter().map(|&y| img[y]));
                    buf.sort_unstable();
                    if !self.target.contains(&buf) {
                        return false;
                    }
                } else {
                    // The determined part of e must fit inside one target edge
                    // of the same size through img[x].
                    let fits = self.incident2[img[x]].iter().any(|&fi| {
                        let f = &self.edges2[fi];
                        f.len() == e.len() && e.iter().filter(|&&y| det[y]).all(|&y| f.binary_search(&img[y]).is_ok())
                    });
                    if !fits {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `{φ ∈ Γθ : φ maps the edges of h1 onto the edges of h2}`.
pub fn coset_transporter_hypergraph(h1: &Hypergraph, h2: &Hypergraph, c: &Coset) -> IsoSet {
    if h1.n != h2.n || c.degree() != h1.n || h1.size_profile() != h2.size_profile() {
        return IsoSet::Empty;
    }
    let pulled = h2.pullback(&c.rep);
    let to_target = EdgeCheck::new(h1, &pulled);
    let to_self = EdgeCheck::new(h1, h1);
    transport(c, &to_self, &to_target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::Tournament;
    use num_bigint::BigUint;

    fn acd(t: &Tournament) -> ArcColoredDigraph {
        t.into()
    }

    #[test]
    fn transitive_has_trivial_group() {
        let t = acd(&Tournament::transitive(3));
        let r = coset_transporter_graph(&t, &t, &Coset::of_group(PermGroup::symmetric(3)));
        let c = r.coset().unwrap();
        assert!(c.group.is_trivial());
        assert!(c.rep.is_identity());
    }

    #[test]
    fn cycle_vs_transitive_empty() {
        let a = acd(&Tournament::circular(1));
        let b = acd(&Tournament::transitive(3));
        assert!(coset_transporter_graph(&a, &b, &Coset::of_group(PermGroup::symmetric(3))).is_empty());
    }

    #[test]
    fn rotation_group_preserved() {
        let a = acd(&Tournament::circular(1));
        let rot = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        let r = coset_transporter_graph(&a, &a, &Coset::of_group(rot.clone()));
        assert!(r.coset().unwrap().group.same_group(&rot));
    }

    #[test]
    fn relabelled_target() {
        let t = Tournament::circular(3);
        let pi = Permutation::from_cycles(7, &[&[0, 3], &[1, 5, 6]]).unwrap();
        let u = t.relabel(pi.images());
        let r = coset_transporter_graph(&acd(&t), &acd(&u), &Coset::of_group(PermGroup::symmetric(7)));
        let c = r.coset().unwrap();
        assert_eq!(*c.order(), BigUint::from(7u32));
        assert!(c.contains(&pi));
    }

    #[test]
    fn parts_agree_with_whole() {
        // Two disjoint 3-cycles with the first dominating the second.
        let t = Tournament::from_fn(6, |x, y| if x / 3 == y / 3 { (y % 3) == (x % 3 + 1) % 3 } else { x < y });
        let pi = Permutation::from_cycles(6, &[&[0, 1], &[3, 4, 5]]).unwrap();
        let u = t.relabel(pi.images());
        let rot = Permutation::from_cycles(6, &[&[0, 1, 2]]).unwrap();
        let rot2 = Permutation::from_cycles(6, &[&[3, 4, 5]]).unwrap();
        let flip = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
        let c = Coset::of_group(PermGroup::new(6, vec![rot, rot2, flip]).unwrap());
        let parts = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let whole = coset_transporter_graph(&acd(&t), &acd(&u), &c);
        let glued = coset_transporter_graph_parts(&acd(&t), &acd(&u), &c, &parts);
        assert_eq!(whole.size(), glued.size());
        assert_eq!(glued.size(), BigUint::from(9u32));
        for g in glued.coset().unwrap().elements() {
            assert!(whole.coset().unwrap().contains(&g));
        }
    }

    #[test]
    fn hypergraph_examples() {
        let h = Hypergraph::new(3, vec![vec![0, 1]]).unwrap();
        let s3 = Coset::of_group(PermGroup::symmetric(3));
        let r = coset_transporter_hypergraph(&h, &h, &s3);
        assert_eq!(*r.coset().unwrap().order(), BigUint::from(2u32));
        let e = Hypergraph::new(3, vec![]).unwrap();
        assert!(coset_transporter_hypergraph(&h, &e, &s3).is_empty());
        let singles = Hypergraph::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let r = coset_transporter_hypergraph(&singles, &singles, &s3);
        assert_eq!(*r.coset().unwrap().order(), BigUint::from(6u32));
    }

    #[test]
    fn hypergraph_transport_moves_edge() {
        let h1 = Hypergraph::new(4, vec![vec![0, 1]]).unwrap();
        let h2 = Hypergraph::new(4, vec![vec![2, 3]]).unwrap();
        let r = coset_transporter_hypergraph(&h1, &h2, &Coset::of_group(PermGroup::symmetric(4)));
        let c = r.coset().unwrap();
        assert_eq!(*c.order(), BigUint::from(4u32));
        for g in c.elements() {
            let mut img = vec![g.apply(0), g.apply(1)];
            img.sort_unstable();
            assert_eq!(img, vec![2, 3]);
        }
    }
}
