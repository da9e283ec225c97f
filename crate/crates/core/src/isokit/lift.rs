//! Lifting isomorphism sets from the parts of a partition to the whole
//! tournament.
//!
//! All isomorphism sets are between induced subtournaments and use local
//! indices: position `a` stands for the `a`-th smallest vertex of the piece.

use std::collections::{BTreeSet, HashMap};

use super::brute::small_iso;
use super::IsoTable;
use crate::error::{Error, Result};
use crate::graphcore::{scc, ArcColoredDigraph, Digraph, NO_ARC};
use crate::permgroup::{
    coset_transporter_graph, coset_transporter_hypergraph, direct_product, wreath_generators, Coset, Factor,
    Hypergraph, IsoSet, PermGroup, Permutation,
};

/// One side of a lifting instance: an arc-colored tournament, a partition of
/// its vertices and the table entry describing each part.
#[derive(Clone, Debug)]
pub struct LiftSide {
    pub graph: ArcColoredDigraph,
    pub parts: Vec<Vec<usize>>,
    pub entries: Vec<usize>,
}

impl LiftSide {
    fn part_of(&self) -> Vec<usize> {
        let mut p = vec![usize::MAX; self.graph.n()];
        for (i, q) in self.parts.iter().enumerate() {
            for &v in q {
                p[v] = i;
            }
        }
        p
    }
}

/// A union of parts of one side, given by part indices.
#[derive(Clone, Copy, Debug)]
pub struct Block<'a> {
    pub side: &'a LiftSide,
    pub parts: &'a [usize],
}

impl Block<'_> {
    fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.parts.iter().flat_map(|&p| self.side.parts[p].iter().copied()).collect();
        vs.sort_unstable();
        vs
    }
}

fn loop_marked(g: &ArcColoredDigraph, vs: &[usize], anchor: Option<usize>) -> ArcColoredDigraph {
    let mut h = g.induced(vs);
    if let Some(a) = anchor {
        h.set_loop(a, NO_ARC - 1);
    }
    h
}

/// `Iso(T[L], T'[L'])` for two unions of parts, following the quotient over
/// chosen orbits and a wreath-product search space.
pub fn block_iso(table: &IsoTable, a: Block<'_>, b: Block<'_>) -> Result<IsoSet> {
    for blk in [a, b] {
        if let Some(&p) = blk.parts.iter().find(|&&p| p >= blk.side.parts.len()) {
            return Err(Error::arg(format!("block names missing part {p}")));
        }
        if let Some(&p) = blk.parts.iter().find(|&&p| blk.side.entries[p] >= table.len()) {
            return Err(Error::arg(format!("part {p} has no iso table entry")));
        }
    }
    let (va, vb) = (a.vertices(), b.vertices());
    if a.parts.len() != b.parts.len() || va.len() != vb.len() {
        return Ok(IsoSet::Empty);
    }
    let entry = |blk: &Block, i: usize| blk.side.entries[blk.parts[i]];
    // A_Q as vertices of the side.
    let orbit = |blk: &Block, i: usize| -> Result<Vec<usize>> {
        let q = &blk.side.parts[blk.parts[i]];
        let o: Vec<usize> = table.orbit(entry(blk, i)).into_iter().map(|x| q[x]).collect();
        if o.len().is_multiple_of(2) {
            return Err(Error::internal(format!("orbit of even size {} in a tournament part", o.len())));
        }
        Ok(o)
    };
    let quotient = |blk: &Block| -> Result<ArcColoredDigraph> {
        let m = blk.parts.len();
        let orbits = (0..m).map(|i| orbit(blk, i)).collect::<Result<Vec<_>>>()?;
        let g = &blk.side.graph;
        let mut colors = vec![NO_ARC; m * m];
        for i in 0..m {
            colors[i * m + i] = table.class_of(entry(blk, i)) as u32;
            for j in 0..m {
                if i == j {
                    continue;
                }
                let fwd = orbits[i].iter().flat_map(|&x| orbits[j].iter().map(move |&y| (x, y)));
                let (mut ij, mut ji) = (0, 0);
                for (x, y) in fwd {
                    if g.has_arc(x, y) {
                        ij += 1;
                    } else if g.has_arc(y, x) {
                        ji += 1;
                    }
                }
                if ij > ji {
                    colors[i * m + j] = 0;
                }
            }
        }
        ArcColoredDigraph::from_matrix(m, colors)
    };
    let (qa, qb) = (quotient(&a)?, quotient(&b)?);
    let tilde = match small_iso(&qa, &qb) {
        IsoSet::Empty => return Ok(IsoSet::Empty),
        IsoSet::Coset(c) => c,
    };
    let pos_a: HashMap<usize, usize> = va.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let pos_b: HashMap<usize, usize> = vb.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let blocks: Vec<Vec<usize>> = a.parts.iter().map(|&p| a.side.parts[p].iter().map(|v| pos_a[v]).collect()).collect();
    let gens =
        wreath_generators(va.len(), &blocks, |i, j| table.get(entry(&a, i), entry(&a, j)).into_coset(), &tilde.group)?;
    let delta = PermGroup::new(va.len(), gens)?;
    let mut theta = vec![0; va.len()];
    for i in 0..a.parts.len() {
        let j = tilde.rep.apply(i);
        let phi = table
            .get(entry(&a, i), entry(&b, j))
            .into_coset()
            .ok_or_else(|| Error::internal("quotient isomorphism pairs non-isomorphic parts"))?;
        let (qi, qj) = (&a.side.parts[a.parts[i]], &b.side.parts[b.parts[j]]);
        for (x, &v) in qi.iter().enumerate() {
            theta[pos_a[&v]] = pos_b[&qj[phi.rep.apply(x)]];
        }
    }
    let coset = Coset::new(delta, Permutation::from_images(theta)?)?;
    Ok(coset_transporter_graph(&a.side.graph.induced(&va), &b.side.graph.induced(&vb), &coset))
}

/// Checks the lifting preconditions on one side.
pub(crate) fn validate(d: usize, s: &LiftSide, c: &BTreeSet<u32>, cstar: u32, table: &IsoTable) -> Result<()> {
    let g = &s.graph;
    let n = g.n();
    let fail = |which: &'static str, detail: String| Err(Error::Precondition { which, detail });
    if d == 0 {
        return fail("A", "d must be positive".into());
    }
    for u in 0..n {
        for v in u + 1..n {
            if g.has_arc(u, v) == g.has_arc(v, u) {
                return fail("B", format!("pair ({u},{v}) is not oriented exactly once"));
            }
        }
    }
    let part_of = s.part_of();
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return fail("C", format!("vertex {v} lies in no part"));
    }
    if s.parts.iter().map(Vec::len).sum::<usize>() != n || s.parts.iter().any(Vec::is_empty) {
        return fail("C", "parts overlap or are empty".into());
    }
    for u in 0..n {
        for v in 0..n {
            if (u == v || g.has_arc(u, v)) && (part_of[u] == part_of[v]) != c.contains(&g.color(u, v)) {
                return fail("C", format!("pair ({u},{v}) breaks the color definition of the partition"));
            }
        }
    }
    if c.contains(&cstar) {
        return fail("D", format!("color {cstar} is intra-cluster"));
    }
    let mut hits = vec![usize::MAX; s.parts.len()];
    let mut quotient = Vec::new();
    for u in 0..n {
        let mut fan = 0;
        for v in 0..n {
            if g.has_arc(u, v) && g.color(u, v) == cstar {
                if hits[part_of[v]] != u {
                    hits[part_of[v]] = u;
                    fan += 1;
                }
                quotient.push((part_of[u], part_of[v]));
            }
        }
        if fan > d {
            return fail("D", format!("vertex {u} reaches {fan} parts through color {cstar}, more than {d}"));
        }
    }
    quotient.sort_unstable();
    quotient.dedup();
    let qg = Digraph::from_edges(s.parts.len(), quotient)?;
    if scc(&qg).len() != 1 {
        return fail("D", "parts are not strongly connected through the lifting color".into());
    }
    if s.entries.len() != s.parts.len() {
        return fail("E", "one table entry per part is required".into());
    }
    for (q, &e) in s.parts.iter().zip(&s.entries) {
        if e >= table.len() || table.degree(e) != q.len() {
            return fail("E", format!("table entry {e} does not describe a part of size {}", q.len()));
        }
    }
    Ok(())
}

/// Rewrites a coset on positions of `w1 → w2` as a coset on vertices.
fn to_vertices(c: &Coset, w1: &[usize], w2: &[usize]) -> Result<Coset> {
    let n = w1.len();
    let relabel = |p: &Permutation, dst: &[usize]| {
        let mut img = vec![0; n];
        for a in 0..n {
            img[w1[a]] = dst[p.apply(a)];
        }
        Permutation::from_images(img)
    };
    let gens = c.group.generators().iter().map(|g| relabel(g, w1)).collect::<Result<Vec<_>>>()?;
    Coset::new(PermGroup::new(n, gens)?, relabel(&c.rep, w2)?)
}

struct Lifter<'a> {
    sides: [&'a LiftSide; 2],
    part_of: [Vec<usize>; 2],
    cstar: u32,
    table: &'a IsoTable,
}

/// Vertices of one side of the current front, as an ordered list plus a
/// membership mask over parts.
struct Front {
    order: Vec<usize>,
    parts: Vec<bool>,
}

impl<'a> Lifter<'a> {
    fn new(s1: &'a LiftSide, s2: &'a LiftSide, cstar: u32, table: &'a IsoTable) -> Self {
        Lifter { sides: [s1, s2], part_of: [s1.part_of(), s2.part_of()], cstar, table }
    }

    fn n(&self) -> usize {
        self.sides[0].graph.n()
    }

    /// `L^u` as sorted part indices.
    fn layer(&self, j: usize, front: &Front, u: usize) -> Vec<usize> {
        let g = &self.sides[j].graph;
        let mut ps: Vec<usize> = (0..g.n())
            .filter(|&w| g.has_arc(u, w) && g.color(u, w) == self.cstar)
            .map(|w| self.part_of[j][w])
            .filter(|&p| !front.parts[p])
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    fn block_iso(&self, j1: usize, l1: &[usize], j2: usize, l2: &[usize]) -> Result<IsoSet> {
        block_iso(self.table, Block { side: self.sides[j1], parts: l1 }, Block { side: self.sides[j2], parts: l2 })
    }

    fn marked(&self, j: usize, order: &[usize], anchor: usize) -> ArcColoredDigraph {
        let a = order.iter().position(|&v| v == anchor);
        loop_marked(&self.sides[j].graph, order, a)
    }

    /// `Iso((T_1, r1), (T_2, r2))` as a coset on vertices.
    fn anchored(&self, r1: usize, r2: usize) -> Result<IsoSet> {
        let n = self.n();
        let (s1, s2) = (self.sides[0], self.sides[1]);
        let (p1, p2) = (self.part_of[0][r1], self.part_of[1][r2]);
        let base = match self.table.get(s1.entries[p1], s2.entries[p2]) {
            IsoSet::Empty => return Ok(IsoSet::Empty),
            IsoSet::Coset(c) => c,
        };
        let mut fronts = [
            Front { order: s1.parts[p1].clone(), parts: (0..s1.parts.len()).map(|p| p == p1).collect() },
            Front { order: s2.parts[p2].clone(), parts: (0..s2.parts.len()).map(|p| p == p2).collect() },
        ];
        let mut cur = match coset_transporter_graph(
            &self.marked(0, &fronts[0].order, r1),
            &self.marked(1, &fronts[1].order, r2),
            &base,
        ) {
            IsoSet::Empty => return Ok(IsoSet::Empty),
            IsoSet::Coset(c) => c,
        };
        while fronts[0].order.len() < n {
            let frontier = |j: usize, f: &Front| -> Vec<(usize, Vec<usize>)> {
                f.order.iter().map(|&u| (u, self.layer(j, f, u))).filter(|(_, l)| !l.is_empty()).collect()
            };
            let us = [frontier(0, &fronts[0]), frontier(1, &fronts[1])];
            if us[0].is_empty() || us[1].is_empty() {
                if us[0].is_empty() && us[1].is_empty() {
                    return Err(Error::internal("front stopped growing before covering the tournament"));
                }
                return Ok(IsoSet::Empty);
            }
            // Classes of ~ over both sides, each member with an isomorphism
            // to the class representative's layer.
            let all: Vec<(usize, usize)> = (0..2).flat_map(|j| (0..us[j].len()).map(move |i| (j, i))).collect();
            let mut classes: Vec<Vec<(usize, usize, Coset)>> = Vec::new();
            for &(j, i) in &all {
                let l = &us[j][i].1;
                let mut placed = false;
                for class in classes.iter_mut() {
                    let (rj, ri, _) = class[0];
                    if let IsoSet::Coset(c) = self.block_iso(j, l, rj, &us[rj][ri].1)? {
                        class.push((j, i, c));
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    let aut = self
                        .block_iso(j, l, j, l)?
                        .into_coset()
                        .ok_or_else(|| Error::internal("layer has no automorphisms"))?;
                    classes.push(vec![(j, i, aut)]);
                }
            }
            let key = |class: &Vec<(usize, usize, Coset)>| {
                let (j, i, _) = class[0];
                let mut sizes: Vec<usize> = us[j][i].1.iter().map(|&p| self.sides[j].parts[p].len()).collect();
                sizes.sort_unstable();
                let color =
                    class.iter().map(|&(j, i, _)| self.sides[j].graph.color(us[j][i].0, us[j][i].0)).min().unwrap();
                let least = class.iter().map(|&(j, i, _)| (j, us[j][i].0)).min().unwrap();
                (sizes, color, least)
            };
            let star = classes.iter().min_by_key(|c| key(c)).unwrap();
            let members: [Vec<(usize, &Coset)>; 2] =
                [0, 1].map(|side| star.iter().filter(|m| m.0 == side).map(|(_, i, c)| (*i, c)).collect::<Vec<_>>());
            let layer_union = |j: usize| -> Vec<usize> {
                let mut ps: Vec<usize> = members[j].iter().flat_map(|&(i, _)| us[j][i].1.iter().copied()).collect();
                ps.sort_unstable();
                ps.dedup();
                ps
            };
            let (lp1, lp2) = (layer_union(0), layer_union(1));
            let size = |j: usize, ps: &[usize]| ps.iter().map(|&p| self.sides[j].parts[p].len()).sum::<usize>();
            if members[0].len() != members[1].len() || size(0, &lp1) != size(1, &lp2) {
                return Ok(IsoSet::Empty);
            }
            // Γ'θ': keep the maps sending U*_1 onto U*_2.
            let pos =
                |order: &[usize]| -> HashMap<usize, usize> { order.iter().enumerate().map(|(a, &v)| (v, a)).collect() };
            let (pos1, pos2) = (pos(&fronts[0].order), pos(&fronts[1].order));
            let ustar = |j: usize, p: &HashMap<usize, usize>| -> Vec<usize> {
                members[j].iter().map(|&(i, _)| p[&us[j][i].0]).collect()
            };
            let w = fronts[0].order.len();
            let h1 = Hypergraph::new(w, vec![ustar(0, &pos1)])?;
            let h2 = Hypergraph::new(w, vec![ustar(1, &pos2)])?;
            let gamma = match coset_transporter_hypergraph(&h1, &h2, &cur) {
                IsoSet::Empty => return Ok(IsoSet::Empty),
                IsoSet::Coset(c) => c,
            };
            // A_j = {(u, x) : u ∈ U*_j, x ∈ L^u}, grouped by u.
            let layer_vertices = |j: usize, i: usize| -> Vec<usize> {
                let mut vs: Vec<usize> =
                    us[j][i].1.iter().flat_map(|&p| self.sides[j].parts[p].iter().copied()).collect();
                vs.sort_unstable();
                vs
            };
            let a_sets: [Vec<(usize, Vec<usize>)>; 2] =
                [0, 1].map(|j| members[j].iter().map(|&(i, _)| (us[j][i].0, layer_vertices(j, i))).collect());
            let offsets: [Vec<usize>; 2] = [0, 1].map(|j| {
                let mut off = vec![0];
                for (_, vs) in &a_sets[j] {
                    off.push(off.last().unwrap() + vs.len());
                }
                off
            });
            let a_len = *offsets[0].last().unwrap();
            if a_len != *offsets[1].last().unwrap() {
                return Ok(IsoSet::Empty);
            }
            let blocks: Vec<Vec<usize>> =
                (0..a_sets[0].len()).map(|b| (offsets[0][b]..offsets[0][b + 1]).collect()).collect();
            // Isomorphism between the layers of two members, via the class
            // representative: member m carries some ψ_m: L^m → L^rep.
            let to_rep = |j: usize, b: usize| -> &Coset { members[j][b].1 };
            let rep_aut = &star[0].2;
            let layer_iso = |j1: usize, b1: usize, j2: usize, b2: usize| -> Coset {
                let (x, y) = (to_rep(j1, b1), to_rep(j2, b2));
                let is_rep = |j: usize, b: usize| (j, members[j][b].0) == (star[0].0, star[0].1);
                let fwd = if is_rep(j1, b1) { Permutation::identity(x.degree()) } else { x.rep.clone() };
                let back = if is_rep(j2, b2) { Permutation::identity(y.degree()) } else { y.rep.inverse() };
                let rep = fwd.then(&back);
                let gens = rep_aut.group.generators().iter().map(|g| fwd.then(g).then(&fwd.inverse())).collect();
                Coset::new(PermGroup::new(x.degree(), gens).unwrap(), rep).unwrap()
            };
            // Restriction of Γ' to U*_1, as a group on member indices.
            let member_index: HashMap<usize, usize> =
                a_sets[0].iter().enumerate().map(|(b, (u, _))| (pos1[u], b)).collect();
            let restrict = |g: &Permutation| -> Result<Permutation> {
                let img = a_sets[0].iter().map(|(u, _)| member_index[&g.apply(pos1[u])]).collect();
                Permutation::from_images(img)
            };
            let delta_u = PermGroup::new(
                a_sets[0].len(),
                gamma.group.generators().iter().map(restrict).collect::<Result<Vec<_>>>()?,
            )?;
            let gens = wreath_generators(a_len, &blocks, |b1, b2| Some(layer_iso(0, b1, 0, b2)), &delta_u)?;
            let delta = PermGroup::new(a_len, gens)?;
            let member_index2: HashMap<usize, usize> =
                a_sets[1].iter().enumerate().map(|(b, (u, _))| (pos2[u], b)).collect();
            let mut drep = vec![0; a_len];
            for b in 0..a_sets[0].len() {
                let b2 = member_index2[&gamma.rep.apply(pos1[&a_sets[0][b].0])];
                let phi = layer_iso(0, b, 1, b2);
                for x in 0..a_sets[0][b].1.len() {
                    drep[offsets[0][b] + x] = offsets[1][b2] + phi.rep.apply(x);
                }
            }
            let delta_coset = Coset::new(delta, Permutation::from_images(drep)?)?;
            // Hyperedge per new vertex: all pairs (u, x) sharing x.
            let l_vertices = |j: usize, ps: &[usize]| -> Vec<usize> {
                let mut vs: Vec<usize> = ps.iter().flat_map(|&p| self.sides[j].parts[p].iter().copied()).collect();
                vs.sort_unstable();
                vs
            };
            let (lv1, lv2) = (l_vertices(0, &lp1), l_vertices(1, &lp2));
            let incidence = |j: usize, lv: &[usize]| -> Vec<Vec<usize>> {
                let at: HashMap<usize, usize> = lv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                let mut edges = vec![Vec::new(); lv.len()];
                for (b, (_, vs)) in a_sets[j].iter().enumerate() {
                    for (x, v) in vs.iter().enumerate() {
                        edges[at[v]].push(offsets[j][b] + x);
                    }
                }
                edges
            };
            let (e1, e2) = (incidence(0, &lv1), incidence(1, &lv2));
            let hh1 = Hypergraph::new(a_len, e1.clone())?;
            let hh2 = Hypergraph::new(a_len, e2.clone())?;
            let dprime = match coset_transporter_hypergraph(&hh1, &hh2, &delta_coset) {
                IsoSet::Empty => return Ok(IsoSet::Empty),
                IsoSet::Coset(c) => c,
            };
            // Induced action on L_1: the hyperedge of x goes to that of x'.
            let owner = |edges: &[Vec<usize>]| -> Vec<usize> {
                let mut o = vec![0; a_len];
                for (x, e) in edges.iter().enumerate() {
                    for &pt in e {
                        o[pt] = x;
                    }
                }
                o
            };
            let (own1, own2) = (owner(&e1), owner(&e2));
            let act = |p: &Permutation, own: &[usize]| -> Result<Permutation> {
                Permutation::from_images(e1.iter().map(|e| own[p.apply(e[0])]).collect())
            };
            let lgens = dprime.group.generators().iter().map(|g| act(g, &own1)).collect::<Result<Vec<_>>>()?;
            let lstar = Coset::new(PermGroup::new(lv1.len(), lgens)?, act(&dprime.rep, &own2)?)?;
            // Γ'θ' × Δ*δ* on W_{i+1}, then the final transporter.
            let ext = w + lv1.len();
            let prod = direct_product(
                ext,
                &[
                    Factor { domain: (0..w).collect(), codomain: (0..w).collect(), coset: gamma },
                    Factor { domain: (w..ext).collect(), codomain: (w..ext).collect(), coset: lstar },
                ],
            )?;
            fronts[0].order.extend(&lv1);
            fronts[1].order.extend(&lv2);
            for &p in &lp1 {
                fronts[0].parts[p] = true;
            }
            for &p in &lp2 {
                fronts[1].parts[p] = true;
            }
            debug_assert!(fronts[0]
                .parts
                .iter()
                .zip(&s1.parts)
                .all(|(&inw, q)| inw == q.iter().all(|v| fronts[0].order.contains(v))));
            cur = match coset_transporter_graph(
                &self.marked(0, &fronts[0].order, r1),
                &self.marked(1, &fronts[1].order, r2),
                &prod,
            ) {
                IsoSet::Empty => return Ok(IsoSet::Empty),
                IsoSet::Coset(c) => c,
            };
        }
        Ok(IsoSet::Coset(to_vertices(&cur, &fronts[0].order, &fronts[1].order)?))
    }
}

/// `Iso(T_1, T_2)` from the isomorphism sets of the parts.
///
/// `Aut(T_1)` is assembled from anchored sets `r1 ↦ r2` within `T_1`, one
/// per orbit; a single anchored isomorphism into `T_2` then gives the coset.
pub fn lift_isomorphisms(
    d: usize,
    s1: &LiftSide,
    s2: &LiftSide,
    c: &BTreeSet<u32>,
    cstar: u32,
    table: &IsoTable,
) -> Result<IsoSet> {
    validate(d, s1, c, cstar, table)?;
    validate(d, s2, c, cstar, table)?;
    if s1.graph.n() != s2.graph.n() {
        return Ok(IsoSet::Empty);
    }
    let aut = automorphisms(s1, cstar, table)?;
    Ok(match isomorphism(s1, s2, &aut, cstar, table)? {
        None => IsoSet::Empty,
        Some(phi) => IsoSet::Coset(Coset::new(aut, phi)?),
    })
}

/// `Aut(T)` via anchored sets `0 ↦ r` within one side.
pub(crate) fn automorphisms(s: &LiftSide, cstar: u32, table: &IsoTable) -> Result<PermGroup> {
    let n = s.graph.n();
    if n == 0 {
        return Ok(PermGroup::trivial(0));
    }
    let lifter = Lifter::new(s, s, cstar, table);
    let stab = lifter
        .anchored(0, 0)?
        .into_coset()
        .ok_or_else(|| Error::internal("identity missing from anchored automorphisms"))?;
    let mut gens: Vec<Permutation> = stab.group.generators().to_vec();
    let mut group = PermGroup::new(n, gens.clone())?;
    for r in 1..n {
        if s.graph.color(r, r) != s.graph.color(0, 0) || group.orbit(0).contains(&r) {
            continue;
        }
        if let IsoSet::Coset(c) = lifter.anchored(0, r)? {
            gens.push(c.rep);
            group = PermGroup::new(n, gens.clone())?;
        }
    }
    Ok(group)
}

/// One isomorphism `T_1 → T_2`, given `Aut(T_2)` to skip anchors in the same
/// orbit.
pub(crate) fn isomorphism(
    s1: &LiftSide,
    s2: &LiftSide,
    aut2: &PermGroup,
    cstar: u32,
    table: &IsoTable,
) -> Result<Option<Permutation>> {
    let n = s1.graph.n();
    if n != s2.graph.n() {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(Permutation::identity(0)));
    }
    let lifter = Lifter::new(s1, s2, cstar, table);
    let mut done = vec![false; n];
    for r in 0..n {
        if done[r] || s2.graph.color(r, r) != s1.graph.color(0, 0) {
            continue;
        }
        for x in aut2.orbit(r) {
            done[x] = true;
        }
        if let IsoSet::Coset(c) = lifter.anchored(0, r)? {
            return Ok(Some(c.rep));
        }
    }
    Ok(None)
}
