//! Isomorphism of tournaments of bounded twin width.
//!
//! [`tournament_iso`] splits by 2-WL vertex colors and recurses until the
//! classes are 2-WL-homogeneous; [`iso_homogeneous`] climbs a partition
//! sequence, lifting isomorphism sets level by level with
//! [`lift_isomorphisms`].

mod brute;
mod lift;

use std::collections::{BTreeMap, BTreeSet};

pub use brute::{automorphism_group, brute_force_iso, small_iso};
pub use lift::{block_iso, lift_isomorphisms, Block, LiftSide};

use crate::error::{Error, Result};
use crate::graphcore::{scc, ArcColoredDigraph, Partition, Tournament};
use crate::permgroup::{coset_transporter_graph_parts, direct_product, Coset, Factor, IsoSet, PermGroup, Permutation};
use crate::wl::{color_subgraph, partition_sequence_with, wl_refine_joint, PartitionOutcome, StableColoring};

#[derive(Clone, Debug)]
pub enum IsoResult {
    Set(IsoSet),
    /// The partition sequence of the first tournament broke off at `level`,
    /// so its twin width exceeds the parameter.
    TwinWidthExceeded {
        level: usize,
    },
}

impl IsoResult {
    pub fn set(&self) -> Option<&IsoSet> {
        match self {
            IsoResult::Set(s) => Some(s),
            IsoResult::TwinWidthExceeded { .. } => None,
        }
    }

    pub fn into_set(self) -> Option<IsoSet> {
        match self {
            IsoResult::Set(s) => Some(s),
            IsoResult::TwinWidthExceeded { .. } => None,
        }
    }
}

/// Isomorphism classes of a growing family of pieces. Every piece stores
/// one isomorphism onto the representative of its class, so any pair of
/// entries can be answered by composing through the representative.
#[derive(Clone, Debug, Default)]
pub struct IsoTable {
    class: Vec<usize>,
    to_rep: Vec<Permutation>,
    reps: Vec<usize>,
    auts: Vec<PermGroup>,
    orbits: Vec<Vec<usize>>,
}

impl IsoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class[e]
    }

    pub fn degree(&self, e: usize) -> usize {
        self.to_rep[e].degree()
    }

    /// New class whose representative has automorphism group `aut`. The
    /// distinguished orbit is the smallest one, ties broken by least point.
    pub fn add_rep(&mut self, aut: PermGroup) -> usize {
        let orbit = aut.orbits().into_iter().min_by_key(|o| (o.len(), o[0])).unwrap_or_default();
        let e = self.class.len();
        self.class.push(self.reps.len());
        self.to_rep.push(Permutation::identity(aut.degree()));
        self.reps.push(e);
        self.auts.push(aut);
        self.orbits.push(orbit);
        e
    }

    /// New entry isomorphic to the representative of `class` via `to_rep`.
    pub fn add_member(&mut self, class: usize, to_rep: Permutation) -> Result<usize> {
        if class >= self.reps.len() || to_rep.degree() != self.auts[class].degree() {
            return Err(Error::arg("member does not match its class"));
        }
        self.class.push(class);
        self.to_rep.push(to_rep);
        Ok(self.class.len() - 1)
    }

    pub fn aut(&self, e: usize) -> PermGroup {
        let f = &self.to_rep[e];
        let fi = f.inverse();
        let gens = self.auts[self.class[e]].generators().iter().map(|g| f.then(g).then(&fi)).collect();
        PermGroup::new(f.degree(), gens).expect("conjugate has the same degree")
    }

    /// `Iso(e, f)` on local indices.
    pub fn get(&self, e: usize, f: usize) -> IsoSet {
        if self.class[e] != self.class[f] {
            return IsoSet::Empty;
        }
        let rep = self.to_rep[e].then(&self.to_rep[f].inverse());
        IsoSet::Coset(Coset::new(self.aut(e), rep).expect("degrees agree"))
    }

    /// The orbit `A_e`: the class orbit pulled back along the map to the
    /// representative, so isomorphisms between entries respect it.
    pub fn orbit(&self, e: usize) -> Vec<usize> {
        let fi = self.to_rep[e].inverse();
        let mut o: Vec<usize> = self.orbits[self.class[e]].iter().map(|&x| fi.apply(x)).collect();
        o.sort_unstable();
        o
    }
}

fn brute_result(t1: &Tournament, t2: &Tournament) -> IsoResult {
    IsoResult::Set(brute_force_iso(t1, t2))
}

fn joint_2wl(t1: &Tournament, t2: &Tournament) -> Result<Option<[StableColoring; 2]>> {
    let (g1, g2): (ArcColoredDigraph, ArcColoredDigraph) = (t1.into(), t2.into());
    let mut chis = wl_refine_joint(2, &[&g1, &g2])?;
    if chis[0].histogram() != chis[1].histogram() {
        return Ok(None);
    }
    let c2 = chis.pop().unwrap();
    let c1 = chis.pop().unwrap();
    Ok(Some([c1, c2]))
}

fn size_profile(p: &Partition) -> Vec<usize> {
    let mut s: Vec<usize> = p.parts().iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

/// Isomorphisms between 2-WL-homogeneous tournaments, or the level at which
/// the partition sequence of `t1` shows `tww(t1) > k`.
pub fn iso_homogeneous(t1: &Tournament, t2: &Tournament, k: usize) -> Result<IsoResult> {
    if t1.n() != t2.n() {
        return Ok(IsoResult::Set(IsoSet::Empty));
    }
    let Some([chi1, chi2]) = joint_2wl(t1, t2)? else {
        return Ok(IsoResult::Set(IsoSet::Empty));
    };
    if chi1.diagonal_colors().len() > 1 {
        return Err(Error::arg("tournaments are not 2-WL-homogeneous"));
    }
    let seq = match partition_sequence_with(t1, &chi1, k)? {
        PartitionOutcome::TwinWidthExceeded { level } => return Ok(IsoResult::TwinWidthExceeded { level }),
        PartitionOutcome::Sequence(s) => s,
    };
    let n = t1.n();
    if n <= 2 {
        return Ok(brute_result(t1, t2));
    }
    let hats = [chi1.arc_colored(t1).colored().clone(), chi2.arc_colored(t2).colored().clone()];
    let mut levels: [Vec<Partition>; 2] = [seq.partitions.clone(), vec![Partition::discrete(n)]];
    let mut chosen = BTreeSet::new();
    for &c in &seq.colors {
        chosen.insert(c);
        levels[1].push(scc(&color_subgraph(t2.digraph(), &chi2, &chosen)?));
    }
    if levels[0].iter().zip(&levels[1]).any(|(a, b)| size_profile(a) != size_profile(b)) {
        return Ok(IsoResult::Set(IsoSet::Empty));
    }
    let d = 2 * k + 1;
    let mut table = IsoTable::new();
    let rep = table.add_rep(PermGroup::trivial(1));
    let mut entries: [Vec<usize>; 2] = [vec![rep; n], vec![rep; n]];
    for v in 1..n {
        entries[0][v] = table.add_member(0, Permutation::identity(1))?;
    }
    for v in 0..n {
        entries[1][v] = table.add_member(0, Permutation::identity(1))?;
    }
    for (i, &cstar) in seq.colors.iter().enumerate() {
        let mut c = BTreeSet::new();
        for j in 0..2 {
            for q in levels[j][i].parts() {
                for &v in q {
                    for &w in q {
                        if v == w || hats[j].has_arc(v, w) {
                            c.insert(hats[j].color(v, w));
                        }
                    }
                }
            }
        }
        // Class representatives of this level, with their lifting instances.
        let mut reps: Vec<(LiftSide, PermGroup, usize)> = Vec::new();
        let mut next: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for j in 0..2 {
            let (fine, coarse) = (&levels[j][i], &levels[j][i + 1]);
            for piece in coarse.parts() {
                let local: BTreeMap<usize, usize> = piece.iter().enumerate().map(|(a, &v)| (v, a)).collect();
                let mut subs: Vec<usize> = piece.iter().map(|&v| fine.part_of(v)).collect();
                subs.sort_unstable();
                subs.dedup();
                let side = LiftSide {
                    graph: hats[j].induced(piece),
                    parts: subs.iter().map(|&p| fine.part(p).iter().map(|v| local[v]).collect()).collect(),
                    entries: subs.iter().map(|&p| entries[j][p]).collect(),
                };
                if let Err(e) = lift::validate(d, &side, &c, cstar, &table) {
                    if j == 1 {
                        return Ok(IsoResult::Set(IsoSet::Empty));
                    }
                    return Err(e);
                }
                let mut entry = None;
                for (rside, raut, rclass) in &reps {
                    if let Some(phi) = lift::isomorphism(&side, rside, raut, cstar, &table)? {
                        entry = Some(table.add_member(*rclass, phi)?);
                        break;
                    }
                }
                let e = match entry {
                    Some(e) => e,
                    None => {
                        let aut = lift::automorphisms(&side, cstar, &table)?;
                        let e = table.add_rep(aut.clone());
                        reps.push((side, aut, table.class_of(e)));
                        e
                    }
                };
                next[j].push(e);
            }
        }
        entries = next;
    }
    Ok(IsoResult::Set(table.get(entries[0][0], entries[1][0])))
}

/// `Iso(t1, t2)`, or a twin-width bound violation found in some color class.
pub fn tournament_iso(t1: &Tournament, t2: &Tournament, k: usize) -> Result<IsoResult> {
    if k == 0 {
        return Err(Error::arg("twin width parameter must be at least 1"));
    }
    if t1.n() != t2.n() {
        return Ok(IsoResult::Set(IsoSet::Empty));
    }
    let n = t1.n();
    if n <= 2 {
        return Ok(brute_result(t1, t2));
    }
    let Some([chi1, chi2]) = joint_2wl(t1, t2)? else {
        return Ok(IsoResult::Set(IsoSet::Empty));
    };
    let classes = |chi: &StableColoring| {
        let mut m: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            m.entry(chi.vertex_color(v)).or_default().push(v);
        }
        m
    };
    let (x1, x2) = (classes(&chi1), classes(&chi2));
    if x1.len() == 1 {
        return iso_homogeneous(t1, t2, k);
    }
    let mut factors = Vec::with_capacity(x1.len());
    for (col, a) in &x1 {
        let b = &x2[col];
        match tournament_iso(&t1.induced(a), &t2.induced(b), k)? {
            IsoResult::TwinWidthExceeded { level } => return Ok(IsoResult::TwinWidthExceeded { level }),
            IsoResult::Set(IsoSet::Empty) => return Ok(IsoResult::Set(IsoSet::Empty)),
            IsoResult::Set(IsoSet::Coset(coset)) => {
                factors.push(Factor { domain: a.clone(), codomain: b.clone(), coset })
            }
        }
    }
    let space = direct_product(n, &factors)?;
    let hats = [chi1.arc_colored(t1), chi2.arc_colored(t2)];
    let parts: Vec<Vec<usize>> = x1.into_values().collect();
    Ok(IsoResult::Set(coset_transporter_graph_parts(hats[0].colored(), hats[1].colored(), &space, &parts)))
}
