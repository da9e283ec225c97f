//! Permutation groups backed by a stabilizer chain, cosets and isomorphism
//! sets, plus backtracking transporter searches.
//!
//! Composition is left to right: `a.then(b)` maps `x` to `b(a(x))`, which is
//! the product `ab` in the convention `(γθ)(α) = θ(γ(α))`.

mod ops;
mod search;

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};

pub use ops::{derived_series, direct_product, is_solvable, wreath_generators, Factor};
pub use search::{coset_transporter_graph, coset_transporter_graph_parts, coset_transporter_hypergraph, Hypergraph};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::arg(format!("image array {images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Product of disjoint or overlapping cycles, applied left to right.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p = Self::identity(n);
        for c in cycles {
            let mut img: Vec<usize> = (0..n).collect();
            for (i, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(Error::arg(format!("cycle point {x} out of range")));
                }
                img[x] = c[(i + 1) % c.len()];
            }
            p = p.then(&Self::from_images(img)?);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(i, x)| i != *x).map(|(i, _)| i)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub(crate) base: usize,
    /// Strong generators fixing all earlier base points.
    pub(crate) gens: Vec<Permutation>,
    /// Basic orbit, sorted.
    pub(crate) orbit: Vec<usize>,
    /// `transversal[x]` maps the base point to `x`.
    pub(crate) transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(degree: usize, base: usize, gens: Vec<Permutation>) -> Self {
        let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        let mut queue = vec![base];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for s in &gens {
                let y = s.apply(x);
                if transversal[y].is_none() {
                    transversal[y] = Some(transversal[x].as_ref().unwrap().then(s));
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Level { base, gens, orbit: queue, transversal }
    }
}

/// Permutation group with a base and strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Like `new`, but the base starts with the points of `prefix` that the
    /// group moves, in the given order.
    pub fn with_base_prefix(degree: usize, generators: Vec<Permutation>, prefix: &[usize]) -> Result<Self> {
        if let Some(&x) = prefix.iter().find(|&&x| x >= degree) {
            return Err(Error::arg(format!("base point {x} out of range")));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::arg(format!("generator of degree {} in a group of degree {degree}", g.degree())));
        }
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let levels = schreier_sims(degree, &gens, prefix);
        let order = levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        Ok(PermGroup { degree, generators: gens, levels, order })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: vec![], levels: vec![], order: BigUint::one() }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).unwrap());
            let cyc: Vec<usize> = (0..degree).collect();
            gens.push(Permutation::from_cycles(degree, &[&cyc]).unwrap());
        }
        Self::new(degree, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub(crate) fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (h, j) = sift(&self.levels, p.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        orbit(&self.generators, self.degree, x)
    }

    /// Orbit partition of the domain, each orbit sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Uniform random element: product of random transversal elements.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for l in self.levels.iter().rev() {
            let x = l.orbit[rng.gen_range(0..l.orbit.len())];
            g = g.then(l.transversal[x].as_ref().unwrap());
        }
        g
    }

    /// All elements; only for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for l in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * l.orbit.len());
            for g in &out {
                for &x in &l.orbit {
                    next.push(g.then(l.transversal[x].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out
    }

    /// `self` is a subgroup of `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }
}

pub(crate) fn orbit(gens: &[Permutation], degree: usize, x: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[x] = true;
    let mut queue = vec![x];
    let mut i = 0;
    while i < queue.len() {
        let y = queue[i];
        i += 1;
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                queue.push(z);
            }
        }
    }
    queue.sort_unstable();
    queue
}

/// Strip `g` through the levels from `from` on; returns the residue and the
/// level where it dropped out (`levels.len()` if it went through).
fn sift(levels: &[Level], mut g: Permutation, from: usize) -> (Permutation, usize) {
    for (j, l) in levels.iter().enumerate().skip(from) {
        let beta = g.apply(l.base);
        match &l.transversal[beta] {
            None => return (g, j),
            Some(u) => g = g.then(&u.inverse()),
        }
    }
    (g, levels.len())
}

/// Among the points moved by `h`, the one in the largest orbit of `gens ∪ {h}`,
/// ties to the smallest id.
fn choose_base_point(degree: usize, gens: &[Permutation], h: &Permutation) -> usize {
    let mut all: Vec<Permutation> = gens.to_vec();
    all.push(h.clone());
    let mut best = (0, usize::MAX);
    let mut size = vec![0usize; degree];
    let mut done = vec![false; degree];
    for x in h.moved_points() {
        if !done[x] {
            let o = orbit(&all, degree, x);
            for &y in &o {
                done[y] = true;
                size[y] = o.len();
            }
        }
        if size[x] > best.0 {
            best = (size[x], x);
        }
    }
    best.1
}

fn fixes_prefix(g: &Permutation, base: &[usize]) -> bool {
    base.iter().all(|&b| g.apply(b) == b)
}

/// Deterministic Schreier-Sims.
fn schreier_sims(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Vec<Level> {
    if gens.is_empty() {
        return Vec::new();
    }
    let mut strong: Vec<Permutation> = gens.to_vec();
    let mut base: Vec<usize> = Vec::new();
    for &b in prefix {
        if !base.contains(&b) && gens.iter().any(|g| g.apply(b) != b) {
            base.push(b);
        }
    }
    for s in gens {
        if fixes_prefix(s, &base) {
            let b = choose_base_point(degree, &strong, s);
            base.push(b);
        }
    }
    let level_gens = |strong: &[Permutation], base: &[usize], i: usize| -> Vec<Permutation> {
        strong.iter().filter(|s| fixes_prefix(s, &base[..i])).cloned().collect()
    };
    let mut levels: Vec<Level> =
        (0..base.len()).map(|i| Level::new(degree, base[i], level_gens(&strong, &base, i))).collect();
    let mut i = base.len() as isize - 1;
    while i >= 0 {
        let li = i as usize;
        let mut restart = None;
        'outer: for &x in &levels[li].orbit.clone() {
            let ux = levels[li].transversal[x].clone().unwrap();
            for s in levels[li].gens.clone() {
                let y = s.apply(x);
                let uy = levels[li].transversal[y].as_ref().unwrap();
                let g = ux.then(&s).then(&uy.inverse());
                if g.is_identity() {
                    continue;
                }
                let (h, j) = sift(&levels, g, li + 1);
                if j < levels.len() || !h.is_identity() {
                    if j == levels.len() {
                        let b = choose_base_point(degree, &[], &h);
                        base.push(b);
                        levels.push(Level::new(degree, b, Vec::new()));
                    }
                    strong.push(h);
                    for l in li + 1..=j {
                        levels[l] = Level::new(degree, base[l], level_gens(&strong, &base, l));
                    }
                    restart = Some(j);
                    break 'outer;
                }
            }
        }
        match restart {
            Some(j) => i = j as isize,
            None => i -= 1,
        }
    }
    levels.retain(|l| l.orbit.len() > 1);
    levels
}

/// The coset `Γθ`: all maps `x ↦ θ(γ(x))` for `γ ∈ Γ`.
#[derive(Clone, Debug)]
pub struct Coset {
    pub group: PermGroup,
    pub rep: Permutation,
}

impl Coset {
    pub fn new(group: PermGroup, rep: Permutation) -> Result<Self> {
        if group.degree() != rep.degree() {
            return Err(Error::arg("coset representative degree differs from group degree"));
        }
        Ok(Coset { group, rep })
    }

    pub fn of_group(group: PermGroup) -> Self {
        let rep = Permutation::identity(group.degree());
        Coset { group, rep }
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn order(&self) -> &BigUint {
        self.group.order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree() && self.group.contains(&p.then(&self.rep.inverse()))
    }

    /// The element `γθ`.
    pub fn element(&self, gamma: &Permutation) -> Permutation {
        gamma.then(&self.rep)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.element(&self.group.random_element(rng))
    }

    pub fn elements(&self) -> Vec<Permutation> {
        self.group.elements().iter().map(|g| self.element(g)).collect()
    }

    /// Same set of maps.
    pub fn same_set(&self, other: &Coset) -> bool {
        self.group.same_group(&other.group) && self.contains(&other.rep)
    }

    /// The inverse coset `θ⁻¹Γ = (θ⁻¹Γθ)θ⁻¹` as a right coset.
    pub fn inverse(&self) -> Coset {
        let inv = self.rep.inverse();
        let gens = self.group.generators().iter().map(|g| inv.then(g).then(&self.rep)).collect();
        Coset { group: PermGroup::new(self.degree(), gens).unwrap(), rep: inv }
    }
}

/// Isomorphism set: empty or a coset of the automorphism group.
#[derive(Clone, Debug)]
pub enum IsoSet {
    Empty,
    Coset(Coset),
}

impl IsoSet {
    pub fn is_empty(&self) -> bool {
        matches!(self, IsoSet::Empty)
    }

    pub fn coset(&self) -> Option<&Coset> {
        match self {
            IsoSet::Empty => None,
            IsoSet::Coset(c) => Some(c),
        }
    }

    pub fn into_coset(self) -> Option<Coset> {
        match self {
            IsoSet::Empty => None,
            IsoSet::Coset(c) => Some(c),
        }
    }

    /// Number of maps (zero when empty).
    pub fn size(&self) -> BigUint {
        self.coset().map_or_else(BigUint::default, |c| c.order().clone())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.coset().is_some_and(|c| c.contains(p))
    }

    pub fn same_set(&self, other: &IsoSet) -> bool {
        match (self, other) {
            (IsoSet::Empty, IsoSet::Empty) => true,
            (IsoSet::Coset(a), IsoSet::Coset(b)) => a.same_set(b),
            _ => false,
        }
    }
}

impl From<Option<Coset>> for IsoSet {
    fn from(c: Option<Coset>) -> Self {
        c.map_or(IsoSet::Empty, IsoSet::Coset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn orders() {
        let c3 = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        assert_eq!(*c3.order(), BigUint::from(3u32));
        assert_eq!(*PermGroup::symmetric(4).order(), BigUint::from(24u32));
        assert_eq!(*PermGroup::symmetric(7).order(), BigUint::from(5040u32));
        assert!(c3.contains(&p(&[1, 2, 0])));
        assert!(!c3.contains(&p(&[1, 0, 2])));
        assert!(PermGroup::trivial(3).contains(&Permutation::identity(3)));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![2, 0]).is_err());
    }

    #[test]
    fn composition_convention() {
        let a = p(&[1, 0, 2]);
        let b = p(&[0, 2, 1]);
        assert_eq!(a.then(&b).apply(0), b.apply(a.apply(0)));
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn elements_and_random() {
        let g = PermGroup::symmetric(4);
        let els = g.elements();
        assert_eq!(els.len(), 24);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(g.contains(&g.random_element(&mut rng)));
        }
    }

    #[test]
    fn intransitive_product() {
        let a = Permutation::from_cycles(8, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(8, &[&[3, 4, 5, 6, 7]]).unwrap();
        let g = PermGroup::new(8, vec![a.then(&b)]).unwrap();
        assert_eq!(*g.order(), BigUint::from(15u32));
        let h = PermGroup::new(8, vec![a, b]).unwrap();
        assert_eq!(*h.order(), BigUint::from(15u32));
        assert_eq!(h.orbits().len(), 2);
    }

    #[test]
    fn coset_membership_and_inverse() {
        let g = PermGroup::new(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        let c = Coset::new(g, p(&[1, 0, 2])).unwrap();
        for e in c.elements() {
            assert!(c.contains(&e));
            assert!(c.inverse().contains(&e.inverse()));
        }
        assert!(!c.contains(&Permutation::identity(3)));
    }
}
