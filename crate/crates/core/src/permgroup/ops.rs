use super::{Coset, PermGroup, Permutation};
use crate::error::{Error, Result};

/// One factor of a direct product: a coset on local indices `0..k`, mapping
/// `domain[i]` to `codomain[rep(i)]`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub domain: Vec<usize>,
    pub codomain: Vec<usize>,
    pub coset: Coset,
}

/// Lift a local permutation on `0..block.len()` to `0..degree`.
fn lift(degree: usize, block: &[usize], g: &Permutation) -> Permutation {
    let mut img: Vec<usize> = (0..degree).collect();
    for (a, &x) in block.iter().enumerate() {
        img[x] = block[g.apply(a)];
    }
    Permutation(img)
}

fn check_cover(degree: usize, sets: impl Iterator<Item = usize>, what: &str) -> Result<()> {
    let mut seen = vec![false; degree];
    for x in sets {
        if x >= degree {
            return Err(Error::arg(format!("{what} point {x} out of range")));
        }
        if seen[x] {
            return Err(Error::arg(format!("{what}s overlap at point {x}")));
        }
        seen[x] = true;
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(Error::arg(format!("{what}s do not cover point {x}")));
    }
    Ok(())
}

/// Direct product of cosets on disjoint domains partitioning `0..degree`,
/// with the glued representative.
pub fn direct_product(degree: usize, factors: &[Factor]) -> Result<Coset> {
    check_cover(degree, factors.iter().flat_map(|f| f.domain.iter().copied()), "domain")?;
    check_cover(degree, factors.iter().flat_map(|f| f.codomain.iter().copied()), "codomain")?;
    let mut gens = Vec::new();
    let mut rep = vec![0; degree];
    for f in factors {
        if f.domain.len() != f.coset.degree() || f.codomain.len() != f.coset.degree() {
            return Err(Error::arg("factor domain size differs from its coset degree"));
        }
        gens.extend(f.coset.group.generators().iter().map(|g| lift(degree, &f.domain, g)));
        for (a, &x) in f.domain.iter().enumerate() {
            rep[x] = f.codomain[f.coset.rep.apply(a)];
        }
    }
    Coset::new(PermGroup::new(degree, gens)?, Permutation(rep))
}

/// Generators of the wreath-like product acting on the union of `blocks`.
///
/// `iso(i, j)` is the isomorphism coset from block `i` to block `j` on local
/// indices; `iso(i, i)` must be the automorphism group of block `i`.
pub fn wreath_generators(
    degree: usize,
    blocks: &[Vec<usize>],
    iso: impl Fn(usize, usize) -> Option<Coset>,
    delta: &PermGroup,
) -> Result<Vec<Permutation>> {
    let mut seen = vec![false; degree];
    for x in blocks.iter().flatten() {
        if *x >= degree || seen[*x] {
            return Err(Error::arg(format!("blocks overlap or leave the domain at {x}")));
        }
        seen[*x] = true;
    }
    if delta.degree() != blocks.len() {
        return Err(Error::arg("delta must act on block indices"));
    }
    let mut gens = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let aut = iso(i, i).ok_or_else(|| Error::arg(format!("missing iso table entry ({i},{i})")))?;
        gens.extend(aut.group.generators().iter().map(|g| lift(degree, b, g)));
    }
    for d in delta.generators() {
        let mut img: Vec<usize> = (0..degree).collect();
        for (i, b) in blocks.iter().enumerate() {
            let j = d.apply(i);
            let phi = iso(i, j).ok_or_else(|| Error::arg(format!("missing iso table entry ({i},{j})")))?;
            if blocks[j].len() != b.len() {
                return Err(Error::arg(format!("blocks {i} and {j} differ in size")));
            }
            for (a, &x) in b.iter().enumerate() {
                img[x] = blocks[j][phi.rep.apply(a)];
            }
        }
        gens.push(Permutation(img));
    }
    Ok(gens)
}

fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
    a.inverse().then(&b.inverse()).then(a).then(b)
}

/// Normal closure of `gens` in `g`.
fn normal_closure(g: &PermGroup, gens: Vec<Permutation>) -> PermGroup {
    let n = g.degree();
    let mut ngens = gens;
    let mut h = PermGroup::new(n, ngens.clone()).unwrap();
    loop {
        let mut grew = false;
        for x in g.generators() {
            for y in h.generators().to_vec() {
                let c = x.inverse().then(&y).then(x);
                if !h.contains(&c) {
                    ngens.push(c);
                    h = PermGroup::new(n, ngens.clone()).unwrap();
                    grew = true;
                }
            }
        }
        if !grew {
            return h;
        }
    }
}

/// `Γ = Γ⁽⁰⁾ ⊵ Γ⁽¹⁾ ⊵ …` until the series becomes trivial or stabilizes.
pub fn derived_series(g: &PermGroup) -> Vec<PermGroup> {
    let mut series = vec![g.clone()];
    loop {
        let cur = series.last().unwrap();
        if cur.is_trivial() {
            break;
        }
        let gens = cur.generators();
        let mut comms = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                comms.push(commutator(a, b));
            }
        }
        let next = normal_closure(cur, comms);
        if next.order() == cur.order() {
            break;
        }
        series.push(next);
    }
    series
}

pub fn is_solvable(g: &PermGroup) -> bool {
    derived_series(g).last().unwrap().is_trivial()
}
