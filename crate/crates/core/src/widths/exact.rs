use std::collections::{HashMap, HashSet};

use super::{dpd_from_order, ContractionSequence, DirectedPathDecomposition, LinearOrder};
use crate::error::{Error, Result};
use crate::graphcore::{Digraph, RelStructure};

/// Largest structure `exact_twin_width` accepts.
pub const EXACT_TWW_MAX: usize = 64;
const SUBSET_DP_MAX: usize = 22;
const DTD_SEARCH_MAX: usize = 16;

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

struct TwwSearch {
    n: usize,
    rows: Vec<Vec<u64>>,
    red0: Vec<u64>,
    failed: HashSet<Vec<u64>>,
    visited: usize,
}

impl TwwSearch {
    fn uniform(rows: &[u64], a: u64, b: u64) -> bool {
        let mut it = bits(a);
        let first = rows[it.next().unwrap()] & b;
        (first == 0 || first == b) && it.all(|v| rows[v] & b == first)
    }

    fn homogeneous(&self, x: u64, y: u64) -> bool {
        bits(x).all(|v| self.red0[v] & y == 0)
            && self.rows.iter().all(|r| Self::uniform(r, x, y) && Self::uniform(r, y, x))
    }

    /// Red row of `parts[i] ∪ parts[j]` against the other live parts.
    fn merged_row(&self, parts: &[u64], alive: u64, i: usize, j: usize) -> u64 {
        let m = parts[i] | parts[j];
        bits(alive & !(1 << i) & !(1 << j)).filter(|&c| !self.homogeneous(m, parts[c])).fold(0, |acc, c| acc | 1 << c)
    }

    fn dfs(&mut self, parts: &mut [u64], red: &mut [u64], alive: u64, w: usize, out: &mut Vec<(usize, usize)>) -> bool {
        let live = alive.count_ones() as usize;
        if live <= w + 1 {
            let first = alive.trailing_zeros() as usize;
            out.extend(bits(alive).skip(1).map(|c| (first, c)));
            return true;
        }
        let key: Vec<u64> = bits(alive).map(|c| parts[c]).collect();
        if self.failed.contains(&key) {
            return false;
        }
        self.visited += 1;
        let mut cands = Vec::new();
        for i in bits(alive) {
            for j in bits(alive & !((2u64 << i) - 1)) {
                let row = self.merged_row(parts, alive, i, j);
                let mut deg = row.count_ones() as usize;
                for c in bits(alive & !(1 << i) & !(1 << j)) {
                    let rc = (red[c] & !(1 << i) & !(1 << j)) | if row >> c & 1 == 1 { 1 << i } else { 0 };
                    deg = deg.max(rc.count_ones() as usize);
                }
                if deg <= w {
                    cands.push((deg, i, j, row));
                }
            }
        }
        cands.sort_unstable();
        for (_, i, j, row) in cands {
            let saved_red = red.to_vec();
            let (pi, pj) = (parts[i], parts[j]);
            parts[i] = pi | pj;
            parts[j] = 0;
            red[j] = 0;
            red[i] = row;
            for c in bits(alive & !(1 << i) & !(1 << j)) {
                red[c] = (red[c] & !(1 << i) & !(1 << j)) | if row >> c & 1 == 1 { 1 << i } else { 0 };
            }
            out.push((i, j));
            if self.dfs(parts, red, alive & !(1 << j), w, out) {
                return true;
            }
            out.pop();
            parts[i] = pi;
            parts[j] = pj;
            red.copy_from_slice(&saved_red);
        }
        self.failed.insert(key);
        false
    }
}

/// Twin width with a witness sequence, by iterative deepening over the width
/// with a depth-first search over merges. Intended as an oracle for small
/// structures.
pub fn exact_twin_width(a: &RelStructure) -> Result<(usize, ContractionSequence)> {
    let n = a.n();
    if n > EXACT_TWW_MAX {
        return Err(Error::Limit(format!("exact twin width supports at most {EXACT_TWW_MAX} vertices, got {n}")));
    }
    if n <= 1 {
        return Ok((0, ContractionSequence::new(n, Vec::new())?));
    }
    let to_rows = |m: &crate::graphcore::BitMatrix| -> Vec<u64> {
        (0..n).map(|v| m.row_ones(v).fold(0u64, |acc, w| acc | 1 << w)).collect()
    };
    let mut s = TwwSearch {
        n,
        rows: a.relations().iter().map(|(_, r)| to_rows(r)).collect(),
        red0: to_rows(a.red()),
        failed: HashSet::new(),
        visited: 0,
    };
    let alive = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for w in a.red_degree()..n {
        s.failed.clear();
        let mut parts: Vec<u64> = (0..s.n).map(|v| 1 << v).collect();
        let mut red = s.red0.clone();
        let mut out = Vec::with_capacity(n - 1);
        if s.dfs(&mut parts, &mut red, alive, w, &mut out) {
            log::debug!("exact twin width {w} found after {} states", s.visited);
            return Ok((w, ContractionSequence::new(n, out)?));
        }
        log::debug!("twin width exceeds {w} ({} states)", s.visited);
    }
    unreachable!("width n-1 always succeeds")
}

fn masks(g: &Digraph) -> (Vec<u32>, Vec<u32>) {
    let out = (0..g.n()).map(|v| g.out_neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let inn = (0..g.n()).map(|v| g.in_neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    (out, inn)
}

/// Minimises `cost` over orders, where an order is charged the maximum of
/// `cost(S, v)` over its prefixes `S` extended by `v`. Returns the optimum
/// and the order.
fn subset_dp(n: usize, what: &str, cost: impl Fn(u32, usize) -> u32) -> Result<(usize, Vec<usize>)> {
    if n > SUBSET_DP_MAX {
        return Err(Error::Limit(format!("exact {what} supports at most {SUBSET_DP_MAX} vertices, got {n}")));
    }
    let full = (1u32 << n) - 1;
    let mut best = vec![u32::MAX; 1 << n];
    let mut last = vec![0u8; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        for v in bits(s as u64) {
            let prev = s & !(1 << v);
            let c = best[prev as usize].max(cost(prev, v));
            if c < best[s as usize] {
                best[s as usize] = c;
                last[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok((best[full as usize] as usize, order))
}

/// Cut width with an optimal order.
pub fn exact_cutwidth(g: &Digraph) -> Result<(usize, LinearOrder)> {
    let (out, _) = masks(g);
    let (w, order) = subset_dp(g.n(), "cut width", |prev, v| {
        let s = prev | 1 << v;
        bits(s as u64).map(|u| (out[u] & !s).count_ones()).sum()
    })?;
    Ok((w, LinearOrder::from_sequence(&order)?))
}

/// Directed path width with an optimal decomposition, minimised over the
/// decompositions produced by [`dpd_from_order`].
pub fn exact_dpw(g: &Digraph) -> Result<(usize, DirectedPathDecomposition)> {
    let (out, _) = masks(g);
    let (w, order) = subset_dp(g.n(), "directed path width", |prev, _| {
        bits(prev as u64).filter(|&u| out[u] & !prev != 0).count() as u32
    })?;
    let d = dpd_from_order(g, &LinearOrder::from_sequence(&order)?);
    debug_assert_eq!(d.width(), w);
    Ok((w, d))
}

struct DtwSearch {
    full: u32,
    w: usize,
    out: Vec<u32>,
    inn: Vec<u32>,
    smalls: Vec<u32>,
    index: HashMap<u32, usize>,
    f: HashMap<u32, Vec<bool>>,
    d2: HashMap<(u32, u32), bool>,
    cover: HashMap<(u32, u32), bool>,
}

impl DtwSearch {
    fn reach(&self, start: u32, allowed: u32, adj: &[u32]) -> u32 {
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier as u64) {
                next |= adj[v];
            }
            next &= allowed & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// `guard` hits every walk that leaves `s` and comes back.
    fn guarded(&mut self, s: u32, guard: u32) -> bool {
        if let Some(&b) = self.d2.get(&(s, guard)) {
            return b;
        }
        let allowed = self.full & !guard;
        let start = s & allowed;
        let fwd = self.reach(start, allowed, &self.out);
        let bwd = self.reach(start, allowed, &self.inn);
        let ok = fwd & bwd & allowed & !s == 0;
        self.d2.insert((s, guard), ok);
        ok
    }

    /// Some child with vertex set `b` fits under a node whose `Γ` is `u`.
    fn good(&mut self, b: u32, u: u32) -> bool {
        let mut g = u;
        loop {
            if self.guarded(b, g) && self.f_of(b)[self.index[&g]] {
                return true;
            }
            if g == 0 {
                return false;
            }
            g = (g - 1) & u;
        }
    }

    /// `r` splits into blocks that each fit under `u`. A block equal to
    /// `cur` is excluded; that case is the fixpoint in `f_of`.
    fn covered(&mut self, r: u32, u: u32, cur: u32) -> bool {
        if r == 0 {
            return true;
        }
        if r != cur {
            if let Some(&b) = self.cover.get(&(r, u)) {
                return b;
            }
        }
        let low = r & r.wrapping_neg();
        let rest = r & !low;
        let mut sub = rest;
        let mut ok = false;
        loop {
            let block = sub | low;
            if block != cur && self.good(block, u) && self.covered(r & !block, u, cur) {
                ok = true;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        if r != cur {
            self.cover.insert((r, u), ok);
        }
        ok
    }

    /// For each small set `g`: the vertices `s` admit a decomposition whose
    /// root also carries the parent guard `g`.
    fn f_of(&mut self, s: u32) -> Vec<bool> {
        if let Some(v) = self.f.get(&s) {
            return v.clone();
        }
        let smalls = self.smalls.clone();
        let mut vals = vec![false; smalls.len()];
        for (gi, &g) in smalls.iter().enumerate() {
            vals[gi] = smalls.iter().filter(|&&u| u & g == g).any(|&u| {
                let cand = u & s;
                let mut beta = cand;
                loop {
                    if self.covered(s & !beta, u, s) {
                        return true;
                    }
                    if beta == 0 {
                        return false;
                    }
                    beta = (beta - 1) & cand;
                }
            });
        }
        // A node with an empty bag and a single child on the same vertices.
        let guards: Vec<usize> = (0..smalls.len()).filter(|&i| self.guarded(s, smalls[i])).collect();
        loop {
            let mut changed = false;
            for gi in 0..smalls.len() {
                if vals[gi] {
                    continue;
                }
                let g = smalls[gi];
                if guards.iter().any(|&hi| vals[hi] && ((g | smalls[hi]).count_ones() as usize) <= self.w + 1) {
                    vals[gi] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.f.insert(s, vals.clone());
        vals
    }
}

/// Whether `g` has a directed tree decomposition of width at most `w`.
/// Bags may be empty. Exhaustive; for small graphs only.
pub fn dtd_width_at_most(g: &Digraph, w: usize) -> Result<bool> {
    let n = g.n();
    if n > DTD_SEARCH_MAX {
        return Err(Error::Limit(format!(
            "directed tree width search supports at most {DTD_SEARCH_MAX} vertices, got {n}"
        )));
    }
    if w + 1 >= n {
        return Ok(true);
    }
    let (out, inn) = masks(g);
    let full = (1u32 << n) - 1;
    let smalls: Vec<u32> = (0..=full).filter(|m| m.count_ones() as usize <= w + 1).collect();
    let index = smalls.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut s =
        DtwSearch { full, w, out, inn, smalls, index, f: HashMap::new(), d2: HashMap::new(), cover: HashMap::new() };
    Ok(s.f_of(full)[s.index[&0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::Tournament;
    use crate::widths::{cutwidth_of_order, validate_dpd, verify_contraction};

    fn tww(t: &Tournament) -> usize {
        exact_twin_width(&RelStructure::from_tournament(t)).unwrap().0
    }

    #[test]
    fn exact_tww_examples() {
        for n in 1..=8 {
            assert_eq!(tww(&Tournament::transitive(n)), 0);
        }
        assert_eq!(tww(&Tournament::circular(1)), 1);
        assert_eq!(tww(&Tournament::circular(2)), 1);
    }

    #[test]
    fn witness_verifies() {
        let t = Tournament::circular(3);
        let a = RelStructure::from_tournament(&t);
        let (w, seq) = exact_twin_width(&a).unwrap();
        assert_eq!(verify_contraction(&a, &seq).unwrap(), w);
    }

    #[test]
    fn cutwidth_and_dpw() {
        let t = Tournament::transitive(5);
        let (cw, ord) = exact_cutwidth(t.digraph()).unwrap();
        assert_eq!(cw, 0);
        assert_eq!(cutwidth_of_order(t.digraph(), &ord), 0);
        let c = Tournament::circular(1);
        assert_eq!(exact_cutwidth(c.digraph()).unwrap().0, 1);
        let (pw, d) = exact_dpw(c.digraph()).unwrap();
        assert_eq!(pw, 1);
        assert_eq!(validate_dpd(c.digraph(), &d), Ok(()));
        assert_eq!(exact_dpw(&Digraph::empty(0)).unwrap().0, 0);
    }

    #[test]
    fn dtd_search_small_cases() {
        let t = Tournament::transitive(6);
        assert!(dtd_width_at_most(t.digraph(), 0).unwrap());
        let c = Tournament::circular(1);
        assert!(!dtd_width_at_most(c.digraph(), 0).unwrap());
        assert!(dtd_width_at_most(c.digraph(), 1).unwrap());
    }
}
