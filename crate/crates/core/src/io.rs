//! Plain-text file formats.
//!
//! Every format starts with a header line naming it. Blank lines and lines
//! starting with `#` are skipped. Errors carry 1-based line and column.
//!
//! ```text
//! tournament 3        digraph 3 2        contractions 3
//! 010                 0 1                0 1
//! 001                 1 2                0 2
//! 100
//! ```
//!
//! * `struct <n>` followed by sections `rel <name> <m>` and `red <m>`, each
//!   with `m` lines `u v`.
//! * `order <n>` followed by one line with the vertices from first to last.
//! * `dpd <p>` followed by `p` bag lines; `-` is the empty bag.
//! * `dtd <t>` followed by `t-1` tree edge lines `parent child`, then per
//!   node `bag ...` and `guard ...` lines (node 0 first).
//! * `group <degree> <m>` followed by `m` generator lines of images.
//! * `partitions <l>` followed by `l` lines `color | part | part ...`.

use std::fmt::Write;

use crate::graphcore::{BitMatrix, Digraph, Partition, RelStructure, Tournament};
use crate::permgroup::{PermGroup, Permutation};
use crate::widths::{ContractionSequence, DirectedPathDecomposition, DirectedTreeDecomposition, LinearOrder};
use crate::wl::PartitionSequence;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column, message: message.into() }
    }

    fn number(&self) -> Result<usize> {
        self.text.parse().map_err(|_| self.err(format!("expected a nonnegative integer, found `{}`", self.text)))
    }

    fn vertex(&self, n: usize) -> Result<usize> {
        let v = self.number()?;
        if v >= n {
            return Err(self.err(format!("vertex {v} out of range for n = {n}")));
        }
        Ok(v)
    }
}

struct Line<'a> {
    no: usize,
    raw: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.no, column: 1, message: message.into() }
    }

    fn end_err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.no, column: self.raw.len() + 1, message: message.into() }
    }

    fn expect_len(&self, k: usize) -> Result<()> {
        match self.tokens.get(k) {
            Some(t) => Err(t.err("unexpected extra token")),
            None if self.tokens.len() < k => Err(self.end_err(format!("expected {k} fields"))),
            None => Ok(()),
        }
    }

    fn pair(&self, n: usize) -> Result<(usize, usize)> {
        self.expect_len(2)?;
        Ok((self.tokens[0].vertex(n)?, self.tokens[1].vertex(n)?))
    }

    fn vertices(&self, from: usize, n: usize) -> Result<Vec<usize>> {
        self.tokens[from..].iter().map(|t| t.vertex(n)).collect()
    }
}

struct Reader<'a> {
    lines: Vec<Line<'a>>,
    at: usize,
    last_line: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        tokens.push(Token { text: &raw[s..j], line: i + 1, column: s + 1 });
                        start = None;
                    }
                    _ => {}
                }
            }
            lines.push(Line { no: i + 1, raw, tokens });
        }
        Reader { lines, at: 0, last_line }
    }

    fn next(&mut self, what: &str) -> Result<&Line<'a>> {
        match self.lines.get(self.at) {
            Some(_) => {
                self.at += 1;
                Ok(&self.lines[self.at - 1])
            }
            None => Err(Error::Parse { line: self.last_line + 1, column: 1, message: format!("expected {what}") }),
        }
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.at)
    }

    /// Header `keyword a b ...`; returns the numeric fields.
    fn header(&mut self, keyword: &str, fields: usize) -> Result<Vec<usize>> {
        let line = self.next(&format!("`{keyword}` header"))?;
        let head = line.tokens[0];
        if head.text != keyword {
            return Err(head.err(format!("expected `{keyword}`, found `{}`", head.text)));
        }
        line.expect_len(fields + 1)?;
        line.tokens[1..].iter().map(|t| t.number()).collect()
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(line) => Err(line.err("unexpected trailing content")),
            None => Ok(()),
        }
    }
}

fn join(xs: impl IntoIterator<Item = usize>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_tournament(text: &str) -> Result<Tournament> {
    let mut r = Reader::new(text);
    let n = r.header("tournament", 1)?[0];
    let mut rows: Vec<(usize, Vec<u8>)> = Vec::with_capacity(n);
    for i in 0..n {
        let line = r.next(&format!("matrix row {i}"))?;
        line.expect_len(1)?;
        let tok = line.tokens[0];
        let bytes = tok.text.as_bytes();
        if bytes.len() != n {
            return Err(tok.err(format!("row has {} characters, expected {n}", bytes.len())));
        }
        if let Some(j) = bytes.iter().position(|&b| b != b'0' && b != b'1') {
            return Err(Error::Parse { line: line.no, column: tok.column + j, message: "expected 0 or 1".into() });
        }
        rows.push((line.no, bytes.to_vec()));
    }
    r.finish()?;
    let mut m = BitMatrix::new(n);
    for (i, (no, row)) in rows.iter().enumerate() {
        let col = |j: usize| {
            let raw = r.lines.iter().find(|l| l.no == *no).unwrap();
            raw.tokens[0].column + j
        };
        for j in 0..n {
            let here = row[j] == b'1';
            if i == j && here {
                return Err(Error::Parse { line: *no, column: col(j), message: "diagonal entry must be 0".into() });
            }
            if i < j && here == (rows[j].1[i] == b'1') {
                return Err(Error::Parse {
                    line: *no,
                    column: col(j),
                    message: format!("entries ({i},{j}) and ({j},{i}) must differ"),
                });
            }
            m.set(i, j, here);
        }
    }
    Tournament::from_digraph(Digraph::from_matrix(m))
}

pub fn write_tournament(t: &Tournament) -> String {
    let n = t.n();
    let mut s = format!("tournament {n}\n");
    for i in 0..n {
        s.extend((0..n).map(|j| if t.has_edge(i, j) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

fn edge_lines(r: &mut Reader<'_>, m: usize, n: usize, what: &str) -> Result<Vec<(usize, usize)>> {
    (0..m).map(|i| r.next(&format!("{what} {i}"))?.pair(n)).collect()
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut r = Reader::new(text);
    let h = r.header("digraph", 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let line = r.next(&format!("edge {i}"))?;
        let (u, v) = line.pair(n)?;
        if u == v {
            return Err(line.tokens[1].err("loops are not allowed"));
        }
        edges.push((u, v));
    }
    r.finish()?;
    Digraph::from_edges(n, edges)
}

pub fn write_digraph(g: &Digraph) -> String {
    let mut s = format!("digraph {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Parses a tournament or digraph file, whichever the header says.
pub fn parse_any_digraph(text: &str) -> Result<Digraph> {
    let r = Reader::new(text);
    match r.peek().map(|l| l.tokens[0].text) {
        Some("tournament") => Ok(parse_tournament(text)?.digraph().clone()),
        _ => parse_digraph(text),
    }
}

pub fn parse_struct(text: &str) -> Result<RelStructure> {
    let mut r = Reader::new(text);
    let n = r.header("struct", 1)?[0];
    let mut a = RelStructure::new(n);
    while r.peek().is_some() {
        let line = r.next("section")?;
        let head = line.tokens[0];
        match head.text {
            "rel" => {
                line.expect_len(3)?;
                let name = line.tokens[1].text.to_string();
                let m = line.tokens[2].number()?;
                let head = line.tokens[1];
                let mut rel = BitMatrix::new(n);
                for (u, v) in edge_lines(&mut r, m, n, "relation pair")? {
                    rel.set(u, v, true);
                }
                a.add_relation(name, rel).map_err(|e| head.err(e.to_string()))?;
            }
            "red" => {
                line.expect_len(2)?;
                let m = line.tokens[1].number()?;
                for i in 0..m {
                    let l = r.next(&format!("red edge {i}"))?;
                    let (u, v) = l.pair(n)?;
                    let t = l.tokens[0];
                    a.add_red(u, v).map_err(|e| t.err(e.to_string()))?;
                }
            }
            other => return Err(head.err(format!("expected `rel` or `red`, found `{other}`"))),
        }
    }
    Ok(a)
}

pub fn write_struct(a: &RelStructure) -> String {
    let mut s = format!("struct {}\n", a.n());
    for (name, rel) in a.relations() {
        let _ = writeln!(s, "rel {name} {}", rel.count());
        for (u, v) in rel.pairs() {
            let _ = writeln!(s, "{u} {v}");
        }
    }
    let red = a.red_edges();
    if !red.is_empty() {
        let _ = writeln!(s, "red {}", red.len());
        for (u, v) in red {
            let _ = writeln!(s, "{u} {v}");
        }
    }
    s
}

pub fn parse_contractions(text: &str) -> Result<ContractionSequence> {
    let mut r = Reader::new(text);
    let n = r.header("contractions", 1)?[0];
    let merges = edge_lines(&mut r, n.saturating_sub(1), n, "merge")?;
    r.finish()?;
    ContractionSequence::new(n, merges).map_err(|e| match e {
        Error::Contraction { step, message } => {
            let line = r.lines.get(1 + step).map_or(1, |l| l.no);
            Error::Parse { line, column: 1, message }
        }
        e => e,
    })
}

pub fn write_contractions(seq: &ContractionSequence) -> String {
    let mut s = format!("contractions {}\n", seq.n());
    for (a, b) in seq.merges() {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

pub fn parse_order(text: &str) -> Result<LinearOrder> {
    let mut r = Reader::new(text);
    let n = r.header("order", 1)?[0];
    let seq = if n == 0 {
        Vec::new()
    } else {
        let line = r.next("vertex sequence")?;
        line.expect_len(n)?;
        let seq = line.vertices(0, n)?;
        let mut seen = vec![false; n];
        for (t, &v) in line.tokens.iter().zip(&seq) {
            if std::mem::replace(&mut seen[v], true) {
                return Err(t.err(format!("vertex {v} repeated")));
            }
        }
        seq
    };
    r.finish()?;
    LinearOrder::from_sequence(&seq)
}

pub fn write_order(ord: &LinearOrder) -> String {
    let seq = ord.sequence();
    if seq.is_empty() {
        return "order 0\n".into();
    }
    format!("order {}\n{}\n", seq.len(), join(seq))
}

/// An empty bag is written as `-`, since blank lines are skipped.
fn bag_tokens(line: &Line<'_>, from: usize, n: usize) -> Result<Vec<usize>> {
    if line.tokens.len() == from + 1 && line.tokens[from].text == "-" {
        return Ok(Vec::new());
    }
    line.vertices(from, n)
}

fn bag_text(b: &[usize]) -> String {
    if b.is_empty() {
        "-".into()
    } else {
        join(b.iter().copied())
    }
}

/// `n` is the vertex count of the decomposed digraph.
pub fn parse_dpd(text: &str, n: usize) -> Result<DirectedPathDecomposition> {
    let mut r = Reader::new(text);
    let p = r.header("dpd", 1)?[0];
    let mut bags = Vec::with_capacity(p);
    for i in 0..p {
        let line = r.next(&format!("bag {i}"))?;
        bags.push(bag_tokens(line, 0, n)?);
    }
    r.finish()?;
    DirectedPathDecomposition::new(n, bags)
}

pub fn write_dpd(d: &DirectedPathDecomposition) -> String {
    let mut s = format!("dpd {}\n", d.bags().len());
    for b in d.bags() {
        s.push_str(&bag_text(b));
        s.push('\n');
    }
    s
}

pub fn parse_dtd(text: &str, n: usize) -> Result<DirectedTreeDecomposition> {
    let mut r = Reader::new(text);
    let t = r.header("dtd", 1)?[0];
    if t == 0 {
        return Err(Error::Parse { line: 1, column: 5, message: "a tree needs at least one node".into() });
    }
    let mut parent = vec![None; t];
    for i in 0..t - 1 {
        let line = r.next(&format!("tree edge {i}"))?;
        let (p, c) = line.pair(t)?;
        if parent[c].replace(p).is_some() {
            return Err(line.tokens[1].err(format!("node {c} has two parents")));
        }
    }
    let mut bags = Vec::with_capacity(t);
    let mut guards = Vec::with_capacity(t);
    for i in 0..t {
        for (key, out) in [("bag", &mut bags), ("guard", &mut guards)] {
            let line = r.next(&format!("{key} of node {i}"))?;
            let head = line.tokens[0];
            if head.text != key {
                return Err(head.err(format!("expected `{key}`, found `{}`", head.text)));
            }
            out.push(if line.tokens.len() == 1 { Vec::new() } else { bag_tokens(line, 1, n)? });
        }
    }
    r.finish()?;
    DirectedTreeDecomposition::new(n, parent, bags, guards)
}

pub fn write_dtd(d: &DirectedTreeDecomposition) -> String {
    let mut s = format!("dtd {}\n", d.nodes());
    for t in 0..d.nodes() {
        if let Some(p) = d.parent(t) {
            let _ = writeln!(s, "{p} {t}");
        }
    }
    for t in 0..d.nodes() {
        let _ = writeln!(s, "bag {}", join(d.bag(t).iter().copied()));
        let _ = writeln!(s, "guard {}", join(d.guard(t).iter().copied()));
    }
    s.lines().map(|l| l.trim_end().to_string() + "\n").collect()
}

pub fn parse_group(text: &str) -> Result<PermGroup> {
    let mut r = Reader::new(text);
    let h = r.header("group", 2)?;
    let (degree, m) = (h[0], h[1]);
    let mut gens = Vec::with_capacity(m);
    for i in 0..m {
        let line = r.next(&format!("generator {i}"))?;
        if degree == 0 {
            line.expect_len(0)?;
        }
        line.expect_len(degree)?;
        let images = line.vertices(0, degree)?;
        gens.push(Permutation::from_images(images).map_err(|e| line.err(e.to_string()))?);
    }
    r.finish()?;
    PermGroup::new(degree, gens)
}

pub fn write_group(g: &PermGroup) -> String {
    let mut s = format!("group {} {}\n", g.degree(), g.generators().len());
    for p in g.generators() {
        let _ = writeln!(s, "{p}");
    }
    s
}

pub fn parse_partition_sequence(text: &str, n: usize) -> Result<PartitionSequence> {
    let mut r = Reader::new(text);
    let l = r.header("partitions", 1)?[0];
    let mut partitions = vec![Partition::discrete(n)];
    let mut colors = Vec::with_capacity(l);
    for i in 0..l {
        let line = r.next(&format!("level {}", i + 1))?;
        let bar: Vec<usize> = line.tokens.iter().enumerate().filter(|(_, t)| t.text == "|").map(|(j, _)| j).collect();
        if bar.first() != Some(&1) {
            return Err(line.err("expected `color | part | part ...`"));
        }
        let c = line.tokens[0].number()?;
        colors.push(u32::try_from(c).map_err(|_| line.tokens[0].err("color id too large"))?);
        let mut parts = Vec::new();
        let mut ends = bar.clone();
        ends.push(line.tokens.len());
        for w in ends.windows(2) {
            parts.push(line.tokens[w[0] + 1..w[1]].iter().map(|t| t.vertex(n)).collect::<Result<Vec<_>>>()?);
        }
        partitions.push(Partition::new(n, parts).map_err(|e| line.err(e.to_string()))?);
    }
    r.finish()?;
    Ok(PartitionSequence { partitions, colors })
}

pub fn write_partition_sequence(s: &PartitionSequence) -> String {
    let mut out = format!("partitions {}\n", s.len());
    for (c, q) in s.colors.iter().zip(&s.partitions[1..]) {
        let parts: Vec<String> = q.parts().iter().map(|p| join(p.iter().copied())).collect();
        let _ = writeln!(out, "{c} | {}", parts.join(" | "));
    }
    out
}
