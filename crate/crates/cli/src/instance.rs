//! Instance file grammar: whitespace-separated tokens, `#` comments to end
//! of line, four header kinds.
//!
//! ```text
//! phi N        N rows of N values; diagonal meaningful; `*` marks an absent
//!              off-diagonal pair (in both mirror positions); values must be
//!              exactly symmetric
//! q N          N rows of N values; diagonal must be `*`; `*` marks an
//!              absent arc; rows are tails, columns are heads
//! ugraph N M   M edge lines `u v w`, then optional `d i x` lines assigning
//!              diagonal values (unassigned vertices default to 0)
//! digraph N M  M arc lines `u v w` with tail u and head v
//! ```
//!
//! Canonical form, as emitted by [`format_instance`]: potential systems as
//! `phi` matrices, directed graphs as `q` matrices, plain undirected graphs
//! as sorted `ugraph` edge lists. Parsing a canonical file and formatting the
//! result reproduces the file byte for byte.

use std::collections::HashSet;
use std::fmt;

use pmst_core::{DirectedGraph, PotentialSystem, UndirectedGraph, Weight};

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Potential(PotentialSystem),
    Undirected(UndirectedGraph),
    Directed(DirectedGraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut toks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                toks.push((i + 1, tok));
            }
        }
        Self { toks, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let t = self.toks.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.toks.get(self.pos).copied()
    }

    fn last_line(&self) -> usize {
        self.toks.last().map_or(1, |&(l, _)| l)
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        match self.next() {
            Some(t) => Ok(t),
            None => err(
                self.last_line(),
                format!("unexpected end of input, expected {what}"),
            ),
        }
    }

    fn expect_count(&mut self, what: &str) -> Result<usize, ParseError> {
        let (line, tok) = self.expect(what)?;
        match tok.parse::<usize>() {
            Ok(v) => Ok(v),
            Err(_) => err(line, format!("non-numeric token '{tok}', expected {what}")),
        }
    }

    fn expect_vertex(&mut self, n: usize, what: &str) -> Result<(usize, usize), ParseError> {
        let (line, tok) = self.expect(what)?;
        match tok.parse::<usize>() {
            Ok(v) if v < n => Ok((line, v)),
            Ok(v) => err(line, format!("vertex {v} outside [0, {n})")),
            Err(_) => err(line, format!("non-numeric token '{tok}', expected {what}")),
        }
    }

    fn expect_weight(&mut self, what: &str) -> Result<(usize, f64), ParseError> {
        let (line, tok) = self.expect(what)?;
        match parse_weight(tok) {
            Some(w) => Ok((line, w)),
            None => err(line, format!("non-numeric token '{tok}', expected {what}")),
        }
    }
}

fn parse_weight(tok: &str) -> Option<f64> {
    tok.parse::<f64>().ok().filter(|w| w.is_finite())
}

/// Parses one instance file.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut t = Tokens::new(text);
    let (line, kind) = t.expect("an instance kind (phi, q, ugraph, digraph)")?;
    let instance = match kind {
        "phi" => {
            let n = t.expect_count("the vertex count")?;
            parse_phi(&mut t, line, n)?
        }
        "q" => {
            let n = t.expect_count("the vertex count")?;
            parse_q(&mut t, line, n)?
        }
        "ugraph" => {
            let n = t.expect_count("the vertex count")?;
            let m = t.expect_count("the edge count")?;
            parse_ugraph(&mut t, line, n, m)?
        }
        "digraph" => {
            let n = t.expect_count("the vertex count")?;
            let m = t.expect_count("the arc count")?;
            parse_digraph(&mut t, line, n, m)?
        }
        other => return err(line, format!("unknown instance kind '{other}'")),
    };
    if let Some((line, tok)) = t.next() {
        return err(line, format!("trailing content '{tok}' after instance"));
    }
    Ok(instance)
}

#[derive(Clone, Copy)]
enum Cell {
    Value(f64, usize),
    Absent(usize),
}

fn parse_matrix(t: &mut Tokens, n: usize) -> Result<Vec<Cell>, ParseError> {
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (line, tok) = t.expect(&format!("matrix entry ({i}, {j})"))?;
            if tok == "*" {
                cells.push(Cell::Absent(line));
            } else {
                match parse_weight(tok) {
                    Some(w) => cells.push(Cell::Value(w, line)),
                    None => return err(line, format!("non-numeric token '{tok}' at ({i}, {j})")),
                }
            }
        }
    }
    Ok(cells)
}

fn parse_phi(t: &mut Tokens, header_line: usize, n: usize) -> Result<Instance, ParseError> {
    if n == 0 {
        return err(header_line, "vertex count must be at least 1");
    }
    let cells = parse_matrix(t, n)?;
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        match cells[i * n + i] {
            Cell::Value(w, _) => diag.push(w),
            Cell::Absent(line) => {
                return err(line, format!("diagonal entry ({i}, {i}) must be numeric"))
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            match (cells[i * n + j], cells[j * n + i]) {
                (Cell::Value(a, _), Cell::Value(b, line)) => {
                    if a != b {
                        return err(
                            line,
                            format!("asymmetric at ({i},{j})/({j},{i}): {a} vs {b}"),
                        );
                    }
                    edges.push((i, j, a));
                }
                (Cell::Absent(_), Cell::Absent(_)) => {}
                (Cell::Value(..), Cell::Absent(line)) | (Cell::Absent(_), Cell::Value(_, line)) => {
                    return err(
                        line,
                        format!("asymmetric at ({i},{j})/({j},{i}): one side is '*'"),
                    );
                }
            }
        }
    }
    match PotentialSystem::new(diag, edges) {
        Ok(phi) => Ok(Instance::Potential(phi)),
        Err(d) => err(header_line, d.to_string()),
    }
}

fn parse_q(t: &mut Tokens, header_line: usize, n: usize) -> Result<Instance, ParseError> {
    if n == 0 {
        return err(header_line, "vertex count must be at least 1");
    }
    let cells = parse_matrix(t, n)?;
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            match cells[i * n + j] {
                Cell::Value(w, line) => {
                    if i == j {
                        return err(line, format!("diagonal entry ({i}, {i}) must be '*'"));
                    }
                    arcs.push((i, j, w));
                }
                Cell::Absent(_) => {}
            }
        }
    }
    match DirectedGraph::new(n, arcs) {
        Ok(q) => Ok(Instance::Directed(q)),
        Err(d) => err(header_line, d.to_string()),
    }
}

fn parse_ugraph(
    t: &mut Tokens,
    header_line: usize,
    n: usize,
    m: usize,
) -> Result<Instance, ParseError> {
    if n == 0 {
        return err(header_line, "vertex count must be at least 1");
    }
    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    for _ in 0..m {
        let (line, u) = t.expect_vertex(n, "an edge endpoint")?;
        let (_, v) = t.expect_vertex(n, "an edge endpoint")?;
        let (_, w) = t.expect_weight("an edge weight")?;
        if u == v {
            return err(line, format!("self-loop edge ({u}, {v})"));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return err(line, format!("duplicate edge {{{u}, {v}}}"));
        }
        edges.push((u, v, w));
    }
    let mut diag = vec![0.0; n];
    let mut assigned = HashSet::new();
    let mut has_diag = false;
    while let Some((_, "d")) = t.peek() {
        t.next();
        let (line, i) = t.expect_vertex(n, "a diagonal vertex")?;
        let (_, x) = t.expect_weight("a diagonal value")?;
        if !assigned.insert(i) {
            return err(
                line,
                format!("duplicate diagonal assignment for vertex {i}"),
            );
        }
        diag[i] = x;
        has_diag = true;
    }
    if has_diag {
        match PotentialSystem::new(diag, edges) {
            Ok(phi) => Ok(Instance::Potential(phi)),
            Err(d) => err(header_line, d.to_string()),
        }
    } else {
        match UndirectedGraph::new(n, edges) {
            Ok(g) => Ok(Instance::Undirected(g)),
            Err(d) => err(header_line, d.to_string()),
        }
    }
}

fn parse_digraph(
    t: &mut Tokens,
    header_line: usize,
    n: usize,
    m: usize,
) -> Result<Instance, ParseError> {
    if n == 0 {
        return err(header_line, "vertex count must be at least 1");
    }
    let mut arcs = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    for _ in 0..m {
        let (line, u) = t.expect_vertex(n, "an arc tail")?;
        let (_, v) = t.expect_vertex(n, "an arc head")?;
        let (_, w) = t.expect_weight("an arc weight")?;
        if u == v {
            return err(line, format!("self-loop arc ({u}, {v})"));
        }
        if !seen.insert((u, v)) {
            return err(line, format!("duplicate arc ({u}, {v})"));
        }
        arcs.push((u, v, w));
    }
    match DirectedGraph::new(n, arcs) {
        Ok(g) => Ok(Instance::Directed(g)),
        Err(d) => err(header_line, d.to_string()),
    }
}

/// Weight formatting used everywhere in the output: integral values print
/// bare, everything else prints as the shortest decimal that parses back to
/// the same 64-bit float (the standard library display guarantees this).
pub fn fmt_weight(w: Weight) -> String {
    w.to_string()
}

/// Canonical text form of an instance; see the module header.
pub fn format_instance(instance: &Instance) -> String {
    match instance {
        Instance::Potential(phi) => format_phi(phi),
        Instance::Directed(q) => format_q(q),
        Instance::Undirected(g) => format_ugraph(g),
    }
}

fn format_phi(phi: &PotentialSystem) -> String {
    let n = phi.vertex_count();
    let mut out = format!("phi {n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                if i == j {
                    fmt_weight(phi.diagonal()[i])
                } else {
                    phi.off_diagonal(i, j)
                        .map_or_else(|| "*".to_string(), fmt_weight)
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn format_q(q: &DirectedGraph) -> String {
    let n = q.vertex_count();
    let mut out = format!("q {n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                if i == j {
                    "*".to_string()
                } else {
                    q.arc_weight(i, j)
                        .map_or_else(|| "*".to_string(), fmt_weight)
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn format_ugraph(g: &UndirectedGraph) -> String {
    let mut out = format!("ugraph {} {}\n", g.vertex_count(), g.edges().len());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, fmt_weight(e.weight)));
    }
    out
}
