//! DIMACS-style text formats. Vertices are 1-based on disk, 0-based in memory.
//!
//! ```text
//! p edge <n> <m>          p hedge <n> <m> <k>       s color <n> <k>
//! e <u> <v>               h <v1> ... <vk>           c <v> <color>
//! ```
//!
//! Graph files may open with `c ...` comment lines before the `p` line.
//! Blank lines are ignored everywhere. Serialization is canonical: edges
//! sorted, vertices within an edge sorted, colorings in vertex order.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{parse_err, Error, Result};
use crate::instance::{Coloring, Graph, Hypergraph, Instance};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }
}

impl<'a> Iterator for Lines<'a> {
    /// (1-based line number, whitespace-split tokens)
    type Item = (usize, Vec<&'a str>);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, line) in self.inner.by_ref() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }
}

fn number(line: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected {what}, found {token:?}")))
}

fn vertex(line: usize, token: &str, n: usize) -> Result<usize> {
    let v = number(line, token, "a vertex")?;
    if v == 0 || v > n {
        return Err(parse_err(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

/// Skips the graph-file comment preamble and returns the header line.
fn header<'a>(lines: &mut Lines<'a>, allow_comments: bool) -> Result<(usize, Vec<&'a str>)> {
    for (no, tokens) in lines.by_ref() {
        if allow_comments && tokens[0] == "c" {
            continue;
        }
        return Ok((no, tokens));
    }
    Err(parse_err(1, "missing header line"))
}

fn expect_count(found: usize, expected: usize, last_line: usize, what: &str) -> Result<()> {
    if found != expected {
        return Err(parse_err(
            last_line,
            format!("header declares {expected} {what}, found {found}"),
        ));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = Lines::new(text);
    let (hline, head) = header(&mut lines, true)?;
    if head.len() != 4 || head[0] != "p" || head[1] != "edge" {
        return Err(parse_err(hline, "expected header `p edge <n> <m>`"));
    }
    parse_graph_body(lines, hline, &head)
}

fn parse_graph_body(lines: Lines<'_>, hline: usize, head: &[&str]) -> Result<Graph> {
    let n = number(hline, head[2], "vertex count")?;
    let m = number(hline, head[3], "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last = hline;
    for (no, tokens) in lines {
        last = no;
        if tokens[0] != "e" || tokens.len() != 3 {
            return Err(parse_err(no, "expected `e <u> <v>`"));
        }
        let u = vertex(no, tokens[1], n)?;
        let v = vertex(no, tokens[2], n)?;
        if u == v {
            return Err(parse_err(no, format!("self-loop at vertex {}", u + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(no, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
        edges.push((u, v));
    }
    expect_count(edges.len(), m, last, "edges")?;
    Graph::new(n, edges).map_err(|e| parse_err(hline, e.to_string()))
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = Lines::new(text);
    let (hline, head) = header(&mut lines, false)?;
    if head.len() != 5 || head[0] != "p" || head[1] != "hedge" {
        return Err(parse_err(hline, "expected header `p hedge <n> <m> <k>`"));
    }
    parse_hypergraph_body(lines, hline, &head)
}

fn parse_hypergraph_body(lines: Lines<'_>, hline: usize, head: &[&str]) -> Result<Hypergraph> {
    let n = number(hline, head[2], "vertex count")?;
    let m = number(hline, head[3], "edge count")?;
    let k = number(hline, head[4], "edge size")?;
    if k == 0 {
        return Err(parse_err(hline, "edge size must be at least 1"));
    }
    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for (no, tokens) in lines {
        last = no;
        if tokens[0] != "h" {
            return Err(parse_err(no, "expected `h <v1> ... <vk>`"));
        }
        if tokens.len() - 1 != k {
            return Err(parse_err(
                no,
                format!("edge has {} vertices, expected {k}", tokens.len() - 1),
            ));
        }
        let mut edge = tokens[1..]
            .iter()
            .map(|t| vertex(no, t, n))
            .collect::<Result<Vec<_>>>()?;
        edge.sort_unstable();
        if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_err(no, format!("duplicate vertex {}", w[0] + 1)));
        }
        edges.push(edge);
    }
    expect_count(edges.len(), m, last, "edges")?;
    Hypergraph::new(n, k, edges).map_err(|e| parse_err(hline, e.to_string()))
}

/// Reads either instance kind, dispatching on the header.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (hline, head) = header(&mut lines, true)?;
    match head.get(..2) {
        Some(["p", "edge"]) if head.len() == 4 => {
            parse_graph_body(lines, hline, &head).map(Instance::Graph)
        }
        Some(["p", "hedge"]) if head.len() == 5 => {
            // Comments are a graph-only affordance.
            if text.lines().take(hline - 1).any(|l| !l.trim().is_empty()) {
                return Err(parse_err(
                    1,
                    "comment lines are not allowed in hypergraph files",
                ));
            }
            parse_hypergraph_body(lines, hline, &head).map(Instance::Hypergraph)
        }
        _ => Err(parse_err(
            hline,
            "expected `p edge <n> <m>` or `p hedge <n> <m> <k>`",
        )),
    }
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let mut lines = Lines::new(text);
    let (hline, head) = header(&mut lines, false)?;
    if head.len() != 4 || head[0] != "s" || head[1] != "color" {
        return Err(parse_err(hline, "expected header `s color <n> <k>`"));
    }
    let n = number(hline, head[2], "vertex count")?;
    let k = number(hline, head[3], "palette size")?;
    let k = u32::try_from(k)
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| parse_err(hline, "palette size must be in 1..=2^32-1"))?;
    let mut colors: Vec<Option<u32>> = vec![None; n];
    let mut last = hline;
    for (no, tokens) in lines {
        last = no;
        if tokens[0] != "c" || tokens.len() != 3 {
            return Err(parse_err(no, "expected `c <v> <color>`"));
        }
        let v = vertex(no, tokens[1], n)?;
        let color = number(no, tokens[2], "a color")?;
        if color == 0 || color > k as usize {
            return Err(parse_err(no, format!("color {color} out of range 1..={k}")));
        }
        if colors[v].replace(color as u32).is_some() {
            return Err(parse_err(no, format!("vertex {} colored twice", v + 1)));
        }
    }
    let colors = colors
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| parse_err(last, format!("vertex {} has no color", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    Coloring::new(colors, k).map_err(|e| parse_err(hline, e.to_string()))
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let canonical = h.canonical();
    let mut out = format!("p hedge {} {} {}\n", h.n(), h.m(), h.k());
    for edge in canonical.edges() {
        out.push('h');
        for &v in edge {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

pub fn serialize_instance(instance: &Instance) -> String {
    match instance {
        Instance::Graph(g) => serialize_graph(g),
        Instance::Hypergraph(h) => serialize_hypergraph(h),
    }
}

pub fn serialize_coloring(c: &Coloring) -> String {
    let mut out = format!("s color {} {}\n", c.len(), c.k_colors());
    for (v, color) in c.colors().iter().enumerate() {
        let _ = writeln!(out, "c {} {}", v + 1, color);
    }
    out
}

/// Lowercase hex SHA-256 of the canonical serialization.
pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn graph_digest(g: &Graph) -> String {
    digest_bytes(serialize_graph(g).as_bytes())
}

pub fn hypergraph_digest(h: &Hypergraph) -> String {
    digest_bytes(serialize_hypergraph(h).as_bytes())
}

pub fn instance_digest(instance: &Instance) -> String {
    digest_bytes(serialize_instance(instance).as_bytes())
}

impl std::str::FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

impl std::str::FromStr for Hypergraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_hypergraph(s)
    }
}

impl std::str::FromStr for Coloring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_coloring(s)
    }
}
