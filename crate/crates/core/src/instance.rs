//! Instances (graphs and uniform hypergraphs), colorings and the two
//! validity predicates everything else is measured against.

use serde::Serialize;

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Input(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in &normalized {
            degree[u] += 1;
            degree[v] += 1;
        }
        let max_degree = degree.into_iter().max().unwrap_or(0);
        Ok(Graph {
            n,
            edges: normalized,
            max_degree,
        })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            max_degree: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Maximum vertex degree, computed from the edge list at construction.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        degree
    }
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Each edge holds exactly `k` distinct vertices, sorted ascending. The edge
/// list keeps its construction order since edge indices are observable
/// (resampling picks the lowest violated index). Two edges may share the
/// same support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("edge size k must be at least 1".into()));
        }
        let mut out = Vec::new();
        for mut edge in edges {
            if edge.len() != k {
                return Err(Error::Input(format!(
                    "edge {:?} has {} vertices, expected {k}",
                    edge,
                    edge.len()
                )));
            }
            edge.sort_unstable();
            if let Some(&v) = edge.iter().find(|&&v| v >= n) {
                return Err(Error::Input(format!(
                    "vertex {v} out of range for {n} vertices"
                )));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("edge {edge:?} repeats a vertex")));
            }
            out.push(edge);
        }
        Ok(Hypergraph { n, k, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Same hypergraph with the edge list sorted lexicographically.
    pub fn canonical(&self) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.sort();
        Hypergraph {
            n: self.n,
            k: self.k,
            edges,
        }
    }

    /// For every vertex, the indices of the edges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, edge) in self.edges.iter().enumerate() {
            for &v in edge {
                inc[v].push(i);
            }
        }
        inc
    }
}

/// Assignment of a color in `1..=k_colors` to every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    colors: Vec<u32>,
    k_colors: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, k_colors: u32) -> Result<Self> {
        if k_colors == 0 {
            return Err(Error::Input(
                "palette must contain at least one color".into(),
            ));
        }
        if let Some((v, &c)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > k_colors)
        {
            return Err(Error::Input(format!(
                "vertex {v} has color {c}, outside 1..={k_colors}"
            )));
        }
        Ok(Coloring { colors, k_colors })
    }

    pub fn uniform(n: usize, color: u32, k_colors: u32) -> Result<Self> {
        Coloring::new(vec![color; n], k_colors)
    }

    pub(crate) fn from_raw(colors: Vec<u32>, k_colors: u32) -> Self {
        debug_assert!(colors.iter().all(|&c| (1..=k_colors).contains(&c)));
        Coloring { colors, k_colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn k_colors(&self) -> u32 {
        self.k_colors
    }

    pub fn get(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub(crate) fn set(&mut self, v: usize, color: u32) {
        debug_assert!((1..=self.k_colors).contains(&color));
        self.colors[v] = color;
    }
}

fn check_len(n: usize, c: &Coloring) -> Result<()> {
    if c.len() != n {
        return Err(Error::Input(format!(
            "coloring has {} entries but the instance has {n} vertices",
            c.len()
        )));
    }
    Ok(())
}

/// True iff no edge joins two vertices of the same color.
pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool> {
    check_len(g.n(), c)?;
    Ok(proper_unchecked(g, c.colors()))
}

pub(crate) fn proper_unchecked(g: &Graph, colors: &[u32]) -> bool {
    g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

/// Ascending indices of the edges whose vertices all share one color.
pub fn monochromatic_edges(h: &Hypergraph, c: &Coloring) -> Result<Vec<usize>> {
    check_len(h.n(), c)?;
    Ok(h.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| is_monochromatic(e, c.colors()))
        .map(|(i, _)| i)
        .collect())
}

pub(crate) fn is_monochromatic(edge: &[usize], colors: &[u32]) -> bool {
    match edge.split_first() {
        Some((&first, rest)) => rest.iter().all(|&v| colors[v] == colors[first]),
        None => true,
    }
}

pub(crate) fn two_colorable_unchecked(h: &Hypergraph, colors: &[u32]) -> bool {
    !h.edges().iter().any(|e| is_monochromatic(e, colors))
}

/// Either kind of instance, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(Graph),
    Hypergraph(Hypergraph),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Graph(g) => g.n(),
            Instance::Hypergraph(h) => h.n(),
        }
    }
}
