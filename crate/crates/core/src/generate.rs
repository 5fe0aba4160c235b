//! Seeded instance generators. Every draw comes from [`Prng`], so outputs
//! are a pure function of the arguments.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::instance::{Graph, Hypergraph};
use crate::prng::Prng;

/// Rejected draws allowed per requested hyperedge before giving up.
pub const HYPER_RETRY_FACTOR: usize = 1000;

/// Random graph with maximum degree at most `d`.
///
/// Makes `round(density * n(n-1)/2)` attempts. Each attempt draws two
/// endpoints and keeps the edge only if it is new, not a loop, and both
/// endpoints still have degree below `d`. A cap `d >= n` behaves as `n - 1`.
pub fn gen_graph(n: usize, d: usize, density: f64, rng_seed: u64) -> Graph {
    if n < 2 || d == 0 || density.is_nan() || density <= 0.0 {
        return Graph::edgeless(n);
    }
    let pairs = n * (n - 1) / 2;
    let attempts = (density.min(1.0) * pairs as f64).round() as usize;
    let mut prng = Prng::new(rng_seed);
    let mut degree = vec![0usize; n];
    let mut seen = HashSet::new();
    for _ in 0..attempts {
        let u = prng.below(n as u64) as usize;
        let v = prng.below(n as u64) as usize;
        if u == v || degree[u] >= d || degree[v] >= d {
            continue;
        }
        if seen.insert((u.min(v), u.max(v))) {
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    Graph::new(n, seen).expect("generator only emits simple edges")
}

/// Outcome of [`gen_hypergraph`]; `hypergraph.m()` may fall short of
/// `requested_m` when the retry budget runs out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedHypergraph {
    pub hypergraph: Hypergraph,
    pub requested_m: usize,
    pub rejected_draws: usize,
}

impl GeneratedHypergraph {
    pub fn truncated(&self) -> bool {
        self.hypergraph.m() < self.requested_m
    }
}

/// Random k-uniform hypergraph where every edge meets at most
/// `max_overlap` other edges.
///
/// Candidate edges are uniform k-subsets. A candidate is rejected if it
/// would meet more than `max_overlap` accepted edges, or push any accepted
/// edge past that count. After `1000 * m` rejections the edges accepted so
/// far are returned. The edge list is sorted lexicographically.
pub fn gen_hypergraph(
    n: usize,
    k: usize,
    m: usize,
    max_overlap: usize,
    rng_seed: u64,
) -> Result<GeneratedHypergraph> {
    if k == 0 || k > n {
        return Err(Error::Precondition(format!(
            "edge size k = {k} must satisfy 1 <= k <= n = {n}"
        )));
    }
    let mut prng = Prng::new(rng_seed);
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut overlaps: Vec<usize> = Vec::with_capacity(m);
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pool: Vec<usize> = (0..n).collect();
    let mut mark = vec![usize::MAX; m];
    let mut hit = Vec::new();
    let mut rejected = 0usize;
    let retry_budget = HYPER_RETRY_FACTOR.saturating_mul(m);

    while edges.len() < m && rejected < retry_budget {
        let candidate = random_subset(&mut prng, &mut pool, k);
        let id = edges.len();
        hit.clear();
        for &v in &candidate {
            for &j in &incidence[v] {
                if mark[j] != id {
                    mark[j] = id;
                    hit.push(j);
                }
            }
        }
        let ok = hit.len() <= max_overlap && hit.iter().all(|&j| overlaps[j] < max_overlap);
        if !ok {
            rejected += 1;
            // Reset marks so the next candidate (same id) starts clean.
            for &j in &hit {
                mark[j] = usize::MAX;
            }
            continue;
        }
        for &j in &hit {
            overlaps[j] += 1;
        }
        overlaps.push(hit.len());
        for &v in &candidate {
            incidence[v].push(id);
        }
        edges.push(candidate);
    }

    edges.sort();
    Ok(GeneratedHypergraph {
        hypergraph: Hypergraph::new(n, k, edges)?,
        requested_m: m,
        rejected_draws: rejected,
    })
}

/// Uniform k-subset via a partial Fisher-Yates shuffle of `pool`.
fn random_subset(prng: &mut Prng, pool: &mut [usize], k: usize) -> Vec<usize> {
    let n = pool.len();
    for i in 0..k {
        let j = i + prng.below((n - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut subset = pool[..k].to_vec();
    subset.sort_unstable();
    subset
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairwise_overlaps(h: &Hypergraph) -> Vec<usize> {
        let edges = h.edges();
        (0..edges.len())
            .map(|i| {
                (0..edges.len())
                    .filter(|&j| j != i && edges[i].iter().any(|v| edges[j].contains(v)))
                    .count()
            })
            .collect()
    }

    #[test]
    fn degree_cap_zero_gives_isolated_vertices() {
        for seed in 0..5 {
            let g = gen_graph(5, 0, 1.0, seed);
            assert_eq!(g.n(), 5);
            assert_eq!(g.m(), 0);
        }
    }

    #[test]
    fn graph_respects_degree_cap() {
        let g = gen_graph(10, 3, 1.0, 1);
        assert!(g.max_degree() <= 3);
        assert!(g.m() > 0);
        for seed in 0..50 {
            let g = gen_graph(30, 4, 0.7, seed);
            assert!(g.max_degree() <= 4);
        }
    }

    #[test]
    fn graph_generation_is_deterministic() {
        assert_eq!(gen_graph(10, 3, 1.0, 1), gen_graph(10, 3, 1.0, 1));
        assert_ne!(gen_graph(40, 3, 1.0, 1), gen_graph(40, 3, 1.0, 2));
    }

    #[test]
    fn oversized_cap_is_clamped() {
        let g = gen_graph(4, 10, 1.0, 3);
        assert!(g.max_degree() <= 3);
    }

    #[test]
    fn disjoint_hyperedges() {
        // A fourth disjoint edge would have to hit the last six free
        // vertices exactly (odds 1 in C(24,6)), so the retry budget runs
        // out and the short output is reported.
        let out = gen_hypergraph(24, 6, 4, 0, 1).unwrap();
        let h = &out.hypergraph;
        assert_eq!(h.m(), 3);
        assert!(out.truncated());
        assert!(pairwise_overlaps(h).iter().all(|&o| o == 0));

        let roomy = gen_hypergraph(60, 6, 4, 0, 1).unwrap();
        assert_eq!(roomy.hypergraph.m(), 4);
        assert!(!roomy.truncated());
        assert!(pairwise_overlaps(&roomy.hypergraph).iter().all(|&o| o == 0));
    }

    #[test]
    fn edge_size_larger_than_n_is_rejected() {
        assert!(matches!(
            gen_hypergraph(3, 4, 1, 0, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hypergraph_generation_is_deterministic() {
        assert_eq!(
            gen_hypergraph(50, 5, 20, 4, 9).unwrap(),
            gen_hypergraph(50, 5, 20, 4, 9).unwrap()
        );
    }

    #[test]
    fn truncation_is_reported() {
        // Only two disjoint 3-subsets fit in 7 vertices.
        let out = gen_hypergraph(7, 3, 5, 0, 11).unwrap();
        assert!(out.truncated());
        assert!(out.hypergraph.m() <= 2);
        assert_eq!(out.rejected_draws, 5000);
    }

    #[test]
    fn overlap_audit() {
        for seed in 0..20 {
            let out = gen_hypergraph(40, 4, 30, 3, seed).unwrap();
            assert!(pairwise_overlaps(&out.hypergraph).iter().all(|&o| o <= 3));
        }
    }
}
