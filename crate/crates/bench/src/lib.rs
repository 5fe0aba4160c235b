//! Fixed instances shared by the benchmarks.

use derand_core::{gen_graph, gen_hypergraph, lll_overlap_threshold, Graph, Hypergraph};

pub fn bounded_degree_graph(n: usize, d: usize) -> Graph {
    gen_graph(n, d, 1.0, 0x5eed)
}

/// k-uniform hypergraph at the overlap threshold for `k`.
pub fn lll_hypergraph(n: usize, k: usize, m: usize) -> Hypergraph {
    let cap = lll_overlap_threshold(k).max(0) as usize;
    gen_hypergraph(n, k, m, cap, 0x5eed)
        .expect("k <= n")
        .hypergraph
}
