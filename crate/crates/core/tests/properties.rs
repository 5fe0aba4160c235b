use std::collections::HashSet;

use derand_core::format::{graph_digest, hypergraph_digest};
use derand_core::{
    check_condition, gen_graph, gen_hypergraph, is_proper, monochromatic_edges, moser_tardos,
    parse_coloring, parse_graph, parse_hypergraph, search_graph, search_hypergraph,
    seed_to_coloring, serialize_coloring, serialize_graph, serialize_hypergraph, Coloring, Graph,
    Hypergraph, SearchOptions,
};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..14).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..30).prop_map(move |pairs| {
            let set: HashSet<(usize, usize)> = pairs
                .into_iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            Graph::new(n, set).unwrap()
        })
    })
}

fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (1usize..5, 0usize..12).prop_flat_map(|(k, extra)| {
        let n = k + extra;
        proptest::collection::vec(
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k),
            0..15,
        )
        .prop_map(move |edges| Hypergraph::new(n, k, edges).unwrap())
    })
}

fn arb_coloring(n: usize, k: u32) -> impl Strategy<Value = Coloring> {
    proptest::collection::vec(1..=k, n).prop_map(move |c| Coloring::new(c, k).unwrap())
}

/// Adjacency-matrix scan over every vertex pair.
fn proper_by_matrix(g: &Graph, c: &Coloring) -> bool {
    let n = g.n();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    (0..n).all(|u| (0..n).all(|v| !adj[u][v] || c.get(u) != c.get(v)))
}

/// Quadratic pairwise intersection count.
fn brute_overlaps(h: &Hypergraph) -> Vec<usize> {
    let sets: Vec<HashSet<usize>> = h
        .edges()
        .iter()
        .map(|e| e.iter().copied().collect())
        .collect();
    (0..sets.len())
        .map(|i| {
            (0..sets.len())
                .filter(|&j| j != i && !sets[i].is_disjoint(&sets[j]))
                .count()
        })
        .collect()
}

proptest! {
    #[test]
    fn is_proper_matches_matrix_scan(
        (g, c) in arb_graph().prop_flat_map(|g| { let n = g.n(); (Just(g), arb_coloring(n, 3)) })
    ) {
        prop_assert_eq!(is_proper(&g, &c).unwrap(), proper_by_matrix(&g, &c));
    }

    #[test]
    fn monochromatic_list_is_sorted_unique_and_exact(
        (h, c) in arb_hypergraph().prop_flat_map(|h| { let n = h.n(); (Just(h), arb_coloring(n, 2)) })
    ) {
        let mono = monochromatic_edges(&h, &c).unwrap();
        prop_assert!(mono.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(mono.iter().all(|&i| i < h.m()));
        let expected: Vec<usize> = h.edges().iter().enumerate()
            .filter(|(_, e)| e.iter().map(|&v| c.get(v)).collect::<HashSet<_>>().len() == 1)
            .map(|(i, _)| i)
            .collect();
        prop_assert_eq!(mono, expected);
    }

    #[test]
    fn graph_round_trip(g in arb_graph()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn hypergraph_round_trip(h in arb_hypergraph()) {
        let text = serialize_hypergraph(&h);
        let back = parse_hypergraph(&text).unwrap();
        prop_assert_eq!(&back, &h.canonical());
        prop_assert_eq!(serialize_hypergraph(&back), text);
    }

    #[test]
    fn coloring_round_trip(c in (0usize..30).prop_flat_map(|n| arb_coloring(n, 5))) {
        let text = serialize_coloring(&c);
        prop_assert_eq!(parse_coloring(&text).unwrap(), c);
    }

    #[test]
    fn generators_are_pure(n in 2usize..60, d in 0usize..6, density in 0.0f64..1.0, seed: u64) {
        let a = serialize_graph(&gen_graph(n, d, density, seed));
        let b = serialize_graph(&gen_graph(n, d, density, seed));
        prop_assert_eq!(a, b);
        let g = gen_graph(n, d, density, seed);
        prop_assert!(g.max_degree() <= d);
    }

    #[test]
    fn gen_hypergraph_passes_pairwise_audit(
        k in 1usize..7, extra in 0usize..40, m in 0usize..40, cap in 0usize..12, seed: u64
    ) {
        let n = k + extra;
        let out = gen_hypergraph(n, k, m, cap, seed).unwrap();
        prop_assert!(out.hypergraph.m() <= m);
        prop_assert!(brute_overlaps(&out.hypergraph).iter().all(|&o| o <= cap));
        let again = gen_hypergraph(n, k, m, cap, seed).unwrap();
        prop_assert_eq!(hypergraph_digest(&out.hypergraph), hypergraph_digest(&again.hypergraph));
    }

    #[test]
    fn check_condition_matches_brute_force(h in arb_hypergraph()) {
        let report = check_condition(&h);
        let brute = brute_overlaps(&h);
        prop_assert_eq!(&report.per_edge_overlaps, &brute);
        let max = brute.iter().copied().max().unwrap_or(0);
        prop_assert_eq!(report.max_observed_overlap, max);
        prop_assert_eq!(report.satisfied, report.threshold >= 0 && max as i64 <= report.threshold);
    }

    #[test]
    fn sharded_search_equals_sequential(g in arb_graph(), palette in 1u32..5, bits in 0u32..14) {
        let seq = search_graph(&g, palette, bits, &SearchOptions::default()).unwrap();
        let par = search_graph(&g, palette, bits, &SearchOptions::parallel()).unwrap();
        prop_assert_eq!(&seq, &par);
        if let Some(seed) = seq.seed {
            prop_assert!(seed < 1 << bits);
            prop_assert_eq!(seq.tested, seed + 1);
            prop_assert!(is_proper(&g, &seed_to_coloring(seed, g.n(), palette).unwrap()).unwrap());
            for s in 0..seed {
                prop_assert!(!proper_by_matrix(&g, &seed_to_coloring(s, g.n(), palette).unwrap()));
            }
        } else {
            prop_assert_eq!(seq.tested, 1 << bits);
        }
        prop_assert_eq!(seq.digest, graph_digest(&g));
    }

    #[test]
    fn hypergraph_certificates_verify(h in arb_hypergraph(), bits in 0u32..12) {
        let cert = search_hypergraph(&h, bits, &SearchOptions::parallel()).unwrap();
        if let Some(seed) = cert.seed {
            let c = seed_to_coloring(seed, h.n(), 2).unwrap();
            prop_assert!(monochromatic_edges(&h, &c).unwrap().is_empty());
        }
    }

    #[test]
    fn moser_tardos_is_deterministic_and_valid(seed: u64, inst in 0u64..1000) {
        let h = gen_hypergraph(80, 6, 60, 10, inst).unwrap().hypergraph;
        let a = moser_tardos(&h, seed, 6000);
        prop_assert_eq!(a.to_json_lines(), moser_tardos(&h, seed, 6000).to_json_lines());
        prop_assert_eq!(a.resample_count(), a.resampled_edges.len());
        if a.valid {
            prop_assert!(monochromatic_edges(&h, &a.final_coloring).unwrap().is_empty());
        }
    }
}
