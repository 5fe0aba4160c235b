//! The local-lemma overlap condition for 2-coloring k-uniform hypergraphs,
//! and Moser-Tardos resampling as the constructive solver.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::bounds::{hyper_budget_bits, lll_overlap_threshold, seed_bits_for, DEFAULT_SLACK_BITS};
use crate::error::Result;
use crate::instance::{is_monochromatic, Coloring, Hypergraph};
use crate::prng::{decode_coloring, Prng};
use crate::search::{search_hypergraph, SearchOptions, SeedCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LllReport {
    pub threshold: i64,
    pub max_observed_overlap: usize,
    pub satisfied: bool,
    /// Entry `i` counts the other edges sharing a vertex with edge `i`.
    pub per_edge_overlaps: Vec<usize>,
}

/// Counts, for every edge, how many other edges it intersects, and compares
/// the maximum with [`lll_overlap_threshold`].
///
/// An edge is never counted as its own neighbor; a second edge with the
/// same support is.
pub fn check_condition(h: &Hypergraph) -> LllReport {
    let per_edge_overlaps = edge_overlaps(h);
    let threshold = lll_overlap_threshold(h.k());
    let max_observed_overlap = per_edge_overlaps.iter().copied().max().unwrap_or(0);
    LllReport {
        threshold,
        max_observed_overlap,
        satisfied: threshold >= 0 && max_observed_overlap as i64 <= threshold,
        per_edge_overlaps,
    }
}

fn edge_overlaps(h: &Hypergraph) -> Vec<usize> {
    let incidence = h.incidence();
    let mut mark = vec![usize::MAX; h.m()];
    h.edges()
        .iter()
        .enumerate()
        .map(|(i, edge)| {
            mark[i] = i;
            let mut count = 0;
            for &v in edge {
                for &j in &incidence[v] {
                    if mark[j] != i {
                        mark[j] = i;
                        count += 1;
                    }
                }
            }
            count
        })
        .collect()
}

pub fn default_cap(m: usize) -> usize {
    100 * m.max(1)
}

/// Ordered witness of a Moser-Tardos run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResampleTrace {
    pub m: usize,
    pub k: usize,
    pub rng_seed: u64,
    pub cap: usize,
    pub resampled_edges: Vec<usize>,
    pub final_coloring: Coloring,
    /// False when the cap ran out with monochromatic edges remaining.
    pub valid: bool,
}

impl ResampleTrace {
    pub fn resample_count(&self) -> usize {
        self.resampled_edges.len()
    }

    /// Header line, one line per resample, then a footer line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let header = json!({"m": self.m, "k": self.k, "seed": self.rng_seed, "cap": self.cap});
        let _ = writeln!(out, "{header}");
        for (i, edge) in self.resampled_edges.iter().enumerate() {
            let _ = writeln!(out, "{}", json!({"step": i + 1, "edge": edge}));
        }
        let footer = json!({"resamples": self.resample_count(), "valid": self.valid});
        let _ = writeln!(out, "{footer}");
        out
    }
}

/// Moser-Tardos resampling.
///
/// The start coloring is the seed's 2-color decoding; the same generator
/// stream then redraws every vertex of the lowest-index monochromatic edge
/// until none remain or `cap` resamples have been spent.
pub fn moser_tardos(h: &Hypergraph, rng_seed: u64, cap: usize) -> ResampleTrace {
    let mut prng = Prng::new(rng_seed);
    let mut coloring = decode_coloring(&mut prng, h.n(), 2);
    let incidence = h.incidence();
    let mut violated: BTreeSet<usize> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| is_monochromatic(e, coloring.colors()))
        .map(|(i, _)| i)
        .collect();
    let mut resampled_edges = Vec::new();

    while let Some(&edge) = violated.first() {
        if resampled_edges.len() >= cap {
            break;
        }
        resampled_edges.push(edge);
        for &v in &h.edges()[edge] {
            coloring.set(v, 1 + prng.below(2) as u32);
        }
        for &v in &h.edges()[edge] {
            for &j in &incidence[v] {
                if is_monochromatic(&h.edges()[j], coloring.colors()) {
                    violated.insert(j);
                } else {
                    violated.remove(&j);
                }
            }
        }
    }

    ResampleTrace {
        m: h.m(),
        k: h.k(),
        rng_seed,
        cap,
        resampled_edges,
        final_coloring: coloring,
        valid: violated.is_empty(),
    }
}

/// `ceil(4me/2^k) + slack`.
pub fn default_hyper_seed_bits(h: &Hypergraph, slack_bits: u32) -> u32 {
    seed_bits_for(hyper_budget_bits(h.m(), h.k()), slack_bits)
}

/// Seed search for a valid 2-coloring. With `seed_bits = None` the budget is
/// `ceil(4me/2^k) + 8`. The overlap condition is not required.
pub fn solve_hyper_by_seed(
    h: &Hypergraph,
    seed_bits: Option<u32>,
    options: &SearchOptions,
) -> Result<SeedCertificate> {
    let bits = seed_bits.unwrap_or_else(|| default_hyper_seed_bits(h, DEFAULT_SLACK_BITS));
    search_hypergraph(h, bits, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_hypergraph;
    use crate::instance::monochromatic_edges;

    fn disjoint(m: usize, k: usize) -> Hypergraph {
        Hypergraph::new(m * k, k, (0..m).map(|i| (i * k..(i + 1) * k).collect())).unwrap()
    }

    #[test]
    fn disjoint_edges_satisfy_condition() {
        let r = check_condition(&disjoint(4, 6));
        assert_eq!(r.per_edge_overlaps, vec![0; 4]);
        assert_eq!(r.threshold, 10);
        assert!(r.satisfied);
    }

    #[test]
    fn k2_never_satisfied() {
        let h = Hypergraph::new(2, 2, [vec![0, 1]]).unwrap();
        let r = check_condition(&h);
        assert_eq!(r.threshold, -1);
        assert!(!r.satisfied);
    }

    #[test]
    fn identical_supports_count_each_other() {
        let h = Hypergraph::new(4, 4, [vec![0, 1, 2, 3], vec![3, 2, 1, 0]]).unwrap();
        let r = check_condition(&h);
        assert_eq!(r.per_edge_overlaps, vec![1, 1]);
        assert_eq!(r.threshold, 1);
        assert!(r.satisfied);
    }

    #[test]
    fn edgeless_needs_no_resamples() {
        let h = Hypergraph::new(10, 3, []).unwrap();
        let t = moser_tardos(&h, 5, default_cap(0));
        assert!(t.valid);
        assert_eq!(t.resample_count(), 0);
    }

    #[test]
    fn single_edge_geometric_mean() {
        let h = Hypergraph::new(6, 6, [(0..6).collect()]).unwrap();
        let runs = 10_000u64;
        let mut total = 0usize;
        for seed in 0..runs {
            let t = moser_tardos(&h, seed, default_cap(1));
            assert!(t.valid);
            total += t.resample_count();
        }
        // Start is monochromatic w.p. 1/32 and each resample fails w.p.
        // 1/32, so the mean is (1/32) / (1 - 1/32) = 1/31.
        let mean = total as f64 / runs as f64;
        assert!(mean <= 1.0 / (1.0 - 2.0 / 64.0));
        let sd = (32.0f64 / (31.0 * 31.0) / runs as f64).sqrt();
        assert!((mean - 1.0 / 31.0).abs() < 5.0 * sd + 0.01, "mean = {mean}");
    }

    #[test]
    fn forced_all_ones_start_terminates() {
        // k = 1 edges are always monochromatic; the cap must stop the run.
        let h = Hypergraph::new(2, 1, [vec![0]]).unwrap();
        let t = moser_tardos(&h, 0, 7);
        assert!(!t.valid);
        assert_eq!(t.resample_count(), 7);
    }

    #[test]
    fn final_coloring_is_valid() {
        for seed in 0..30 {
            let h = gen_hypergraph(60, 6, 40, 10, seed).unwrap().hypergraph;
            let t = moser_tardos(&h, seed, default_cap(h.m()));
            assert!(t.valid);
            assert!(monochromatic_edges(&h, &t.final_coloring)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn deterministic_trace() {
        let h = gen_hypergraph(30, 4, 20, 1, 3).unwrap().hypergraph;
        let a = moser_tardos(&h, 17, 1000);
        let b = moser_tardos(&h, 17, 1000);
        assert_eq!(a, b);
        assert_eq!(a.to_json_lines(), b.to_json_lines());
    }

    #[test]
    fn trace_json_layout() {
        let h = Hypergraph::new(2, 1, [vec![0]]).unwrap();
        let t = moser_tardos(&h, 0, 2);
        assert_eq!(
            t.to_json_lines(),
            "{\"m\":1,\"k\":1,\"seed\":0,\"cap\":2}\n\
             {\"step\":1,\"edge\":0}\n\
             {\"step\":2,\"edge\":0}\n\
             {\"resamples\":2,\"valid\":false}\n"
        );
    }

    #[test]
    fn seed_solve_examples() {
        let empty = Hypergraph::new(3, 3, []).unwrap();
        let cert = solve_hyper_by_seed(&empty, Some(0), &SearchOptions::default()).unwrap();
        assert_eq!(cert.seed, Some(0));

        let h = disjoint(8, 6);
        assert_eq!(default_hyper_seed_bits(&h, 8), 10);
        let cert = solve_hyper_by_seed(&h, None, &SearchOptions::default()).unwrap();
        assert!(cert.found);
        assert_eq!(cert.seed_bits, 10);

        // Triangle as a 2-uniform hypergraph: condition fails, and no
        // 2-coloring exists, which the search reports.
        let tri = Hypergraph::new(3, 2, [vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!check_condition(&tri).satisfied);
        let cert = solve_hyper_by_seed(&tri, None, &SearchOptions::default()).unwrap();
        assert!(!cert.found);
    }
}
