//! Empirical and exact success probabilities of uniform random colorings,
//! compared against the proof's lower bounds.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{graph_neg_log2_prob, BudgetReport};
use crate::error::{Error, Result};
use crate::instance::{proper_unchecked, two_colorable_unchecked, Graph, Hypergraph};
use crate::lll::check_condition;
use crate::prng::{decode_into, derive_seed, Prng};

/// Exhaustive enumeration runs only when the assignment space has at most
/// `2^24` elements.
pub const EXACT_LIMIT_LOG2: f64 = 24.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactCount {
    pub valid: u64,
    pub total: u64,
}

impl ExactCount {
    pub fn probability(&self) -> f64 {
        self.valid as f64 / self.total as f64
    }
}

/// Number of proper `palette`-colorings of `g`, by depth-first enumeration
/// that abandons a partial assignment at its first conflict.
pub fn exact_graph_count(g: &Graph, palette: u32) -> Option<ExactCount> {
    if palette == 0 || g.n() as f64 * (palette as f64).log2() > EXACT_LIMIT_LOG2 {
        return None;
    }
    let n = g.n();
    let mut earlier: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        earlier[v].push(u);
    }
    let mut colors = vec![0u32; n];
    let valid = count_extensions(0, &earlier, palette, &mut colors);
    Some(ExactCount {
        valid,
        total: (palette as u64).pow(n as u32),
    })
}

fn count_extensions(v: usize, earlier: &[Vec<usize>], palette: u32, colors: &mut [u32]) -> u64 {
    if v == colors.len() {
        return 1;
    }
    let mut total = 0;
    for c in 1..=palette {
        if earlier[v].iter().all(|&u| colors[u] != c) {
            colors[v] = c;
            total += count_extensions(v + 1, earlier, palette, colors);
        }
    }
    total
}

/// Number of valid 2-colorings of `h` over all `2^n` assignments.
pub fn exact_hyper_count(h: &Hypergraph) -> Option<ExactCount> {
    if h.n() as f64 > EXACT_LIMIT_LOG2 {
        return None;
    }
    let masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |acc, &v| acc | (1 << v)))
        .collect();
    let total = 1u64 << h.n();
    let valid = (0..total as u32)
        .into_par_iter()
        .filter(|&x| masks.iter().all(|&mask| x & mask != 0 && x & mask != mask))
        .count() as u64;
    Some(ExactCount { valid, total })
}

/// `(1 - 2^(1-k))^m`, exact when the edges are pairwise disjoint.
pub fn disjoint_probability(m: usize, k: usize) -> f64 {
    (1.0 - 2f64.powi(1 - k as i32)).powi(m as i32)
}

/// Number of `trials` uniform colorings that are valid. Trial `i` decodes
/// from `derive_seed(rng_seed, i)`.
pub fn monte_carlo<F>(n: usize, palette: u32, trials: u64, rng_seed: u64, valid: F) -> u64
where
    F: Fn(&[u32]) -> bool + Sync,
{
    (0..trials)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, i| {
                let mut prng = Prng::new(derive_seed(rng_seed, i));
                decode_into(&mut prng, n, palette, buf);
                valid(buf) as u64
            },
        )
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub kind: &'static str,
    pub n: usize,
    pub m: usize,
    pub palette: u32,
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    pub exact: Option<f64>,
    pub exact_method: Option<&'static str>,
    /// Lower bound from the proof; 0 when none applies.
    pub lower_bound: f64,
    pub exact_at_least_bound: Option<bool>,
    pub frequency_at_least_bound: bool,
    /// `|frequency - exact| <= 4 sqrt(p(1-p)/trials)`.
    pub within_band: Option<bool>,
}

impl EstimateReport {
    /// True unless the exact value contradicts the lower bound.
    pub fn bound_holds(&self) -> bool {
        self.exact_at_least_bound != Some(false)
    }
}

fn finish(
    kind: &'static str,
    (n, m, palette): (usize, usize, u32),
    trials: u64,
    successes: u64,
    exact: Option<(f64, &'static str)>,
    lower_bound: f64,
) -> EstimateReport {
    let frequency = successes as f64 / trials as f64;
    let within_band = exact.map(|(p, _)| {
        let band = 4.0 * (p * (1.0 - p) / trials as f64).sqrt();
        (frequency - p).abs() <= band + 1e-12
    });
    EstimateReport {
        kind,
        n,
        m,
        palette,
        trials,
        successes,
        frequency,
        exact: exact.map(|(p, _)| p),
        exact_method: exact.map(|(_, how)| how),
        lower_bound,
        // Tolerance absorbs rounding in the closed forms.
        exact_at_least_bound: exact.map(|(p, _)| p >= lower_bound * (1.0 - 1e-12)),
        frequency_at_least_bound: frequency >= lower_bound,
        within_band,
    }
}

pub fn estimate_graph(
    g: &Graph,
    palette: u32,
    trials: u64,
    rng_seed: u64,
) -> Result<EstimateReport> {
    if trials == 0 || palette == 0 {
        return Err(Error::Precondition(
            "trials and palette must be at least 1".into(),
        ));
    }
    let successes = monte_carlo(g.n(), palette, trials, rng_seed, |c| proper_unchecked(g, c));
    let exact = exact_graph_count(g, palette).map(|c| (c.probability(), "enumeration"));
    let lower_bound = graph_neg_log2_prob(g.n(), g.max_degree(), palette as usize)
        .map(|bits| (-bits).exp2())
        .unwrap_or(0.0);
    Ok(finish(
        "graph",
        (g.n(), g.m(), palette),
        trials,
        successes,
        exact,
        lower_bound,
    ))
}

pub fn estimate_hypergraph(h: &Hypergraph, trials: u64, rng_seed: u64) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let successes = monte_carlo(h.n(), 2, trials, rng_seed, |c| {
        two_colorable_unchecked(h, c)
    });
    let exact = match exact_hyper_count(h) {
        Some(c) => Some((c.probability(), "enumeration")),
        None if check_condition(h).max_observed_overlap == 0 => {
            Some((disjoint_probability(h.m(), h.k()), "disjoint-closed-form"))
        }
        None => None,
    };
    let bits = BudgetReport::hypergraph(h, 0).exact_neg_log2_prob;
    Ok(finish(
        "hypergraph",
        (h.n(), h.m(), 2),
        trials,
        successes,
        exact,
        (-bits).exp2(),
    ))
}
