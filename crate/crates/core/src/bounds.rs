//! Success-probability bounds and the seed budgets derived from them.
//! Everything is in bits (negative log2 probability), never raw
//! probabilities, so large `n` cannot underflow.

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Graph, Hypergraph};
use crate::lll::check_condition;

/// Extra bits searched beyond a budget. At a tight bound this leaves about
/// 2^8 expected successes in the enumerated range.
pub const DEFAULT_SLACK_BITS: u32 = 8;

/// `-n * log2(1 - d/k)`: bits lost to the chance that a uniform k-coloring
/// of a max-degree-`d` graph on `n` vertices is proper.
pub fn graph_neg_log2_prob(n: usize, d: usize, k: usize) -> Result<f64> {
    if d >= k {
        return Err(Error::Precondition(format!(
            "probability bound needs d < k (d = {d}, k = {k})"
        )));
    }
    Ok(n as f64 * ((k as f64).log2() - ((k - d) as f64).log2()))
}

/// `2nd/k`, valid as an upper bound on [`graph_neg_log2_prob`] when `2d <= k`.
pub fn graph_budget_bits(n: usize, d: usize, k: usize) -> Result<f64> {
    if k == 0 || 2 * d > k {
        return Err(Error::Precondition(format!(
            "graph budget needs 2d <= k and k >= 1 (d = {d}, k = {k})"
        )));
    }
    Ok((2 * n * d) as f64 / k as f64)
}

/// `4me/2^k`, the budget for a valid 2-coloring of a k-uniform hypergraph
/// with `m` edges under the local-lemma overlap condition.
pub fn hyper_budget_bits(m: usize, k: usize) -> f64 {
    4.0 * m as f64 * E / 2f64.powi(k as i32)
}

/// `floor(2^(k-1)/e - 1)`. Negative means no hypergraph with an edge can
/// meet the condition at this `k`.
pub fn lll_overlap_threshold(k: usize) -> i64 {
    (2f64.powi(k as i32 - 1) / E - 1.0).floor() as i64
}

/// `-m * log2(1 - e * 2^(1-k))`, the bound the local lemma product gives
/// directly (about `2.89 me/2^k`). Infinite when `e * 2^(1-k) >= 1`.
pub fn lll_product_bits(m: usize, k: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let x = E * 2f64.powi(1 - k as i32);
    if x >= 1.0 {
        return f64::INFINITY;
    }
    -(m as f64) * (1.0 - x).log2()
}

/// `-m * log2(1 - 2^(1-k))`: exact bits when all `m` edges are disjoint.
pub fn disjoint_neg_log2_prob(m: usize, k: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let p = 2f64.powi(1 - k as i32);
    if p >= 1.0 {
        return f64::INFINITY;
    }
    -(m as f64) * (1.0 - p).log2()
}

pub fn seed_bits_for(budget_bits: f64, slack_bits: u32) -> u32 {
    budget_bits.max(0.0).ceil() as u32 + slack_bits
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    /// Bits the proof actually needs; `+inf` (serialized as null) when no
    /// bound is available.
    pub exact_neg_log2_prob: f64,
    pub budget_bits: f64,
    pub seed_bits: u32,
    pub slack_bits: u32,
    /// Only set for hypergraphs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lll_product_bits: Option<f64>,
    pub precondition_holds: bool,
}

impl BudgetReport {
    /// Budget for a proper `k`-coloring. The degree is the graph's actual
    /// maximum degree.
    pub fn graph(g: &Graph, k: usize, slack_bits: u32) -> Result<Self> {
        let d = g.max_degree();
        let budget_bits = graph_budget_bits(g.n(), d, k)?;
        let exact_neg_log2_prob = graph_neg_log2_prob(g.n(), d, k).unwrap_or(f64::INFINITY);
        Ok(BudgetReport {
            exact_neg_log2_prob,
            budget_bits,
            seed_bits: seed_bits_for(budget_bits, slack_bits),
            slack_bits,
            lll_product_bits: None,
            precondition_holds: true,
        })
    }

    /// Budget for a valid 2-coloring. The budget is always `4me/2^k`; the
    /// proof bound is exact for disjoint edges, the local-lemma product when
    /// the overlap condition holds, and infinite otherwise.
    pub fn hypergraph(h: &Hypergraph, slack_bits: u32) -> Self {
        let (m, k) = (h.m(), h.k());
        let report = check_condition(h);
        let budget_bits = hyper_budget_bits(m, k);
        let exact_neg_log2_prob = if m == 0 {
            0.0
        } else if report.max_observed_overlap == 0 {
            disjoint_neg_log2_prob(m, k)
        } else if report.satisfied {
            lll_product_bits(m, k)
        } else {
            f64::INFINITY
        };
        BudgetReport {
            exact_neg_log2_prob,
            budget_bits,
            seed_bits: seed_bits_for(budget_bits, slack_bits),
            slack_bits,
            lll_product_bits: Some(lll_product_bits(m, k)),
            precondition_holds: report.satisfied || m == 0,
        }
    }
}
