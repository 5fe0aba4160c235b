//! Short-seed solutions for colorings whose existence follows from a
//! counting or local-lemma argument.
//!
//! A uniform random coloring of a graph with maximum degree `d` and `k >= 2d`
//! colors is proper with probability at least `2^(-2nd/k)`, so some seed of
//! about `2nd/k` bits decodes to a proper coloring. The same holds for valid
//! 2-colorings of k-uniform hypergraphs under the local-lemma overlap
//! condition with budget `4me/2^k`. This crate measures those budgets
//! directly: [`search`] finds the smallest splitmix64 seed whose decoding is
//! valid, [`lll`] checks the overlap condition and runs Moser-Tardos, and
//! [`game`] plays the repair game against a hidden hypergraph.
//!
//! The seed length stands in for description length. Additive terms with no
//! computable counterpart (the description of `n` and `k`, and information
//! shared with the halting problem) are not modeled.

pub mod bounds;
pub mod error;
pub mod estimate;
pub mod format;
pub mod game;
pub mod generate;
pub mod instance;
pub mod lll;
pub mod prng;
pub mod search;

pub use bounds::{
    graph_budget_bits, graph_neg_log2_prob, hyper_budget_bits, lll_overlap_threshold, BudgetReport,
    DEFAULT_SLACK_BITS,
};
pub use error::{Error, Result};
pub use estimate::{estimate_graph, estimate_hypergraph, EstimateReport, ExactCount};
pub use format::{
    instance_digest, parse_coloring, parse_graph, parse_hypergraph, parse_instance,
    serialize_coloring, serialize_graph, serialize_hypergraph, serialize_instance,
};
pub use game::{env_report, player_move, run_game, GameState, GameTranscript, Move, Player};
pub use generate::{gen_graph, gen_hypergraph, GeneratedHypergraph};
pub use instance::{is_proper, monochromatic_edges, Coloring, Graph, Hypergraph, Instance};
pub use lll::{check_condition, moser_tardos, solve_hyper_by_seed, LllReport, ResampleTrace};
pub use prng::{seed_to_coloring, Prng};
pub use search::{search_graph, search_hypergraph, SearchOptions, SeedCertificate};
