//! Command-line experiments: instance generation, budgets, seed search,
//! Moser-Tardos and the repair game.
//!
//! Every run is a pure function of its [`RunConfig`]. Reports are JSON lines
//! whose first line embeds the config and the instance digest; a human
//! summary goes to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use derand_core::bounds::{hyper_budget_bits, lll_product_bits, seed_bits_for};
use derand_core::game::default_hard_cap;
use derand_core::lll::default_cap;
use derand_core::prng::derive_seed;
use derand_core::search::DEFAULT_MAX_SEED_BITS;
use derand_core::{
    check_condition, estimate_graph, estimate_hypergraph, gen_graph, gen_hypergraph,
    instance_digest, lll_overlap_threshold, moser_tardos, parse_instance, run_game, search_graph,
    search_hypergraph, seed_to_coloring, serialize_coloring, serialize_graph, serialize_hypergraph,
    BudgetReport, Graph, Hypergraph, Instance, SearchOptions, DEFAULT_SLACK_BITS,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] derand_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Instance {
        path: PathBuf,
        source: derand_core::Error,
    },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "derand",
    version,
    about = "Short-seed colorings and local-lemma experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Bits searched beyond the budget.
    #[arg(long, global = true, default_value_t = DEFAULT_SLACK_BITS)]
    pub slack_bits: u32,

    #[arg(long, global = true, default_value_t = 0.5)]
    pub epsilon: f64,

    /// Trials (default 10000 for estimate, 1 for play).
    #[arg(long, global = true)]
    pub trials: Option<u64>,

    /// Seed bits to search, or `auto` for the formula budget plus slack.
    #[arg(long, global = true, default_value = "auto")]
    pub budget: Budget,

    /// Resample cap for `mt`, turn cap for `play`.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Refuse searches larger than 2^max_seed_bits seeds.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SEED_BITS)]
    pub max_seed_bits: u32,

    /// Write the report (or instance) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Budget {
    #[serde(serialize_with = "auto_str")]
    Auto,
    Bits(u32),
}

fn auto_str<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("auto")
}

impl std::str::FromStr for Budget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Budget::Auto);
        }
        s.parse()
            .map(Budget::Bits)
            .map_err(|_| format!("expected `auto` or a bit count, found {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Overlap {
    #[serde(serialize_with = "auto_str")]
    Auto,
    Count(usize),
}

impl std::str::FromStr for Overlap {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Overlap::Auto);
        }
        s.parse()
            .map(Overlap::Count)
            .map_err(|_| format!("expected `auto` or a count, found {s:?}"))
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Random graph with bounded maximum degree.
    GenGraph(GenGraphArgs),
    /// Random k-uniform hypergraph with bounded edge overlap.
    GenHyper(GenHyperArgs),
    /// Probability bounds and seed budget for an instance.
    Bounds(InstanceArgs),
    /// Smallest seed decoding to a proper coloring.
    SolveGraph(SolveArgs),
    /// Smallest seed decoding to a valid hypergraph 2-coloring.
    SolveHyper(SolveArgs),
    /// Moser-Tardos resampling trace.
    Mt(SolveArgs),
    /// Play the repair game with the resampling player.
    Play(InstanceArgs),
    /// Monte Carlo and exact success probability of uniform colorings.
    Estimate(InstanceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenGraphArgs {
    #[arg(long)]
    pub n: usize,
    /// Degree cap.
    #[arg(long)]
    pub d: usize,
    /// Fraction of all vertex pairs to attempt.
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GenHyperArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub m: usize,
    /// Maximum number of other edges any edge may meet, or `auto` for the
    /// local-lemma threshold at this k.
    #[arg(long, default_value = "auto")]
    pub max_overlap: Overlap,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    pub instance: PathBuf,
    /// Palette size (graphs only).
    #[arg(long)]
    pub palette: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Palette size (graphs only).
    #[arg(long)]
    pub palette: Option<u32>,
    /// Also write the solution coloring to this file.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub seed: u64,
    pub slack_bits: u32,
    pub epsilon: f64,
    pub trials: u64,
    pub budget: Budget,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    pub max_seed_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub palette: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_overlap: Option<Overlap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let path = |p: &Path| Some(p.display().to_string());
        let mut config = RunConfig {
            subcommand: "",
            instance: None,
            seed: cli.seed,
            slack_bits: cli.slack_bits,
            epsilon: cli.epsilon,
            trials: cli.trials.unwrap_or(1),
            budget: cli.budget,
            cap: cli.cap,
            max_seed_bits: cli.max_seed_bits,
            palette: None,
            n: None,
            d: None,
            density: None,
            k: None,
            m: None,
            max_overlap: None,
            out: cli.out.as_deref().and_then(path),
        };
        match &cli.command {
            Command::GenGraph(a) => {
                config.subcommand = "gen-graph";
                config.n = Some(a.n);
                config.d = Some(a.d);
                config.density = Some(a.density);
            }
            Command::GenHyper(a) => {
                config.subcommand = "gen-hyper";
                config.n = Some(a.n);
                config.k = Some(a.k);
                config.m = Some(a.m);
                config.max_overlap = Some(a.max_overlap);
            }
            Command::Bounds(a) | Command::Play(a) | Command::Estimate(a) => {
                config.subcommand = match cli.command {
                    Command::Bounds(_) => "bounds",
                    Command::Play(_) => "play",
                    _ => "estimate",
                };
                config.instance = path(&a.instance);
                config.palette = a.palette;
                if matches!(cli.command, Command::Estimate(_)) {
                    config.trials = cli.trials.unwrap_or(10_000);
                }
            }
            Command::SolveGraph(a) | Command::SolveHyper(a) | Command::Mt(a) => {
                config.subcommand = match cli.command {
                    Command::SolveGraph(_) => "solve-graph",
                    Command::SolveHyper(_) => "solve-hyper",
                    _ => "mt",
                };
                config.instance = path(&a.instance);
                config.palette = a.palette;
            }
        }
        config
    }
}

/// Exit status: 0 success, 1 not found or bound violated. Input errors are
/// reported as `Err` and map to 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Failed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failed => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Report (or generated instance) bytes.
    pub report: String,
    /// Human-readable summary.
    pub summary: String,
    pub status: Status,
    /// Extra files to write: (path, contents).
    pub files: Vec<(PathBuf, String)>,
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text).map_err(|source| CliError::Instance {
        path: path.to_path_buf(),
        source,
    })
}

fn expect_graph(instance: Instance, path: &Path) -> Result<Graph, CliError> {
    match instance {
        Instance::Graph(g) => Ok(g),
        Instance::Hypergraph(_) => Err(CliError::Usage(format!(
            "{}: expected a graph (`p edge`), found a hypergraph",
            path.display()
        ))),
    }
}

fn expect_hypergraph(instance: Instance, path: &Path) -> Result<Hypergraph, CliError> {
    match instance {
        Instance::Hypergraph(h) => Ok(h),
        Instance::Graph(_) => Err(CliError::Usage(format!(
            "{}: expected a hypergraph (`p hedge`), found a graph",
            path.display()
        ))),
    }
}

fn need_palette(palette: Option<u32>) -> Result<u32, CliError> {
    match palette {
        Some(k) if k >= 1 => Ok(k),
        Some(_) => Err(CliError::Usage("--palette must be at least 1".into())),
        None => Err(CliError::Usage("graphs need --palette <k>".into())),
    }
}

fn header(config: &RunConfig, digest: &str) -> String {
    format!("{}\n", json!({"config": config, "digest": digest}))
}

fn line(out: &mut String, value: impl Serialize) {
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string(&value).expect("report serializes")
    );
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let config = RunConfig::from_cli(cli);
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(CliError::Usage(format!(
            "--epsilon must lie in (0, 1), got {}",
            config.epsilon
        )));
    }
    if config.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let options = SearchOptions {
        max_seed_bits: cli.max_seed_bits,
        parallel: true,
    };
    match &cli.command {
        Command::GenGraph(a) => {
            let g = gen_graph(a.n, a.d, a.density, cli.seed);
            let text = serialize_graph(&g);
            let summary = format!(
                "{}\ngenerated graph: n = {}, m = {}, max degree = {}\n",
                header(&config, &derand_core::format::digest_bytes(text.as_bytes())).trim_end(),
                g.n(),
                g.m(),
                g.max_degree()
            );
            Ok(ok(text, summary))
        }
        Command::GenHyper(a) => {
            let cap = match a.max_overlap {
                Overlap::Count(c) => c,
                Overlap::Auto => usize::try_from(lll_overlap_threshold(a.k)).map_err(|_| {
                    CliError::Usage(format!(
                        "--max-overlap auto is undefined at k = {}: the threshold is negative",
                        a.k
                    ))
                })?,
            };
            let out = gen_hypergraph(a.n, a.k, a.m, cap, cli.seed)?;
            let text = serialize_hypergraph(&out.hypergraph);
            let mut summary = header(&config, &derand_core::format::digest_bytes(text.as_bytes()));
            let _ = writeln!(
                summary,
                "generated hypergraph: n = {}, k = {}, m = {} of {} requested, max overlap = {cap}{}",
                a.n,
                a.k,
                out.hypergraph.m(),
                out.requested_m,
                if out.truncated() { " (truncated)" } else { "" }
            );
            Ok(ok(text, summary))
        }
        Command::Bounds(a) => bounds(&config, a),
        Command::SolveGraph(a) => solve_graph(&config, a, &options),
        Command::SolveHyper(a) => solve_hyper(&config, a, &options),
        Command::Mt(a) => mt(&config, a),
        Command::Play(a) => play(&config, a),
        Command::Estimate(a) => estimate(&config, a),
    }
}

fn ok(report: String, summary: String) -> Outcome {
    Outcome {
        report,
        summary,
        status: Status::Success,
        files: Vec::new(),
    }
}

fn bounds(config: &RunConfig, a: &InstanceArgs) -> Result<Outcome, CliError> {
    let instance = read_instance(&a.instance)?;
    let digest = instance_digest(&instance);
    let mut report = header(config, &digest);
    let (status, summary) = match instance {
        Instance::Graph(g) => {
            let k = need_palette(a.palette)?;
            let d = g.max_degree();
            match BudgetReport::graph(&g, k as usize, config.slack_bits) {
                Ok(b) => {
                    line(
                        &mut report,
                        json!({"kind": "graph", "n": g.n(), "m": g.m(), "max_degree": d,
                               "palette": k, "budget": b}),
                    );
                    let s = format!(
                        "graph n = {} d = {d} k = {k}: -log2 P <= {:.4} <= 2nd/k = {:.4}; seed bits {}\n",
                        g.n(),
                        b.exact_neg_log2_prob,
                        b.budget_bits,
                        b.seed_bits
                    );
                    (Status::Success, s)
                }
                Err(_) => {
                    line(
                        &mut report,
                        json!({"kind": "graph", "n": g.n(), "m": g.m(), "max_degree": d,
                               "palette": k, "budget": null, "precondition_holds": false}),
                    );
                    let s = format!("graph budget needs 2d <= k; here d = {d}, k = {k}\n");
                    (Status::Failed, s)
                }
            }
        }
        Instance::Hypergraph(h) => {
            let lll = check_condition(&h);
            let b = BudgetReport::hypergraph(&h, config.slack_bits);
            line(
                &mut report,
                json!({"kind": "hypergraph", "n": h.n(), "m": h.m(), "k": h.k(),
                       "threshold": lll.threshold,
                       "max_observed_overlap": lll.max_observed_overlap,
                       "satisfied": lll.satisfied, "budget": b}),
            );
            let s = format!(
                "hypergraph m = {} k = {}: overlap {} vs threshold {} ({}); 4me/2^k = {:.4}, lll product = {:.4}; seed bits {}\n",
                h.m(),
                h.k(),
                lll.max_observed_overlap,
                lll.threshold,
                if lll.satisfied { "satisfied" } else { "violated" },
                b.budget_bits,
                lll_product_bits(h.m(), h.k()),
                b.seed_bits
            );
            let status = if b.precondition_holds {
                Status::Success
            } else {
                Status::Failed
            };
            (status, s)
        }
    };
    Ok(Outcome {
        report,
        summary,
        status,
        files: Vec::new(),
    })
}

fn solve_graph(
    config: &RunConfig,
    a: &SolveArgs,
    options: &SearchOptions,
) -> Result<Outcome, CliError> {
    let g = expect_graph(read_instance(&a.instance)?, &a.instance)?;
    let k = need_palette(a.palette)?;
    let (seed_bits, budget_bits) = match config.budget {
        Budget::Bits(b) => (b, None),
        Budget::Auto => {
            let b = BudgetReport::graph(&g, k as usize, config.slack_bits)?;
            (b.seed_bits, Some(b.budget_bits))
        }
    };
    let cert = search_graph(&g, k, seed_bits, options)?;
    let mut report = header(config, &cert.digest);
    line(&mut report, &cert);
    line(
        &mut report,
        json!({"minimal_seed_bits": cert.minimal_seed_bits(), "budget_bits": budget_bits}),
    );
    let mut files = Vec::new();
    if let (Some(path), Some(seed)) = (&a.coloring, cert.seed) {
        files.push((
            path.clone(),
            serialize_coloring(&seed_to_coloring(seed, g.n(), k)?),
        ));
    }
    Ok(certificate_outcome(report, cert, files))
}

fn solve_hyper(
    config: &RunConfig,
    a: &SolveArgs,
    options: &SearchOptions,
) -> Result<Outcome, CliError> {
    let h = expect_hypergraph(read_instance(&a.instance)?, &a.instance)?;
    let (seed_bits, budget_bits) = match config.budget {
        Budget::Bits(b) => (b, None),
        Budget::Auto => {
            let budget = hyper_budget_bits(h.m(), h.k());
            (seed_bits_for(budget, config.slack_bits), Some(budget))
        }
    };
    let cert = search_hypergraph(&h, seed_bits, options)?;
    let mut report = header(config, &cert.digest);
    line(&mut report, &cert);
    line(
        &mut report,
        json!({"minimal_seed_bits": cert.minimal_seed_bits(), "budget_bits": budget_bits,
               "lll_product_bits": lll_product_bits(h.m(), h.k()),
               "condition_satisfied": check_condition(&h).satisfied}),
    );
    let mut files = Vec::new();
    if let (Some(path), Some(seed)) = (&a.coloring, cert.seed) {
        files.push((
            path.clone(),
            serialize_coloring(&seed_to_coloring(seed, h.n(), 2)?),
        ));
    }
    Ok(certificate_outcome(report, cert, files))
}

fn certificate_outcome(
    report: String,
    cert: derand_core::SeedCertificate,
    files: Vec<(PathBuf, String)>,
) -> Outcome {
    let summary = match cert.seed {
        Some(seed) => format!(
            "found seed {seed} ({} bits) under a {}-bit budget after {} decodings\n",
            cert.minimal_seed_bits().unwrap_or(0),
            cert.seed_bits,
            cert.tested
        ),
        None => format!("no valid seed below 2^{}\n", cert.seed_bits),
    };
    Outcome {
        report,
        summary,
        status: if cert.found {
            Status::Success
        } else {
            Status::Failed
        },
        files,
    }
}

fn mt(config: &RunConfig, a: &SolveArgs) -> Result<Outcome, CliError> {
    let instance = read_instance(&a.instance)?;
    let digest = instance_digest(&instance);
    let h = expect_hypergraph(instance, &a.instance)?;
    let cap = config.cap.unwrap_or_else(|| default_cap(h.m()));
    let trace = moser_tardos(&h, config.seed, cap);
    let mut report = header(config, &digest);
    report.push_str(&trace.to_json_lines());
    let summary = format!(
        "{} after {} resamples (cap {cap}, condition {})\n",
        if trace.valid { "valid" } else { "cap reached" },
        trace.resample_count(),
        if check_condition(&h).satisfied {
            "satisfied"
        } else {
            "violated"
        }
    );
    let mut files = Vec::new();
    if let (Some(path), true) = (&a.coloring, trace.valid) {
        files.push((path.clone(), serialize_coloring(&trace.final_coloring)));
    }
    Ok(Outcome {
        report,
        summary,
        status: if trace.valid {
            Status::Success
        } else {
            Status::Failed
        },
        files,
    })
}

fn play(config: &RunConfig, a: &InstanceArgs) -> Result<Outcome, CliError> {
    let instance = read_instance(&a.instance)?;
    let digest = instance_digest(&instance);
    let h = expect_hypergraph(instance, &a.instance)?;
    let cap = config.cap.unwrap_or_else(|| default_hard_cap(h.n(), h.k()));
    let mut report = header(config, &digest);

    if config.trials == 1 {
        let t = run_game(&h, config.epsilon, config.seed, cap)?;
        report.push_str(&t.to_json_lines());
        let summary = format!(
            "{} in {} turns; bound (1+eps)n/k = {:.2}; within bound: {}\n",
            if t.won { "won" } else { "lost" },
            t.total_turns(),
            t.bound,
            t.within_bound
                .map_or("not checked".into(), |b| b.to_string())
        );
        let status = if t.won {
            Status::Success
        } else {
            Status::Failed
        };
        return Ok(Outcome {
            report,
            summary,
            status,
            files: Vec::new(),
        });
    }

    let games = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i);
            run_game(&h, config.epsilon, seed, cap).map(|t| (i, seed, t))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut won = 0u64;
    let mut within = 0u64;
    let mut checked = false;
    for (i, seed, t) in &games {
        won += t.won as u64;
        if let Some(b) = t.within_bound {
            checked = true;
            within += b as u64;
        }
        line(
            &mut report,
            json!({"trial": i, "seed": seed, "turns": t.total_turns(), "won": t.won,
                   "within_bound": t.within_bound}),
        );
    }
    let rate = checked.then(|| within as f64 / config.trials as f64);
    let bound = games.first().map(|(_, _, t)| t.bound);
    line(
        &mut report,
        json!({"trials": config.trials, "won": won, "within_bound": checked.then_some(within),
               "within_bound_rate": rate, "bound": bound, "hard_cap": cap}),
    );
    let summary = format!(
        "{won}/{} games won; within-bound rate {}\n",
        config.trials,
        rate.map_or("not checked".into(), |r| format!("{r:.3}"))
    );
    let status = if won == config.trials {
        Status::Success
    } else {
        Status::Failed
    };
    Ok(Outcome {
        report,
        summary,
        status,
        files: Vec::new(),
    })
}

fn estimate(config: &RunConfig, a: &InstanceArgs) -> Result<Outcome, CliError> {
    let instance = read_instance(&a.instance)?;
    let digest = instance_digest(&instance);
    let est = match instance {
        Instance::Graph(g) => {
            estimate_graph(&g, need_palette(a.palette)?, config.trials, config.seed)?
        }
        Instance::Hypergraph(h) => estimate_hypergraph(&h, config.trials, config.seed)?,
    };
    let mut report = header(config, &digest);
    line(&mut report, &est);
    let mut summary = format!(
        "frequency {:.6} over {} trials; exact {}; lower bound {:.6}\n",
        est.frequency,
        est.trials,
        est.exact
            .map_or("unavailable".into(), |p| format!("{p:.6}")),
        est.lower_bound
    );
    if est.within_band == Some(false) {
        summary.push_str("note: frequency lies outside the 4-sigma band around the exact value\n");
    }
    Ok(Outcome {
        report,
        summary,
        status: if est.bound_holds() {
            Status::Success
        } else {
            Status::Failed
        },
        files: Vec::new(),
    })
}
