//! Enumerative search for the smallest seed whose decoded coloring is a
//! valid solution.
//!
//! Seeds are tried in ascending order and each one restarts the generator,
//! so the returned seed (and its bit length) is a self-contained description
//! of the solution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{graph_digest, hypergraph_digest};
use crate::instance::{proper_unchecked, two_colorable_unchecked, Graph, Hypergraph};
use crate::prng::{decode_into, Prng};

pub const DEFAULT_MAX_SEED_BITS: u32 = 40;

/// Seeds handed to the worker pool per round in parallel mode.
const PARALLEL_BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cost guard: refuse to search more than `2^max_seed_bits` seeds.
    pub max_seed_bits: u32,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_seed_bits: DEFAULT_MAX_SEED_BITS,
            parallel: false,
        }
    }
}

impl SearchOptions {
    pub fn parallel() -> Self {
        SearchOptions {
            parallel: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedCertificate {
    pub digest: String,
    /// Minimal successful seed; `None` when the range was exhausted.
    pub seed: Option<u64>,
    pub seed_bits: u32,
    pub tested: u64,
    pub found: bool,
}

impl SeedCertificate {
    /// Bit length of the seed itself, `ceil(log2(seed + 1))`.
    pub fn minimal_seed_bits(&self) -> Option<u32> {
        self.seed.map(seed_bit_length)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

pub fn seed_bit_length(seed: u64) -> u32 {
    u64::BITS - seed.leading_zeros()
}

/// Result of a raw search: the minimal seed (if any) and how many seeds
/// were decoded to establish it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub seed: Option<u64>,
    pub tested: u64,
}

/// Tries seeds `0..2^seed_bits` and returns the first whose decoded
/// coloring over `palette` colors satisfies `valid`.
///
/// Parallel mode works in blocks of consecutive seeds and takes the first
/// success within the earliest successful block, so it always agrees with
/// the sequential scan.
pub fn search_seeds<F>(
    n: usize,
    palette: u32,
    seed_bits: u32,
    options: &SearchOptions,
    valid: F,
) -> Result<SearchOutcome>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    if palette == 0 {
        return Err(Error::Precondition("palette must be at least 1".into()));
    }
    if seed_bits > options.max_seed_bits {
        return Err(Error::CostGuard {
            requested: seed_bits,
            limit: options.max_seed_bits,
        });
    }
    if seed_bits >= u64::BITS {
        return Err(Error::Precondition("seed_bits must be below 64".into()));
    }
    let total = 1u64 << seed_bits;

    let test = |seed: u64, buf: &mut Vec<u32>| {
        let mut prng = Prng::new(seed);
        decode_into(&mut prng, n, palette, buf);
        valid(buf)
    };

    if !options.parallel {
        let mut buf = Vec::with_capacity(n);
        return Ok(match (0..total).find(|&s| test(s, &mut buf)) {
            Some(seed) => SearchOutcome {
                seed: Some(seed),
                tested: seed + 1,
            },
            None => SearchOutcome {
                seed: None,
                tested: total,
            },
        });
    }

    let mut start = 0u64;
    while start < total {
        let end = total.min(start.saturating_add(PARALLEL_BLOCK));
        let hit = (start..end)
            .into_par_iter()
            .map_init(|| Vec::with_capacity(n), |buf, s| (s, test(s, buf)))
            .find_first(|&(_, ok)| ok);
        if let Some((seed, _)) = hit {
            return Ok(SearchOutcome {
                seed: Some(seed),
                tested: seed + 1,
            });
        }
        start = end;
    }
    Ok(SearchOutcome {
        seed: None,
        tested: total,
    })
}

fn certificate(digest: String, seed_bits: u32, outcome: SearchOutcome) -> SeedCertificate {
    SeedCertificate {
        digest,
        seed: outcome.seed,
        seed_bits,
        tested: outcome.tested,
        found: outcome.seed.is_some(),
    }
}

/// Smallest seed decoding to a proper `palette`-coloring of `g`.
pub fn search_graph(
    g: &Graph,
    palette: u32,
    seed_bits: u32,
    options: &SearchOptions,
) -> Result<SeedCertificate> {
    let outcome = search_seeds(g.n(), palette, seed_bits, options, |c| {
        proper_unchecked(g, c)
    })?;
    Ok(certificate(graph_digest(g), seed_bits, outcome))
}

/// Smallest seed decoding to a 2-coloring of `h` with no monochromatic edge.
pub fn search_hypergraph(
    h: &Hypergraph,
    seed_bits: u32,
    options: &SearchOptions,
) -> Result<SeedCertificate> {
    let outcome = search_seeds(h.n(), 2, seed_bits, options, |c| {
        two_colorable_unchecked(h, c)
    })?;
    Ok(certificate(hypergraph_digest(h), seed_bits, outcome))
}
