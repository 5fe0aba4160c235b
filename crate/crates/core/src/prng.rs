//! splitmix64, and the seed-to-coloring decoder built on it.
//!
//! The whole generator state is one `u64`, so a seed is a complete
//! description of every coloring derived from it.

use crate::error::{Error, Result};
use crate::instance::Coloring;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prng {
    state: u64,
}

impl Prng {
    pub fn new(state: u64) -> Self {
        Prng { state }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Value-style step: returns the output and the successor generator.
    pub fn step(self) -> (u64, Prng) {
        let mut next = self;
        let out = next.next_u64();
        (out, next)
    }

    /// Exactly uniform draw from `0..bound` by rejection.
    ///
    /// Words at or above `floor(2^64 / bound) * bound` are discarded, so the
    /// number of underlying steps consumed varies.
    pub fn uniform_below(&mut self, bound: u64) -> Result<u64> {
        if bound == 0 {
            return Err(Error::Precondition("uniform_below needs bound >= 1".into()));
        }
        Ok(self.below(bound))
    }

    pub(crate) fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let limit = ((1u128 << 64) / bound as u128) * bound as u128;
        loop {
            let word = self.next_u64();
            if (word as u128) < limit {
                return word % bound;
            }
        }
    }
}

/// The splitmix64 output finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run seeded with `seed`: one generator step
/// from `seed + index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    Prng::new(seed.wrapping_add(index)).next_u64()
}

/// Colors vertices `0..n` in order with `1 + uniform_below(palette)`,
/// starting the generator at `seed`.
pub fn seed_to_coloring(seed: u64, n: usize, palette: u32) -> Result<Coloring> {
    if palette == 0 {
        return Err(Error::Precondition("palette must be at least 1".into()));
    }
    let mut prng = Prng::new(seed);
    Ok(decode_coloring(&mut prng, n, palette))
}

/// Decodes from an existing stream, leaving `prng` positioned after the
/// last draw.
pub(crate) fn decode_coloring(prng: &mut Prng, n: usize, palette: u32) -> Coloring {
    let mut colors = Vec::with_capacity(n);
    decode_into(prng, n, palette, &mut colors);
    Coloring::from_raw(colors, palette)
}

pub(crate) fn decode_into(prng: &mut Prng, n: usize, palette: u32, out: &mut Vec<u32>) {
    out.clear();
    out.extend((0..n).map(|_| 1 + prng.below(palette as u64) as u32));
}
