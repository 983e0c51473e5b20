//! Reproducible random streams.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha`) keyed by
//! `seed_from_u64(seed)` with its 64-bit stream id set to the stream index.
//! ChaCha output is defined word-by-word, so a `(seed, stream)` pair yields
//! the same sequence on every platform, and distinct stream indices under one
//! seed are non-overlapping keystreams.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Algorithm identifier embedded in result metadata.
pub const RNG_ALGORITHM: &str = "chacha8";

/// How stream indices relate to the seed, for result metadata.
pub const STREAM_DERIVATION: &str =
    "ChaCha8Rng::seed_from_u64(seed) then set_stream(index); uniform = ((next_u64 >> 12) + 0.5) * 2^-52";

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// A sibling stream under the same seed.
    pub fn fork(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform variate on the open interval (0, 1) from exactly one raw
    /// 64-bit draw. The 52-bit grid is offset by half a step so neither 0 nor
    /// 1 is attainable and `1 - u` is exact.
    pub fn uniform(&mut self) -> f64 {
        const STEP: f64 = 1.0 / (1u64 << 52) as f64;
        ((self.next_u64() >> 12) as f64 + 0.5) * STEP
    }

    /// Number of 64-bit words consumed so far.
    pub fn words_consumed(&self) -> u128 {
        // word_pos counts 32-bit words
        self.inner.get_word_pos() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_stream_repeat() {
        let mut a = RngStream::new(42, 3);
        let mut b = RngStream::new(42, 3);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn uniform_is_open_and_one_word() {
        let mut r = RngStream::new(7, 0);
        for i in 1..=10_000u128 {
            let u = r.uniform();
            assert!(u > 0.0 && u < 1.0);
            assert!(1.0 - u > 0.0);
            assert_eq!(r.words_consumed(), i);
        }
    }

    #[test]
    fn uniform_extremes() {
        const STEP: f64 = 1.0 / (1u64 << 52) as f64;
        let lo = 0.5 * STEP;
        let hi = ((u64::MAX >> 12) as f64 + 0.5) * STEP;
        assert!(lo > 0.0);
        assert!(hi < 1.0);
    }

    #[test]
    fn pinned_first_words() {
        // Guards against silent changes in the generator or its seeding.
        let mut r = RngStream::new(0, 0);
        assert_eq!(r.next_u64(), 13080132717333068652);
        assert_eq!(r.next_u64(), 8594738769458413623);
        assert_eq!(RngStream::new(2024, 7).next_u64(), 3324560901702967639);
    }
}
