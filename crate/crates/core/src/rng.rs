//! Seeded random streams.
//!
//! Every stochastic operation in the crate draws from a [`Stream`], so a run
//! is fully determined by its 64-bit seeds. The construction is fixed so
//! that another implementation can reproduce the same draws:
//!
//! * core generator: xoshiro256\*\* seeded from a `u64` by taking four
//!   consecutive SplitMix64 outputs (state starts at the seed, increment
//!   `0x9E3779B97F4A7C15`) as the little-endian state words `s[0..4]`;
//! * replication streams: `seed_r = mix64(master ^ r * 0x9E3779B97F4A7C15)`
//!   with wrapping multiplication, where `mix64` is the SplitMix64 finalizer
//!   (`z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!   z *= 0x94D049BB133111EB; z ^= z >> 31`);
//! * `uniform()`: `(next_u64() >> 11) * 2^-53`, a value in `[0, 1)`;
//! * `below(n)`: Lemire's multiply-high method with the usual rejection
//!   threshold `(2^64 - n) mod n`, exact and unbiased.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

/// Odd multiplier used when deriving per-replication seeds.
pub const STREAM_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer, a 64-bit avalanche mixer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th substream of `master`.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ index.wrapping_mul(STREAM_STRIDE))
}

#[derive(Clone, Debug)]
pub struct Stream {
    inner: Xoshiro256StarStar,
}

impl Stream {
    pub fn from_seed(seed: u64) -> Self {
        Stream {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// Stream for replication `index` of an experiment seeded with `master`.
    pub fn substream(master: u64, index: u64) -> Self {
        Stream::from_seed(derive_seed(master, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform double in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid outcome");
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    #[inline]
    pub fn index(&mut self, len: usize) -> usize {
        self.below(len as u64) as usize
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Exponential variate with the given mean, by inversion.
    pub fn exponential(&mut self, mean: f64) -> f64 {
        -mean * (1.0 - self.uniform()).ln()
    }

    /// Moves a uniform random `k`-subset of `items` to the front, in uniformly
    /// random order (partial Fisher-Yates). Returns that prefix.
    pub fn partial_shuffle<'a, T>(&mut self, items: &'a mut [T], k: usize) -> &'a mut [T] {
        let k = k.min(items.len());
        for i in 0..k {
            let j = i + self.index(items.len() - i);
            items.swap(i, j);
        }
        &mut items[..k]
    }
}
