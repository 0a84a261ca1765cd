//! Seeded random source.
//!
//! Backed by ChaCha8, which is counter based: a `(seed, stream)` pair addresses an
//! independent keystream, so sub-streams for runs and networks never overlap and never
//! depend on how much randomness a sibling consumed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent sub-stream of the same seed, positioned at its start.
    pub fn fork(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        // 53 high bits give every representable multiple of 2^-53.
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        rand::Rng::random_range(&mut self.inner, 0..n)
    }

    pub fn standard_normal(&mut self) -> f64 {
        rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut self.inner)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        let xs: Vec<u64> = (0..64).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..64).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn forks_are_independent_of_parent_position() {
        let a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        for _ in 0..100 {
            b.next_u64();
        }
        let mut fa = a.fork(3);
        let mut fb = b.fork(3);
        assert_eq!(fa.next_u64(), fb.next_u64());
        let mut other = a.fork(4);
        assert_ne!(a.fork(3).next_u64(), other.next_u64());
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut r = RandomSource::new(1);
        for _ in 0..10_000 {
            let u = r.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
