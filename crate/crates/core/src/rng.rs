//! Counter-based random streams.
//!
//! A stream is identified by `(seed, stream_id)`. The underlying generator is
//! ChaCha8 keyed by the seed with the stream id selecting an independent
//! 2^64-block keystream, so draws are a pure function of the pair and do not
//! depend on the order in which streams are consumed.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A reproducible random stream owned by a single consumer.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            inner,
        }
    }

    /// Stream for replicate `index` of experiment lane `lane`.
    ///
    /// Lanes separate the independent pieces of one experiment (for example
    /// the two batches of a two-sample comparison) under a single seed.
    pub fn replicate(seed: u64, lane: u16, index: u64) -> Self {
        debug_assert!(index < 1 << 48);
        Self::new(seed, ((lane as u64) << 48) | index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the half-open interval (0, 1], 53-bit resolution.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Mean-one exponential variate.
    #[inline]
    pub fn exp1(&mut self) -> f64 {
        -self.uniform_open0().ln()
    }

    /// Uniform random sign.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Access to the generator for `rand_distr` samplers.
    pub fn rng(&mut self) -> &mut impl Rng {
        &mut self.inner
    }
}

/// Runs `f` on replicates `0..reps` of `lane`, in parallel, returning the
/// results in replicate order. The output does not depend on the thread count.
pub fn replicates<T, F>(seed: u64, lane: u16, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream) -> T + Sync + Send,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|i| f(&mut RngStream::replicate(seed, lane, i)))
        .collect()
}
