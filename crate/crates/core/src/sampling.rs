//! Seeded, thread-count independent sampling from discrete distributions.
//!
//! Trials are split into fixed-size chunks; chunk `c` draws from its own
//! ChaCha stream `c` of the user seed, so counts do not depend on how chunks
//! are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Trials drawn from one generator stream.
pub const CHUNK_TRIALS: u64 = 1 << 14;

/// The generator for chunk `chunk` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Index selected by a uniform draw `u ∈ [0, 1)` against unnormalized weights.
///
/// Zero-weight entries are never selected.
pub fn select(weights: &[f64], u: f64) -> usize {
    let total: f64 = weights.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if target < acc {
            return i;
        }
    }
    last
}

/// One draw, identical to the first trial of [`sample_counts`] with the same seed.
pub fn sample_once(weights: &[f64], seed: u64) -> usize {
    select(weights, stream_rng(seed, 0).random::<f64>())
}

/// Outcome counts over `trials` independent draws.
pub fn sample_counts(weights: &[f64], trials: u64, seed: u64) -> Vec<u64> {
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut counts = vec![0u64; weights.len()];
            for _ in 0..n {
                counts[select(weights, rng.random::<f64>())] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; weights.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Half-width of the 3σ binomial envelope for `trials` draws at probability `p`.
pub fn three_sigma(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
