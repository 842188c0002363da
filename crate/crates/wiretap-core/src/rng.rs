//! Seeded randomness. Every sample of a sweep draws from its own stream,
//! derived from the user seed and the sample index, so results do not
//! depend on the order (or thread) in which samples are evaluated.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

pub type SampleRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index.wrapping_add(0x5EED))))
}

/// A probability vector drawn uniformly from the simplex (Dirichlet(1)).
pub fn random_pmf(rng: &mut SampleRng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + 1e-300).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// A row-stochastic matrix with `rows` independent Dirichlet(1) rows.
pub fn random_stochastic(rng: &mut SampleRng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| random_pmf(rng, cols)).collect()
}

/// Uniform draw in [lo, hi).
pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
