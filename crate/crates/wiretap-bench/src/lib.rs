//! Shared inputs for the benchmarks: fixed, seeded channels and
//! auxiliaries so every run measures the same work.

use wiretap_core::regions::discrete::{random_degraded_aux, sample_degraded_channel, AuxJoint};
use wiretap_core::regions::gaussian::{sample_degraded_gauss_channel, sample_triple_split, CovSplit, GaussChannel};
use wiretap_core::{ChannelSpec, Result};

/// Seed of every benchmark input.
pub const SEED: u64 = 0xBE7C;

/// A degraded discrete channel with alphabets of at most three symbols and
/// a (U, X) auxiliary with |U| = 4.
pub fn discrete_pair() -> Result<(ChannelSpec, AuxJoint)> {
    let ch = sample_degraded_channel(SEED, 0, 3)?;
    let aux = random_degraded_aux(ch.input.card, 4, SEED, 1)?;
    Ok((ch, aux))
}

/// A degraded Gaussian channel of dimension `d` and a three-layer split.
pub fn gauss_pair(d: usize) -> Result<(GaussChannel, CovSplit)> {
    let ch = sample_degraded_gauss_channel(d, SEED, 0)?;
    let split = sample_triple_split(&ch.s, SEED, 5)?;
    Ok((ch, split))
}

/// The scalar channel with cap 1 and noise variances 0.5, 1, 2.
pub fn scalar_channel() -> Result<GaussChannel> {
    GaussChannel::scalar(1.0, 0.5, 1.0, 2.0)
}
