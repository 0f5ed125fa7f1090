//! Finite-count simulation of polarization-correlation measurements.
//!
//! Each analyzer pair is measured by drawing joint outcomes from the exact
//! four-cell Born distribution with inverse-CDF sampling. Randomness comes
//! from ChaCha8 seeded with the user seed; setting pair `k` reads stream `k`,
//! so every pair has its own reproducible substream independent of
//! evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chsh::{observable, AnalyzerSettings};
use crate::error::{Error, Result};
use crate::linalg::{kron, trace_product, ComplexMat2};
use crate::state::{build_rho_cw, NoiseParams};

pub const MIN_SAMPLES: u64 = 100;

/// Joint outcome probabilities in the order `(+,+), (+,-), (-,+), (-,-)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeDistribution {
    pub probabilities: [f64; 4],
}

impl OutcomeDistribution {
    /// `E[ab]`.
    pub fn correlation(&self) -> f64 {
        let [pp, pm, mp, mm] = self.probabilities;
        pp + mm - pm - mp
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples_per_setting: u64,
}

fn projector(alpha: f64, outcome: f64) -> ComplexMat2 {
    (ComplexMat2::identity() + observable(alpha).scale(outcome)).scale(0.5)
}

/// Born-rule probabilities for measuring qubit A along `alpha_a` and qubit B
/// along `alpha_b`.
pub fn outcome_probabilities(
    params: NoiseParams,
    alpha_a: f64,
    alpha_b: f64,
) -> OutcomeDistribution {
    let rho = build_rho_cw(params);
    let mut probabilities = [0.0; 4];
    for (cell, (a, b)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .into_iter()
        .enumerate()
    {
        let joint = kron(&projector(alpha_a, a), &projector(alpha_b, b));
        probabilities[cell] = trace_product(rho.matrix(), &joint).re.max(0.0);
    }
    let total: f64 = probabilities.iter().sum();
    probabilities.iter_mut().for_each(|x| *x /= total);
    OutcomeDistribution { probabilities }
}

/// ChaCha8 generator for `(seed, stream)`.
pub fn setting_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Counts of `n` inverse-CDF draws over the four outcome cells.
pub fn sample_counts<R: Rng + ?Sized>(dist: &OutcomeDistribution, n: u64, rng: &mut R) -> [u64; 4] {
    let [p0, p1, p2, _] = dist.probabilities;
    let (c0, c1, c2) = (p0, p0 + p1, p0 + p1 + p2);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let u: f64 = rng.random();
        let cell = if u < c0 {
            0
        } else if u < c1 {
            1
        } else if u < c2 {
            2
        } else {
            3
        };
        counts[cell] += 1;
    }
    counts
}

/// Sample correlation from outcome counts.
pub fn correlation_from_counts(counts: &[u64; 4]) -> f64 {
    let n: u64 = counts.iter().sum();
    let agree = counts[0] + counts[3];
    (2.0 * agree as f64 - n as f64) / n as f64
}

/// Variance of a sample correlation. Uses the add-one estimate of the
/// agreement probability so it stays positive when every draw agrees.
fn correlation_variance(counts: &[u64; 4]) -> f64 {
    let n: u64 = counts.iter().sum();
    let q = (counts[0] + counts[3] + 1) as f64 / (n + 2) as f64;
    4.0 * q * (1.0 - q) / n as f64
}

/// Analyzer angle pairs `(A_i, B_j)` and their signs in the CHSH combination.
pub fn chsh_terms(s: AnalyzerSettings) -> [(f64, f64, f64); 4] {
    let (t, f) = (s.theta, s.phi);
    [
        (0.0, f, -1.0),
        (0.0, f - t, -1.0),
        (t, f, -1.0),
        (t, f - t, 1.0),
    ]
}

/// Simulated `-<A0B0> - <A0B1> - <A1B0> + <A1B1>` from `n_per_setting`
/// draws per analyzer pair.
pub fn estimate_beta(
    params: NoiseParams,
    s: AnalyzerSettings,
    n_per_setting: u64,
    seed: u64,
) -> Result<BetaEstimate> {
    if n_per_setting < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples per setting, got {n_per_setting}"
        )));
    }
    let mut value = 0.0;
    let mut variance = 0.0;
    for (stream, (alpha_a, alpha_b, sign)) in chsh_terms(s).into_iter().enumerate() {
        let dist = outcome_probabilities(params, alpha_a, alpha_b);
        let counts = sample_counts(&dist, n_per_setting, &mut setting_rng(seed, stream as u64));
        value += sign * correlation_from_counts(&counts);
        variance += correlation_variance(&counts);
    }
    Ok(BetaEstimate {
        value,
        std_error: variance.sqrt(),
        samples_per_setting: n_per_setting,
    })
}
