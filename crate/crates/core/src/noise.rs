//! Seeded random streams and the truncated-normal misjudgment model.
//!
//! Every random quantity in the crate comes from a [`RandomStream`], a
//! ChaCha8 generator keyed by `(seed, stream_id)`. Streams with the same key
//! produce the same sequence on every platform and at every thread count, so
//! experiments are pure functions of their master seed.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Identifies the generator recorded in results metadata.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng(rand_chacha 0.9; seed_from_u64(seed), set_stream(stream_id)); uniform: rand 0.9 f64; zeta: inverse-CDF (statrs 0.19)";

/// Lower cutoff of the misjudgment factor.
pub const ZETA_LOWER: f64 = 0.7;
/// Upper cutoff of the misjudgment factor.
pub const ZETA_UPPER: f64 = 1.3;
/// Centre of the misjudgment factor.
pub const ZETA_MEAN: f64 = 1.0;

/// Redraw cap for [`sample_trunc_normal_rejection`].
pub const MAX_REDRAWS: u32 = 10_000;

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Independent stream for one trial of an experiment.
pub fn derive_stream(master_seed: u64, trial_index: u64) -> RandomStream {
    RandomStream::new(master_seed, trial_index)
}

/// Mixes a sub-key into a seed (SplitMix64 finalizer), for per-N sweep seeds.
pub fn derive_seed(master_seed: u64, key: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(master_seed ^ mix(key))
}

/// Parameters of ζ ~ N(mean, σ²) conditioned on `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncNormalParams {
    pub mean: f64,
    pub sigma: f64,
    pub lower: f64,
    pub upper: f64,
}

impl TruncNormalParams {
    /// The misjudgment model: mean 1, cutoffs 0.7 and 1.3.
    pub fn new(sigma: f64) -> Result<Self> {
        let params = Self { mean: ZETA_MEAN, sigma, lower: ZETA_LOWER, upper: ZETA_UPPER };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.sigma.is_finite() && self.sigma >= 0.0 && self.lower < self.mean && self.mean < self.upper;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "truncated normal needs sigma >= 0 and lower < mean < upper, got {self:?}"
            )))
        }
    }
}

/// Draws ζ by inverting the truncated CDF at one uniform variate.
///
/// Exactly one uniform is consumed per call when σ > 0, so two runs that
/// differ only in σ read the same variates and their draws stay paired:
/// each draw moves monotonically away from the mean as σ grows.
/// With σ = 0 the result is exactly `mean` and no randomness is consumed.
pub fn sample_trunc_normal(params: &TruncNormalParams, rng: &mut RandomStream) -> f64 {
    if params.sigma == 0.0 {
        return params.mean;
    }
    let std = Normal::standard();
    let lo = std.cdf((params.lower - params.mean) / params.sigma);
    let hi = std.cdf((params.upper - params.mean) / params.sigma);
    let p = lo + rng.uniform01() * (hi - lo);
    let z = std.inverse_cdf(p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0));
    (params.mean + params.sigma * z).clamp(params.lower, params.upper)
}

/// Draws ζ by rejection: redraw the normal until it lands inside the cutoffs.
///
/// Same distribution as [`sample_trunc_normal`], but the number of variates
/// consumed depends on σ. After [`MAX_REDRAWS`] rejected draws the last draw
/// is clamped into range.
pub fn sample_trunc_normal_rejection(params: &TruncNormalParams, rng: &mut RandomStream) -> f64 {
    if params.sigma == 0.0 {
        return params.mean;
    }
    let mut x = params.mean;
    for _ in 0..MAX_REDRAWS {
        x = params.mean + params.sigma * rng.standard_normal();
        if (params.lower..=params.upper).contains(&x) {
            return x;
        }
    }
    x.clamp(params.lower, params.upper)
}
