//! Real AWGN channel with per-dimension SNR `Es / σ²`.
//!
//! Noise is drawn from a ChaCha8 stream keyed by `(seed, stream)`, so any
//! trial can be replayed in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::mapper::SignalSeq;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("noise variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("signal energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
}

/// Channel parameters for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    sigma2: f64,
    es: f64,
}

impl ChannelParams {
    pub fn from_snr_db(snr_db: f64, es: f64) -> Result<Self, ChannelError> {
        if !(es > 0.0) {
            return Err(ChannelError::NonPositiveEnergy(es));
        }
        Self::from_sigma2(snr_to_sigma(snr_db, es), es)
    }

    pub fn from_sigma2(sigma2: f64, es: f64) -> Result<Self, ChannelError> {
        if !(sigma2 > 0.0) {
            return Err(ChannelError::NonPositiveVariance(sigma2));
        }
        if !(es > 0.0) {
            return Err(ChannelError::NonPositiveEnergy(es));
        }
        Ok(ChannelParams { sigma2, es })
    }

    /// Noise variance per real dimension.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Average signal energy per PAM signal.
    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn snr_db(&self) -> f64 {
        sigma_to_snr(self.sigma2, self.es)
    }
}

/// Identifies an independent noise stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSeed { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// `σ² = Es / 10^{snr/10}`.
pub fn snr_to_sigma(snr_db: f64, es: f64) -> f64 {
    es / 10f64.powf(snr_db / 10.0)
}

pub fn sigma_to_snr(sigma2: f64, es: f64) -> f64 {
    10.0 * (es / sigma2).log10()
}

/// Adds i.i.d. `N(0, σ²)` noise to each sample in place.
pub fn add_noise_in_place<R: rand::Rng + ?Sized>(samples: &mut [f64], sigma2: f64, rng: &mut R) {
    let sigma = sigma2.sqrt();
    for x in samples {
        let z: f64 = StandardNormal.sample(rng);
        *x += sigma * z;
    }
}

/// `y = s + e` with `e` drawn from the `(seed, stream)` noise stream.
pub fn add_noise(s: &SignalSeq, p: &ChannelParams, seed: RngSeed) -> Result<Vec<f64>, ChannelError> {
    if !(p.sigma2 > 0.0) {
        return Err(ChannelError::NonPositiveVariance(p.sigma2));
    }
    let mut y = s.to_f64();
    add_noise_in_place(&mut y, p.sigma2, &mut seed.rng());
    Ok(y)
}
