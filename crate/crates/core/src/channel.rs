//! Flat block-fading channel: symbol generation and noisy observations.
//!
//! Within one trial and sensor, the complex gain a·e^{jθ} is drawn once and
//! held constant over all N samples; the additive noise is circularly
//! symmetric complex Gaussian with total variance N0 (N0/2 per part).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::TAU;

use crate::constellation::ConstellationSet;

/// One realisation of the unknown channel vector u = (a, θ, N0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Nonnegative gain.
    pub amplitude: f64,
    /// Phase, normalised into [0, 2π).
    pub phase: f64,
    /// Total complex noise variance, > 0.
    pub noise_power: f64,
}

impl ChannelParams {
    pub fn new(amplitude: f64, phase: f64, noise_power: f64) -> Self {
        assert!(amplitude >= 0.0, "amplitude must be nonnegative");
        assert!(noise_power > 0.0, "noise power must be positive");
        Self {
            amplitude,
            phase: phase.rem_euclid(TAU),
            noise_power,
        }
    }

    /// The complex gain a·e^{jθ}.
    pub fn gain(&self) -> Complex64 {
        self.amplitude * Complex64::new(self.phase.cos(), self.phase.sin())
    }
}

/// Distribution of the channel amplitude across trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeModel {
    Fixed(f64),
    /// Rayleigh with E[a²] = mean_square.
    Rayleigh { mean_square: f64 },
}

/// Distribution of the channel phase across trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseModel {
    Fixed(f64),
    UniformFullCircle,
}

/// Per-trial channel draw specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub amplitude: AmplitudeModel,
    pub phase: PhaseModel,
    pub noise_power: f64,
}

impl ChannelSpec {
    /// Degenerate spec for the coherent known-SNR scenario: a = 1, θ = 0.
    pub fn coherent(noise_power: f64) -> Self {
        Self {
            amplitude: AmplitudeModel::Fixed(1.0),
            phase: PhaseModel::Fixed(0.0),
            noise_power,
        }
    }

    /// Mean squared gain E[a²] of the amplitude model.
    pub fn mean_square_gain(&self) -> f64 {
        match self.amplitude {
            AmplitudeModel::Fixed(a) => a * a,
            AmplitudeModel::Rayleigh { mean_square } => mean_square,
        }
    }
}

/// N complex baseband samples from one sensor, together with the time
/// indices of the transmitted symbols it observed.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationVector {
    pub samples: Vec<Complex64>,
    pub indices: Vec<usize>,
}

impl ObservationVector {
    pub fn new(samples: Vec<Complex64>) -> Self {
        assert!(!samples.is_empty(), "observation vector must be nonempty");
        let indices = (0..samples.len()).collect();
        Self { samples, indices }
    }

    /// Replaces the time indices (e.g. with a sensor's window I_l).
    pub fn reindexed(mut self, indices: Vec<usize>) -> Self {
        assert_eq!(indices.len(), self.samples.len());
        self.indices = indices;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean squared sample magnitude.
    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|r| r.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }
}

/// Draws one ChannelParams realisation from the spec.
pub fn draw_channel<R: Rng>(spec: &ChannelSpec, rng: &mut R) -> ChannelParams {
    assert!(spec.noise_power > 0.0);
    let amplitude = match spec.amplitude {
        AmplitudeModel::Fixed(a) => {
            assert!(a >= 0.0);
            a
        }
        AmplitudeModel::Rayleigh { mean_square } => {
            assert!(mean_square > 0.0);
            // a² is exponential with mean Γ, so E[a²] = Γ.
            let u: f64 = rng.random();
            (-mean_square * (1.0 - u).ln()).sqrt()
        }
    };
    let phase = match spec.phase {
        PhaseModel::Fixed(theta) => theta,
        PhaseModel::UniformFullCircle => rng.random::<f64>() * TAU,
    };
    ChannelParams::new(amplitude, phase, spec.noise_power)
}

/// Draws `count` i.i.d. uniform symbol indices over {0..M-1}.
pub fn generate_symbols<R: Rng>(
    scheme: &ConstellationSet,
    count: usize,
    rng: &mut R,
) -> Vec<usize> {
    assert!(count >= 1);
    let order = scheme.order() as usize;
    (0..count).map(|_| rng.random_range(0..order)).collect()
}

/// One draw of circularly symmetric complex Gaussian noise with total
/// variance `noise_power` (each part carries noise_power/2).
pub fn noise_sample<R: Rng>(noise_power: f64, rng: &mut R) -> Complex64 {
    let sigma = (noise_power / 2.0).sqrt();
    let normal = Normal::new(0.0, sigma).expect("valid noise sigma");
    Complex64::new(normal.sample(rng), normal.sample(rng))
}

/// Produces r_n = a·e^{jθ}·I_n + w_n for the given symbol indices, with one
/// independent complex Gaussian noise draw per sample.
pub fn observe<R: Rng>(
    symbol_indices: &[usize],
    scheme: &ConstellationSet,
    channel: &ChannelParams,
    rng: &mut R,
) -> ObservationVector {
    let gain = channel.gain();
    let symbols = scheme.symbols();
    let samples = symbol_indices
        .iter()
        .map(|&idx| gain * symbols[idx] + noise_sample(channel.noise_power, rng))
        .collect();
    ObservationVector::new(samples)
}

/// Converts an average channel SNR in dB (E[a²]/N0) into the noise power N0.
pub fn snr_to_noise_power(snr_db: f64, mean_square_gain: f64) -> f64 {
    assert!(snr_db.is_finite());
    assert!(mean_square_gain > 0.0);
    mean_square_gain / 10f64.powf(snr_db / 10.0)
}
