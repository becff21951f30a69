//! ALRT under Rayleigh amplitude and uniform phase priors with known N0.
//!
//! Averaging the channel out in closed form leaves an expectation over all
//! M^N constellation sequences: for each sequence I,
//!
//!   (1/(1 + (Γ/N0)·||I||²)) · exp( (Γ/N0²)·|I^H r|² / (1 + (Γ/N0)·||I||²)
//!                                  - ||r||²/N0 )
//!
//! up to a normalising constant that is identical for all hypotheses and
//! therefore dropped everywhere. The exhaustive expectation is evaluated by
//! depth-first enumeration with incremental inner products; past a
//! configurable cap on M^N the numeric route averages the symbol-
//! marginalised product likelihood over the phase (periodic trapezoid) and
//! the Rayleigh amplitude (Gauss-Laguerre after x = a²/Γ) instead.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{PI, TAU};

use crate::channel::{ChannelParams, ObservationVector};
use crate::constellation::ConstellationSet;
use crate::error::{Error, Result};
use crate::likelihood::{decide, Classification, ClassifierKind, GmmLikelihood, TestStatistic};
use crate::math::{gauss_laguerre, LogSumExp};

/// Priors of the averaged likelihood: Rayleigh amplitude with E[a²] = Γ and
/// a known noise power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlrtPriors {
    pub mean_square_gain: f64,
    pub noise_power: f64,
}

impl AlrtPriors {
    pub fn new(mean_square_gain: f64, noise_power: f64) -> Self {
        assert!(mean_square_gain > 0.0);
        assert!(noise_power > 0.0);
        Self {
            mean_square_gain,
            noise_power,
        }
    }
}

/// Evaluation knobs for the classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlrtSettings {
    /// Largest M^N enumerated exhaustively.
    pub exhaustive_cap: u64,
    /// Phase nodes of the numeric fallback.
    pub phase_nodes: usize,
    /// Amplitude nodes of the numeric fallback.
    pub amplitude_nodes: usize,
}

impl Default for AlrtSettings {
    fn default() -> Self {
        Self {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            phase_nodes: 64,
            amplitude_nodes: 64,
        }
    }
}

pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1 << 20;

fn sequence_count_exceeds(order: u32, samples: usize, cap: u64) -> bool {
    (samples as f64) * (order as f64).ln() > (cap as f64).ln() * (1.0 + 1e-12)
}

/// Exhaustive log averaged likelihood, log(p^A(r|H) / C), by enumeration
/// over all M^N symbol sequences. Uses the default cap.
pub fn alrt_log_likelihood(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    priors: &AlrtPriors,
) -> Result<f64> {
    alrt_log_likelihood_with_cap(obs, scheme, priors, DEFAULT_EXHAUSTIVE_CAP)
}

/// Exhaustive form with an explicit cap on M^N.
pub fn alrt_log_likelihood_with_cap(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    priors: &AlrtPriors,
    cap: u64,
) -> Result<f64> {
    assert!(!obs.is_empty());
    if sequence_count_exceeds(scheme.order(), obs.len(), cap) {
        return Err(Error::ExhaustiveCapExceeded {
            order: scheme.order(),
            samples: obs.len(),
            cap,
        });
    }
    let g = priors.mean_square_gain / priors.noise_power;
    let coeff = priors.mean_square_gain / (priors.noise_power * priors.noise_power);
    let base = -obs.mean_power() * obs.len() as f64 / priors.noise_power;
    let mut acc = LogSumExp::new();
    enumerate(
        &obs.samples,
        scheme.symbols(),
        Complex64::new(0.0, 0.0),
        0.0,
        g,
        coeff,
        base,
        &mut acc,
    );
    // log of the mean over sequences; exact when all terms coincide, which
    // makes the N=1 PSK hypothesis-independence literal.
    Ok(acc.log_mean())
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    samples: &[Complex64],
    symbols: &[Complex64],
    inner: Complex64,
    power: f64,
    g: f64,
    coeff: f64,
    base: f64,
    acc: &mut LogSumExp,
) {
    match samples.split_first() {
        None => {
            let denom = 1.0 + g * power;
            acc.add(-denom.ln() + coeff * inner.norm_sqr() / denom + base);
        }
        Some((r, rest)) => {
            for s in symbols {
                enumerate(
                    rest,
                    symbols,
                    inner + s.conj() * r,
                    power + s.norm_sqr(),
                    g,
                    coeff,
                    base,
                    acc,
                );
            }
        }
    }
}

/// Numeric route: the symbol average is taken per sample first (the GMM),
/// then the product likelihood is averaged over θ ~ U[-π, π] and the
/// Rayleigh amplitude by quadrature. Returns the same log(p^A / C) scale as
/// the exhaustive form.
pub fn alrt_log_likelihood_numeric(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    priors: &AlrtPriors,
    phase_nodes: usize,
    amplitude_nodes: usize,
) -> f64 {
    assert!(!obs.is_empty());
    assert!(phase_nodes >= 16, "need ≥ 16 phase nodes");
    assert!(amplitude_nodes >= 16, "need ≥ 16 amplitude nodes");
    let n0 = priors.noise_power;
    let (xs, ws) = gauss_laguerre(amplitude_nodes);
    let log_phase_weight = -(phase_nodes as f64).ln();
    let mut acc = LogSumExp::new();
    for (&x, &w) in xs.iter().zip(&ws) {
        let a = (priors.mean_square_gain * x).sqrt();
        let log_w = w.ln() + log_phase_weight;
        for k in 0..phase_nodes {
            let theta = -PI + TAU * k as f64 / phase_nodes as f64;
            let gmm = GmmLikelihood::new(scheme, &ChannelParams::new(a, theta, n0));
            acc.add(log_w + gmm.total_log_likelihood(&obs.samples));
        }
    }
    // Undo the per-sample (πN0)^{-1} factors so the scale matches the
    // exhaustive form with C dropped.
    acc.log_sum() + obs.len() as f64 * (PI * n0).ln()
}

/// log averaged likelihood with automatic route selection under the cap.
pub fn alrt_statistic_auto(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    priors: &AlrtPriors,
    settings: &AlrtSettings,
) -> f64 {
    match alrt_log_likelihood_with_cap(obs, scheme, priors, settings.exhaustive_cap) {
        Ok(v) => v,
        Err(_) => alrt_log_likelihood_numeric(
            obs,
            scheme,
            priors,
            settings.phase_nodes,
            settings.amplitude_nodes,
        ),
    }
}

/// Multi-sensor ALRT classifier: Λ_i = -(1/L) Σ_l log p_A(r_l|H_i), sensors
/// fused under the independence assumption, argmin with random tie-break.
pub fn classify_alrt<R: Rng>(
    observations: &[ObservationVector],
    schemes: &[ConstellationSet],
    priors: &AlrtPriors,
    settings: &AlrtSettings,
    rng: &mut R,
) -> Classification {
    assert!(!observations.is_empty());
    assert!(!schemes.is_empty());
    let sensors = observations.len() as f64;
    let values: Vec<f64> = schemes
        .iter()
        .map(|scheme| {
            let total: f64 = observations
                .iter()
                .map(|obs| alrt_statistic_auto(obs, scheme, priors, settings))
                .sum();
            -total / sensors
        })
        .collect();
    let decision = decide(&values, rng);
    Classification {
        statistic: TestStatistic {
            values,
            kind: ClassifierKind::Alrt,
            estimated_params: None,
        },
        decision,
    }
}
