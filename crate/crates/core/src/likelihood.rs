//! Per-sample Gaussian-mixture likelihoods, the normalised negative
//! log-likelihood test statistic, and the coherent ML classifier.
//!
//! Marginalising the unknown constellation symbol turns the per-sample
//! density under hypothesis i into a complex GMM with M_i equally weighted
//! components of common variance N0, centred on the (gain-rotated)
//! constellation symbols. All evaluation happens in the log domain.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::channel::{ChannelParams, ObservationVector};
use crate::constellation::ConstellationSet;

/// Which classifier produced a test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    CoherentMl,
    Hlrt,
    PartialHlrt,
    Alrt,
    Fused,
}

/// Per-hypothesis statistic values Λ_i (lower is more likely), plus the
/// channel estimates when an estimating classifier produced them.
#[derive(Debug, Clone)]
pub struct TestStatistic {
    pub values: Vec<f64>,
    pub kind: ClassifierKind,
    pub estimated_params: Option<Vec<ChannelParams>>,
}

/// The classifier's choice among hypotheses (0-based index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub chosen: usize,
    pub tie: bool,
}

/// A decision together with the statistic it was derived from.
#[derive(Debug, Clone)]
pub struct Classification {
    pub statistic: TestStatistic,
    pub decision: Decision,
}

/// Relative tolerance under which two statistic values count as tied.
///
/// Exact ties do occur (the ALRT N=1 PSK degeneracy); a deterministic break
/// would bias Pe away from the analytic 1 - 1/S, so ties are broken
/// uniformly at random.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-12;

/// Argmin over statistic values with randomised tie-breaking.
pub fn decide<R: Rng>(values: &[f64], rng: &mut R) -> Decision {
    assert!(!values.is_empty());
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min.is_finite(), "non-finite test statistic");
    let tol = TIE_RELATIVE_TOLERANCE * min.abs().max(1.0);
    let tied: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v - min <= tol)
        .map(|(i, _)| i)
        .collect();
    if tied.len() == 1 {
        Decision {
            chosen: tied[0],
            tie: false,
        }
    } else {
        Decision {
            chosen: tied[rng.random_range(0..tied.len())],
            tie: true,
        }
    }
}

/// Precomputed per-sample GMM for one hypothesis under fixed channel
/// parameters: p(r|H) = (1/M) Σ_m (1/(πN0)) exp(-|r - a e^{jθ} I_m|²/N0).
#[derive(Debug, Clone)]
pub struct GmmLikelihood {
    means: Vec<Complex64>,
    noise_power: f64,
    /// -ln(M π N0), the per-sample constant.
    log_norm: f64,
}

impl GmmLikelihood {
    pub fn new(scheme: &ConstellationSet, params: &ChannelParams) -> Self {
        assert!(params.noise_power > 0.0);
        let gain = params.gain();
        let means = scheme.symbols().iter().map(|s| gain * s).collect();
        let m = scheme.order() as f64;
        Self {
            means,
            noise_power: params.noise_power,
            log_norm: -(m * PI * params.noise_power).ln(),
        }
    }

    /// Mixture means after gain rotation.
    pub fn means(&self) -> &[Complex64] {
        &self.means
    }

    /// log p(r|H) for one sample, via streaming log-sum-exp over components.
    pub fn sample_log_likelihood(&self, r: Complex64) -> f64 {
        let inv_n0 = 1.0 / self.noise_power;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for mu in &self.means {
            let t = -(r - mu).norm_sqr() * inv_n0;
            if t > max {
                sum = sum * (max - t).exp() + 1.0;
                max = t;
            } else {
                sum += (t - max).exp();
            }
        }
        self.log_norm + max + sum.ln()
    }

    /// Σ_n log p(r_n|H) over a sample slice.
    pub fn total_log_likelihood(&self, samples: &[Complex64]) -> f64 {
        samples
            .iter()
            .map(|&r| self.sample_log_likelihood(r))
            .sum()
    }

    /// Λ = -(1/N) Σ_n log p(r_n|H).
    pub fn test_statistic(&self, obs: &ObservationVector) -> f64 {
        -self.total_log_likelihood(&obs.samples) / obs.len() as f64
    }
}

/// log p(r|H, u) for a single sample (convenience wrapper).
pub fn sample_log_likelihood(
    r: Complex64,
    scheme: &ConstellationSet,
    params: &ChannelParams,
) -> f64 {
    GmmLikelihood::new(scheme, params).sample_log_likelihood(r)
}

/// Λ(r) = -(1/N) Σ_n log p(r_n|H, u) for an observation vector.
pub fn test_statistic(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    params: &ChannelParams,
) -> f64 {
    GmmLikelihood::new(scheme, params).test_statistic(obs)
}

/// Coherent ML classifier: argmin_i Λ_i with the channel known.
pub fn classify_coherent<R: Rng>(
    obs: &ObservationVector,
    schemes: &[ConstellationSet],
    params: &ChannelParams,
    rng: &mut R,
) -> Classification {
    assert!(!schemes.is_empty());
    let values: Vec<f64> = schemes
        .iter()
        .map(|s| GmmLikelihood::new(s, params).test_statistic(obs))
        .collect();
    let decision = decide(&values, rng);
    Classification {
        statistic: TestStatistic {
            values,
            kind: ClassifierKind::CoherentMl,
            estimated_params: None,
        },
        decision,
    }
}

/// Average probability of error over equally likely hypotheses.
pub fn average_pe(per_hypothesis_pe: &[f64]) -> f64 {
    assert!(!per_hypothesis_pe.is_empty());
    for &p in per_hypothesis_pe {
        assert!((0.0..=1.0).contains(&p), "Pe out of range: {p}");
    }
    per_hypothesis_pe.iter().sum::<f64>() / per_hypothesis_pe.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{psk_set, scheme_catalog};
    use crate::rng::{stream, Lane};
    use proptest::prelude::*;

    fn bpsk_unit() -> (ConstellationSet, ChannelParams) {
        (psk_set(2).unwrap(), ChannelParams::new(1.0, 0.0, 1.0))
    }

    #[test]
    fn bpsk_log_likelihood_at_origin() {
        // Both mixture components contribute (1/π)e^{-1}.
        let (scheme, params) = bpsk_unit();
        let v = sample_log_likelihood(Complex64::new(0.0, 0.0), &scheme, &params);
        assert!((v - (-1.0 - PI.ln())).abs() < 1e-12, "v={v}");
    }

    #[test]
    fn bpsk_log_likelihood_on_a_symbol() {
        let (scheme, params) = bpsk_unit();
        let v = sample_log_likelihood(Complex64::new(1.0, 0.0), &scheme, &params);
        let expected = ((1.0 + (-4.0f64).exp()) / (2.0 * PI)).ln();
        assert!((v - expected).abs() < 1e-12, "v={v}");
    }

    #[test]
    fn statistic_of_single_origin_sample() {
        let (scheme, params) = bpsk_unit();
        let obs = ObservationVector::new(vec![Complex64::new(0.0, 0.0)]);
        let lambda = test_statistic(&obs, &scheme, &params);
        assert!((lambda - (1.0 + PI.ln())).abs() < 1e-12);
    }

    #[test]
    fn duplicating_samples_leaves_the_statistic_unchanged() {
        let (scheme, params) = bpsk_unit();
        let mut rng = stream(11, 0, 0, Lane::Noise { slot: 0 });
        let obs = crate::channel::observe(&[0, 1, 1, 0, 1], &scheme, &params, &mut rng);
        let doubled = ObservationVector::new(
            obs.samples
                .iter()
                .chain(obs.samples.iter())
                .cloned()
                .collect(),
        );
        let a = test_statistic(&obs, &scheme, &params);
        let b = test_statistic(&doubled, &scheme, &params);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn single_hypothesis_always_wins() {
        let (scheme, params) = bpsk_unit();
        let obs = ObservationVector::new(vec![Complex64::new(0.3, -0.2)]);
        let mut rng = stream(12, 0, 0, Lane::TieBreak);
        let c = classify_coherent(&obs, std::slice::from_ref(&scheme), &params, &mut rng);
        assert_eq!(c.decision.chosen, 0);
        assert!(!c.decision.tie);
    }

    #[test]
    fn identical_hypotheses_tie_and_split_evenly() {
        let scheme = psk_set(2).unwrap();
        let schemes = vec![scheme.clone(), scheme.clone()];
        let params = ChannelParams::new(1.0, 0.0, 1.0);
        let trials = 2000;
        let mut firsts = 0;
        for t in 0..trials {
            let mut sym = stream(13, 0, t, Lane::Symbols);
            let mut noise = stream(13, 0, t, Lane::Noise { slot: 0 });
            let mut tie = stream(13, 0, t, Lane::TieBreak);
            let idx = crate::channel::generate_symbols(&scheme, 8, &mut sym);
            let obs = crate::channel::observe(&idx, &scheme, &params, &mut noise);
            let c = classify_coherent(&obs, &schemes, &params, &mut tie);
            assert!(c.decision.tie);
            if c.decision.chosen == 0 {
                firsts += 1;
            }
        }
        let frac = firsts as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 0.04, "frac={frac}");
    }

    #[test]
    fn coherent_bpsk_vs_qpsk_is_reliable_at_6db() {
        // MC oracle: with N = 200 at 6 dB the coherent classifier should be
        // nearly perfect for BPSK truth.
        let schemes = scheme_catalog(&["BPSK", "QPSK"]).unwrap();
        let n0 = crate::channel::snr_to_noise_power(6.0, 1.0);
        let params = ChannelParams::new(1.0, 0.0, n0);
        let trials = 2000;
        let mut correct = 0;
        for t in 0..trials {
            let mut sym = stream(14, 0, t, Lane::Symbols);
            let mut noise = stream(14, 0, t, Lane::Noise { slot: 0 });
            let mut tie = stream(14, 0, t, Lane::TieBreak);
            let idx = crate::channel::generate_symbols(&schemes[0], 200, &mut sym);
            let obs = crate::channel::observe(&idx, &schemes[0], &params, &mut noise);
            if classify_coherent(&obs, &schemes, &params, &mut tie)
                .decision
                .chosen
                == 0
            {
                correct += 1;
            }
        }
        let acc = correct as f64 / trials as f64;
        assert!(acc > 0.99, "accuracy={acc}");
    }

    #[test]
    fn average_pe_is_the_mean() {
        assert_eq!(average_pe(&[0.0, 0.0]), 0.0);
        assert!((average_pe(&[0.1, 0.3]) - 0.2).abs() < 1e-15);
        assert!((average_pe(&[0.05, 0.10, 0.15]) - 0.10).abs() < 1e-15);
    }

    proptest! {
        // Guarded evaluation agrees with the naive sum for well-scaled input.
        #[test]
        fn guarded_matches_naive_when_safe(
            re in -2.0f64..2.0, im in -2.0f64..2.0, n0 in 0.05f64..2.0
        ) {
            let scheme = psk_set(4).unwrap();
            let params = ChannelParams::new(1.0, 0.0, n0);
            let r = Complex64::new(re, im);
            let naive: f64 = scheme
                .symbols()
                .iter()
                .map(|s| (-(r - s).norm_sqr() / n0).exp() / (4.0 * PI * n0))
                .sum::<f64>()
                .ln();
            let guarded = sample_log_likelihood(r, &scheme, &params);
            prop_assert!((naive - guarded).abs() <= 1e-10 * naive.abs().max(1.0));
        }

        // Λ is invariant under sample permutation.
        #[test]
        fn statistic_is_permutation_invariant(seed in 0u64..500) {
            let (scheme, params) = bpsk_unit();
            let mut noise = stream(seed, 0, 0, Lane::Noise { slot: 0 });
            let mut sym = stream(seed, 0, 0, Lane::Symbols);
            let idx = crate::channel::generate_symbols(&scheme, 16, &mut sym);
            let obs = crate::channel::observe(&idx, &scheme, &params, &mut noise);
            let mut reversed = obs.samples.clone();
            reversed.reverse();
            let a = test_statistic(&obs, &scheme, &params);
            let b = test_statistic(&ObservationVector::new(reversed), &scheme, &params);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
