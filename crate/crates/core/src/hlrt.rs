//! HLRT: constellation symbols are marginalised out, the remaining channel
//! unknowns (a, θ, N0) are ML-estimated over a bounded cube, and the
//! classifier plugs the estimates into the test statistic.
//!
//! The likelihood surface is non-convex, so the estimator is an exhaustive
//! coarse grid followed by successive halving refinements around the
//! incumbent; the returned minimum never exceeds any evaluated node. A
//! partial-marginalisation variant integrates a chosen subset of the
//! unknowns against priors (deterministic quadrature) and maximises over the
//! rest; the marginal of the product likelihood does not factor over
//! samples, so quadrature is applied to the full product.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::channel::{ChannelParams, ObservationVector};
use crate::constellation::{ConstellationFamily, ConstellationSet};
use crate::likelihood::{decide, Classification, ClassifierKind, GmmLikelihood, TestStatistic};
use crate::math::{gauss_laguerre, LogSumExp};

/// Period of the symbol-averaged likelihood in the channel phase:
/// 2π/M for M-PSK, π/2 for M-QAM.
pub fn phase_period(scheme: &ConstellationSet) -> f64 {
    match scheme.family() {
        ConstellationFamily::Psk => 2.0 * PI / scheme.order() as f64,
        ConstellationFamily::Qam => PI / 2.0,
    }
}

/// Search cube for the unknown (a, θ, N0). The phase bound is always the
/// scheme's `phase_period` and is not stored here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamCube {
    /// Upper amplitude bound A^U.
    pub amplitude_max: f64,
    /// Upper noise power bound N^U.
    pub noise_power_max: f64,
    /// Grid points per axis (≥ 2).
    pub grid_resolution: usize,
    /// Number of halving refinement passes after the coarse grid.
    pub refinements: usize,
}

impl ParamCube {
    /// Data-driven default: A^U = 4·RMS amplitude, N^U = 2·mean |r|², so the
    /// true parameters are interior for any reasonable SNR.
    pub fn from_observation(obs: &ObservationVector) -> Self {
        let mean_power = obs.mean_power();
        Self::with_bounds(4.0 * mean_power.sqrt(), 2.0 * mean_power)
    }

    pub fn with_bounds(amplitude_max: f64, noise_power_max: f64) -> Self {
        Self {
            amplitude_max,
            noise_power_max: if noise_power_max > 0.0 {
                noise_power_max
            } else {
                1e-12
            },
            grid_resolution: 15,
            refinements: 3,
        }
    }

    pub fn with_resolution(mut self, grid_resolution: usize, refinements: usize) -> Self {
        assert!(grid_resolution >= 2, "need at least 2 points per axis");
        self.grid_resolution = grid_resolution;
        self.refinements = refinements;
        self
    }

    fn noise_floor(&self, obs: &ObservationVector) -> f64 {
        let floor = 1e-9 * obs.mean_power();
        if floor > 0.0 {
            floor
        } else {
            1e-9 * self.noise_power_max
        }
    }
}

/// Inclusive linear grid.
fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1);
    if count == 1 || hi <= lo {
        return vec![lo];
    }
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

/// Half-open grid over [lo, hi): used for the periodic phase axis.
fn linspace_half_open(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1);
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / count as f64)
        .collect()
}

/// Evaluates Λ(a, θ, N0) on the grid and folds improvements into `best`.
/// Squared distances are cached per (a, θ) so the N0 axis only pays for the
/// exponentials.
fn scan_grid(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    a_values: &[f64],
    theta_values: &[f64],
    n0_values: &[f64],
    d2: &mut [f64],
    best: &mut (f64, [f64; 3]),
) {
    let n = obs.len();
    let m = scheme.symbols().len();
    let log_m_pi = (m as f64 * PI).ln();
    for &theta in theta_values {
        let rot = Complex64::from_polar(1.0, theta);
        for &a in a_values {
            let gain = a * rot;
            for (i, r) in obs.samples.iter().enumerate() {
                let row = &mut d2[i * m..(i + 1) * m];
                for (k, s) in scheme.symbols().iter().enumerate() {
                    row[k] = (r - gain * s).norm_sqr();
                }
            }
            for &n0 in n0_values {
                let inv_n0 = 1.0 / n0;
                let mut total = 0.0;
                for i in 0..n {
                    let row = &d2[i * m..(i + 1) * m];
                    let mut max = f64::NEG_INFINITY;
                    let mut sum = 0.0;
                    for &d in row {
                        let t = -d * inv_n0;
                        if t > max {
                            sum = sum * (max - t).exp() + 1.0;
                            max = t;
                        } else {
                            sum += (t - max).exp();
                        }
                    }
                    total += max + sum.ln();
                }
                let lambda = log_m_pi + n0.ln() - total / n as f64;
                if lambda < best.0 {
                    *best = (lambda, [a, theta, n0]);
                }
            }
        }
    }
}

/// ML estimate of (a, θ, N0) under `scheme`, returning the estimate and the
/// minimised test statistic Λ(r, û).
pub fn mle_estimate(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    cube: &ParamCube,
) -> (ChannelParams, f64) {
    assert!(!obs.is_empty());
    let period = phase_period(scheme);
    let res = cube.grid_resolution.max(2);
    let floor = cube.noise_floor(obs);
    let n0_max = cube.noise_power_max.max(floor);
    let mut d2 = vec![0.0; obs.len() * scheme.symbols().len()];
    let mut best = (f64::INFINITY, [0.0, 0.0, n0_max]);

    // Coarse pass. The N0 axis starts one step in: the density is singular
    // at N0 = 0, so the boundary is excluded.
    let a_values = linspace(0.0, cube.amplitude_max, res);
    let theta_values = linspace_half_open(0.0, period, res);
    let n0_values: Vec<f64> = (1..=res)
        .map(|k| (k as f64 * n0_max / res as f64).max(floor))
        .collect();
    scan_grid(obs, scheme, &a_values, &theta_values, &n0_values, &mut d2, &mut best);

    let mut a_span = cube.amplitude_max;
    let mut theta_span = period;
    let mut n0_span = n0_max;
    for _ in 0..cube.refinements {
        a_span /= 2.0;
        theta_span /= 2.0;
        n0_span /= 2.0;
        let [a_c, t_c, n_c] = best.1;
        let a_values = linspace(
            (a_c - a_span / 2.0).max(0.0),
            (a_c + a_span / 2.0).min(cube.amplitude_max),
            res,
        );
        let theta_values = linspace(t_c - theta_span / 2.0, t_c + theta_span / 2.0, res);
        let n0_values = linspace(
            (n_c - n0_span / 2.0).max(floor),
            (n_c + n0_span / 2.0).min(n0_max),
            res,
        );
        scan_grid(obs, scheme, &a_values, &theta_values, &n0_values, &mut d2, &mut best);
    }

    let [a, theta, n0] = best.1;
    (
        ChannelParams::new(a, theta.rem_euclid(period), n0),
        best.0,
    )
}

/// HLRT classifier: per hypothesis, marginalise symbols, ML-estimate
/// (a, θ, N0), then pick the hypothesis with the smallest plugged-in Λ.
pub fn classify_hlrt<R: Rng>(
    obs: &ObservationVector,
    schemes: &[ConstellationSet],
    cube: &ParamCube,
    rng: &mut R,
) -> Classification {
    assert!(!schemes.is_empty());
    let mut values = Vec::with_capacity(schemes.len());
    let mut params = Vec::with_capacity(schemes.len());
    for scheme in schemes {
        let (estimate, lambda) = mle_estimate(obs, scheme, cube);
        values.push(lambda);
        params.push(estimate);
    }
    let decision = decide(&values, rng);
    Classification {
        statistic: TestStatistic {
            values,
            kind: ClassifierKind::Hlrt,
            estimated_params: Some(params),
        },
        decision,
    }
}

/// Prior over the channel amplitude when it is marginalised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudePrior {
    /// Rayleigh with E[a²] = mean_square.
    Rayleigh { mean_square: f64 },
}

/// Prior over the channel phase when it is marginalised: uniform over one
/// period of the symbol-averaged likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhasePrior {
    UniformPeriod,
}

/// Prior over the noise power when it is marginalised: a point mass at a
/// known value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoisePowerPrior {
    Known(f64),
}

/// Which unknowns are marginalised (with their priors) and with how many
/// quadrature nodes; unlisted axes are maximised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalSpec {
    pub amplitude: Option<AmplitudePrior>,
    pub phase: Option<PhasePrior>,
    pub noise_power: Option<NoisePowerPrior>,
    pub phase_nodes: usize,
    pub amplitude_nodes: usize,
}

impl MarginalSpec {
    /// Nothing marginalised: plain HLRT.
    pub fn none() -> Self {
        Self {
            amplitude: None,
            phase: None,
            noise_power: None,
            phase_nodes: 16,
            amplitude_nodes: 16,
        }
    }

    /// Marginal phase only (uniform over one period).
    pub fn phase_only(phase_nodes: usize) -> Self {
        Self {
            phase: Some(PhasePrior::UniformPeriod),
            phase_nodes,
            ..Self::none()
        }
    }

    /// Everything marginalised: Rayleigh amplitude, uniform phase, known N0.
    pub fn full(gamma: f64, noise_power: f64, phase_nodes: usize, amplitude_nodes: usize) -> Self {
        Self {
            amplitude: Some(AmplitudePrior::Rayleigh { mean_square: gamma }),
            phase: Some(PhasePrior::UniformPeriod),
            noise_power: Some(NoisePowerPrior::Known(noise_power)),
            phase_nodes,
            amplitude_nodes,
        }
    }

    fn is_empty(&self) -> bool {
        self.amplitude.is_none() && self.phase.is_none() && self.noise_power.is_none()
    }

    fn validate(&self) {
        if self.phase.is_some() {
            assert!(self.phase_nodes >= 8, "need ≥ 8 phase quadrature nodes");
        }
        if self.amplitude.is_some() {
            assert!(
                self.amplitude_nodes >= 8,
                "need ≥ 8 amplitude quadrature nodes"
            );
        }
    }
}

/// Single-value "node list" for a maximised axis.
fn fixed(value: f64) -> Vec<(f64, f64)> {
    vec![(value, 0.0)]
}

/// log of the marginal likelihood: the marginalised axes are integrated by
/// quadrature on the full product likelihood (it does not factor over n).
fn marginal_log_likelihood(
    obs: &ObservationVector,
    scheme: &ConstellationSet,
    a_nodes: &[(f64, f64)],
    theta_nodes: &[(f64, f64)],
    n0_nodes: &[(f64, f64)],
) -> f64 {
    let mut acc = LogSumExp::new();
    for &(a, wa) in a_nodes {
        for &(theta, wt) in theta_nodes {
            for &(n0, wn) in n0_nodes {
                let gmm = GmmLikelihood::new(scheme, &ChannelParams::new(a, theta, n0));
                acc.add(wa + wt + wn + gmm.total_log_likelihood(&obs.samples));
            }
        }
    }
    acc.log_sum()
}

/// Per-hypothesis partial-HLRT statistics Λ_i = -(1/N)·log p_i(r | û_i¹),
/// the marginal computed by quadrature and the maximisation over the
/// non-marginalised axes by grid+refinement. An empty marginal set reduces
/// to the plain HLRT statistics.
pub fn partial_hlrt_statistics(
    obs: &ObservationVector,
    schemes: &[ConstellationSet],
    spec: &MarginalSpec,
    cube: &ParamCube,
) -> Vec<f64> {
    assert!(!schemes.is_empty());
    spec.validate();
    if spec.is_empty() {
        return schemes
            .iter()
            .map(|s| mle_estimate(obs, s, cube).1)
            .collect();
    }

    let res = cube.grid_resolution.max(2);
    let floor = cube.noise_floor(obs);
    let n0_max = cube.noise_power_max.max(floor);
    let n = obs.len() as f64;

    let amp_prior_nodes: Option<Vec<(f64, f64)>> = spec.amplitude.map(|prior| {
        let AmplitudePrior::Rayleigh { mean_square } = prior;
        assert!(mean_square > 0.0);
        // Substitution x = a²/Γ turns the Rayleigh prior into e^{-x} dx.
        let (xs, ws) = gauss_laguerre(spec.amplitude_nodes);
        xs.iter()
            .zip(&ws)
            .map(|(&x, &w)| ((mean_square * x).sqrt(), w.ln()))
            .collect()
    });

    let mut values = Vec::with_capacity(schemes.len());
    for scheme in schemes {
        let period = phase_period(scheme);
        let phase_prior_nodes: Option<Vec<(f64, f64)>> = spec.phase.map(|_| {
            let log_w = -(spec.phase_nodes as f64).ln();
            linspace_half_open(0.0, period, spec.phase_nodes)
                .into_iter()
                .map(|t| (t, log_w))
                .collect()
        });
        let n0_prior_node: Option<Vec<(f64, f64)>> = spec.noise_power.map(|p| {
            let NoisePowerPrior::Known(n0) = p;
            assert!(n0 > 0.0);
            fixed(n0)
        });

        let evaluate = |a: Option<f64>, t: Option<f64>, n0: Option<f64>| -> f64 {
            let a_nodes = match a {
                Some(v) => fixed(v),
                None => amp_prior_nodes.clone().unwrap(),
            };
            let t_nodes = match t {
                Some(v) => fixed(v),
                None => phase_prior_nodes.clone().unwrap(),
            };
            let n_nodes = match n0 {
                Some(v) => fixed(v),
                None => n0_prior_node.clone().unwrap(),
            };
            marginal_log_likelihood(obs, scheme, &a_nodes, &t_nodes, &n_nodes)
        };

        // Grids over the maximised axes; a single placeholder entry marks a
        // marginalised axis.
        let a_grid: Vec<Option<f64>> = match amp_prior_nodes {
            Some(_) => vec![None],
            None => linspace(0.0, cube.amplitude_max, res)
                .into_iter()
                .map(Some)
                .collect(),
        };
        let t_grid: Vec<Option<f64>> = match phase_prior_nodes {
            Some(_) => vec![None],
            None => linspace_half_open(0.0, period, res)
                .into_iter()
                .map(Some)
                .collect(),
        };
        let n_grid: Vec<Option<f64>> = match n0_prior_node {
            Some(_) => vec![None],
            None => (1..=res)
                .map(|k| Some((k as f64 * n0_max / res as f64).max(floor)))
                .collect(),
        };

        let mut best: (f64, [Option<f64>; 3]) = (f64::NEG_INFINITY, [None, None, None]);
        let scan = |a_grid: &[Option<f64>],
                    t_grid: &[Option<f64>],
                    n_grid: &[Option<f64>],
                    best: &mut (f64, [Option<f64>; 3])| {
            for &a in a_grid {
                for &t in t_grid {
                    for &n0 in n_grid {
                        let ll = evaluate(a, t, n0);
                        if ll > best.0 {
                            *best = (ll, [a, t, n0]);
                        }
                    }
                }
            }
        };
        scan(&a_grid, &t_grid, &n_grid, &mut best);

        let mut a_span = cube.amplitude_max;
        let mut t_span = period;
        let mut n_span = n0_max;
        for _ in 0..cube.refinements {
            a_span /= 2.0;
            t_span /= 2.0;
            n_span /= 2.0;
            let [a_c, t_c, n_c] = best.1;
            let a_grid: Vec<Option<f64>> = match a_c {
                None => vec![None],
                Some(c) => linspace(
                    (c - a_span / 2.0).max(0.0),
                    (c + a_span / 2.0).min(cube.amplitude_max),
                    res,
                )
                .into_iter()
                .map(Some)
                .collect(),
            };
            let t_grid: Vec<Option<f64>> = match t_c {
                None => vec![None],
                Some(c) => linspace(c - t_span / 2.0, c + t_span / 2.0, res)
                    .into_iter()
                    .map(Some)
                    .collect(),
            };
            let n_grid: Vec<Option<f64>> = match n_c {
                None => vec![None],
                Some(c) => linspace(
                    (c - n_span / 2.0).max(floor),
                    (c + n_span / 2.0).min(n0_max),
                    res,
                )
                .into_iter()
                .map(Some)
                .collect(),
            };
            scan(&a_grid, &t_grid, &n_grid, &mut best);
        }

        values.push(-best.0 / n);
    }
    values
}

/// Partial-marginalisation HLRT classifier over the statistics of
/// [`partial_hlrt_statistics`]. With nothing marginalised it delegates to
/// [`classify_hlrt`] and reproduces its decisions exactly.
pub fn classify_partial_hlrt<R: Rng>(
    obs: &ObservationVector,
    schemes: &[ConstellationSet],
    spec: &MarginalSpec,
    cube: &ParamCube,
    rng: &mut R,
) -> Classification {
    spec.validate();
    if spec.is_empty() {
        let mut c = classify_hlrt(obs, schemes, cube, rng);
        c.statistic.kind = ClassifierKind::PartialHlrt;
        return c;
    }
    let values = partial_hlrt_statistics(obs, schemes, spec, cube);
    let decision = decide(&values, rng);
    Classification {
        statistic: TestStatistic {
            values,
            kind: ClassifierKind::PartialHlrt,
            estimated_params: None,
        },
        decision,
    }
}
