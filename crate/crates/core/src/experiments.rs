//! Monte Carlo experiment harness: Pe versus N, L, or (N, L) pairs at a
//! fixed L·N product, with equal trial allocation across the true
//! hypotheses and Wilson confidence intervals on the pooled error rate.
//!
//! Every trial owns its random streams (see [`crate::rng`]), so curves are
//! reproducible under a master seed, independent of worker count, and sweep
//! points are coupled through shared draws: the observations of a smaller N
//! are a prefix of those of a larger N, disjoint fusion of L·N = const
//! samples is the same data however partitioned, and the Theorem-5 paired
//! modes differ only where overlapping windows repeat symbols.

use crate::alrt::{alrt_statistic_auto, AlrtPriors, AlrtSettings};
use crate::channel::{
    draw_channel, generate_symbols, noise_sample, snr_to_noise_power, AmplitudeModel,
    ChannelParams, ChannelSpec, ObservationVector, PhaseModel,
};
use crate::constellation::{scheme_catalog, ConstellationSet};
use crate::error::{Error, Result};
use crate::fusion::{assign_windows, fuse_soft, OverlapMode, WindowAssignment};
use crate::hlrt::{
    mle_estimate, partial_hlrt_statistics, AmplitudePrior, MarginalSpec, NoisePowerPrior,
    ParamCube, PhasePrior,
};
use crate::likelihood::{average_pe, GmmLikelihood};
use crate::math::wilson_interval;
use crate::parallel::count_over_trials;
use crate::rng::{stream, Lane};

const Z95: f64 = 1.96;

/// Which classification scenario an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Coherent reception, channel and SNR known: a = 1, θ = 0.
    CoherentKnownSnr,
    /// Noncoherent, unknown (a, θ, N0): HLRT with grid ML estimation.
    NoncoherentHlrt,
    /// HLRT with a marginalised parameter subset.
    PartialHlrt,
    /// Rayleigh-faded amplitude, uniform phase, known N0: ALRT.
    AlrtRayleigh,
    /// Coherent multi-sensor fusion, overlapping vs disjoint windows.
    FusionTheorem5,
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::CoherentKnownSnr => "coherent",
            Scenario::NoncoherentHlrt => "hlrt",
            Scenario::PartialHlrt => "partial-hlrt",
            Scenario::AlrtRayleigh => "alrt",
            Scenario::FusionTheorem5 => "theorem5",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "coherent" => Ok(Scenario::CoherentKnownSnr),
            "hlrt" => Ok(Scenario::NoncoherentHlrt),
            "partial-hlrt" | "partial_hlrt" => Ok(Scenario::PartialHlrt),
            "alrt" => Ok(Scenario::AlrtRayleigh),
            "theorem5" => Ok(Scenario::FusionTheorem5),
            other => Err(Error::InvalidConfig(format!("unknown scenario '{other}'"))),
        }
    }
}

/// What the x axis of a Pe curve sweeps over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sweep {
    /// Single sensor, Pe versus the number of observations N.
    OverN { n_values: Vec<usize> },
    /// Pe versus the sensor count L at a fixed per-sensor N.
    OverL {
        l_values: Vec<usize>,
        samples_per_sensor: usize,
    },
    /// (N, L) pairs with L·N fixed; swept and reported over N.
    FixedProduct {
        product: usize,
        n_values: Vec<usize>,
    },
}

/// One resolved sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepPoint {
    pub samples_per_sensor: usize,
    pub sensors: usize,
    /// The reported x value (N or L).
    pub value: u64,
}

impl Sweep {
    pub fn variable(&self) -> &'static str {
        match self {
            Sweep::OverN { .. } | Sweep::FixedProduct { .. } => "N",
            Sweep::OverL { .. } => "L",
        }
    }

    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let check_values = |values: &[usize]| -> Result<()> {
            if values.is_empty() {
                return Err(Error::InvalidConfig("empty sweep".into()));
            }
            if values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidConfig(
                    "sweep values must be strictly increasing".into(),
                ));
            }
            if values[0] == 0 {
                return Err(Error::InvalidConfig("sweep values must be positive".into()));
            }
            Ok(())
        };
        match self {
            Sweep::OverN { n_values } => {
                check_values(n_values)?;
                Ok(n_values
                    .iter()
                    .map(|&n| SweepPoint {
                        samples_per_sensor: n,
                        sensors: 1,
                        value: n as u64,
                    })
                    .collect())
            }
            Sweep::OverL {
                l_values,
                samples_per_sensor,
            } => {
                check_values(l_values)?;
                if *samples_per_sensor == 0 {
                    return Err(Error::InvalidConfig(
                        "samples_per_sensor must be positive".into(),
                    ));
                }
                Ok(l_values
                    .iter()
                    .map(|&l| SweepPoint {
                        samples_per_sensor: *samples_per_sensor,
                        sensors: l,
                        value: l as u64,
                    })
                    .collect())
            }
            Sweep::FixedProduct { product, n_values } => {
                check_values(n_values)?;
                n_values
                    .iter()
                    .map(|&n| {
                        if *product == 0 || product % n != 0 {
                            Err(Error::InvalidConfig(format!(
                                "N={n} does not divide the product {product}"
                            )))
                        } else {
                            Ok(SweepPoint {
                                samples_per_sensor: n,
                                sensors: product / n,
                                value: n as u64,
                            })
                        }
                    })
                    .collect()
            }
        }
    }
}

/// An unknown axis marginalised by the partial-HLRT scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalAxis {
    Amplitude,
    Phase,
    NoisePower,
}

/// Classifier knobs shared by the scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierSettings {
    pub grid_resolution: usize,
    pub refinements: usize,
    pub phase_nodes: usize,
    pub amplitude_nodes: usize,
    pub exhaustive_cap: u64,
    /// Mean-square Rayleigh gain Γ (ALRT scenario and amplitude priors).
    pub gamma: f64,
    /// Axes marginalised by the partial-HLRT scenario.
    pub marginalize: Vec<MarginalAxis>,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        Self {
            grid_resolution: 15,
            refinements: 3,
            phase_nodes: 32,
            amplitude_nodes: 32,
            exhaustive_cap: crate::alrt::DEFAULT_EXHAUSTIVE_CAP,
            gamma: 1.0,
            marginalize: vec![MarginalAxis::Phase],
        }
    }
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub schemes: Vec<String>,
    pub snr_db_list: Vec<f64>,
    pub sweep: Sweep,
    pub trials: usize,
    pub seed: u64,
    pub classifier: ClassifierSettings,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 100 {
            return Err(Error::InvalidConfig(format!(
                "need at least 100 trials per point, got {}",
                self.trials
            )));
        }
        if self.snr_db_list.is_empty() {
            return Err(Error::InvalidConfig("empty SNR list".into()));
        }
        if self.classifier.gamma <= 0.0 {
            return Err(Error::InvalidConfig("gamma must be positive".into()));
        }
        scheme_catalog(&self.schemes)?;
        self.sweep.points()?;
        if self.scenario == Scenario::FusionTheorem5
            && !matches!(self.sweep, Sweep::FixedProduct { .. })
        {
            return Err(Error::InvalidConfig(
                "the theorem5 scenario sweeps (N, L) pairs at a fixed product".into(),
            ));
        }
        Ok(())
    }

    /// CI variant: a tenth of the trials (floor 100), wider intervals.
    pub fn fast(mut self) -> Self {
        self.trials = (self.trials / 10).max(100);
        self
    }
}

/// A Monte Carlo Pe point: pooled estimate, Wilson 95% interval, and the
/// per-hypothesis breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct PeEstimate {
    pub pe: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub per_hypothesis: Vec<f64>,
}

impl PeEstimate {
    /// Standard error implied by the Wilson interval half-width.
    pub fn standard_error(&self) -> f64 {
        (self.ci_high - self.ci_low) / (2.0 * Z95)
    }
}

/// Averages per-hypothesis error rates (equal priors) and attaches a Wilson
/// 95% interval on the pooled error indicator.
pub fn estimate_pe(error_counts: &[u64], trials_per_hypothesis: &[u64]) -> PeEstimate {
    assert_eq!(error_counts.len(), trials_per_hypothesis.len());
    assert!(!error_counts.is_empty());
    let rates: Vec<f64> = error_counts
        .iter()
        .zip(trials_per_hypothesis)
        .map(|(&e, &t)| {
            assert!(t > 0 && e <= t, "bad counts: {e}/{t}");
            e as f64 / t as f64
        })
        .collect();
    let pe = average_pe(&rates);
    let total_errors: u64 = error_counts.iter().sum();
    let total_trials: u64 = trials_per_hypothesis.iter().sum();
    let (ci_low, ci_high) = wilson_interval(total_errors, total_trials, Z95);
    PeEstimate {
        pe,
        trials: total_trials,
        ci_low,
        ci_high,
        per_hypothesis: rates,
    }
}

/// One point of a Pe curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PePoint {
    pub sweep_value: u64,
    pub estimate: PeEstimate,
}

/// A Pe curve over N or L at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct PeCurve {
    pub scenario: String,
    pub sweep_var: String,
    pub snr_db: f64,
    pub seed: u64,
    pub points: Vec<PePoint>,
}

/// Per-sensor, per-hypothesis log-likelihood evaluation for one scenario.
enum RowEvaluator<'a> {
    Coherent {
        evaluators: Vec<GmmLikelihood>,
    },
    Hlrt {
        schemes: &'a [ConstellationSet],
        resolution: usize,
        refinements: usize,
    },
    Partial {
        schemes: &'a [ConstellationSet],
        spec: MarginalSpec,
        resolution: usize,
        refinements: usize,
    },
    Alrt {
        schemes: &'a [ConstellationSet],
        priors: AlrtPriors,
        settings: AlrtSettings,
    },
}

impl RowEvaluator<'_> {
    /// log p(r_l | H_i) for every hypothesis i (up to hypothesis-independent
    /// constants within each scenario).
    fn row(&self, obs: &ObservationVector) -> Vec<f64> {
        match self {
            RowEvaluator::Coherent { evaluators } => evaluators
                .iter()
                .map(|g| g.total_log_likelihood(&obs.samples))
                .collect(),
            RowEvaluator::Hlrt {
                schemes,
                resolution,
                refinements,
            } => {
                let cube =
                    ParamCube::from_observation(obs).with_resolution(*resolution, *refinements);
                schemes
                    .iter()
                    .map(|s| -mle_estimate(obs, s, &cube).1 * obs.len() as f64)
                    .collect()
            }
            RowEvaluator::Partial {
                schemes,
                spec,
                resolution,
                refinements,
            } => {
                let cube =
                    ParamCube::from_observation(obs).with_resolution(*resolution, *refinements);
                partial_hlrt_statistics(obs, schemes, spec, &cube)
                    .iter()
                    .map(|lambda| -lambda * obs.len() as f64)
                    .collect()
            }
            RowEvaluator::Alrt {
                schemes,
                priors,
                settings,
            } => schemes
                .iter()
                .map(|s| alrt_statistic_auto(obs, s, priors, settings))
                .collect(),
        }
    }
}

/// How each sensor's channel realisation is produced.
enum TrialChannel {
    Known(ChannelParams),
    Draw(ChannelSpec),
}

fn build_evaluator<'a>(
    scenario: Scenario,
    schemes: &'a [ConstellationSet],
    settings: &ClassifierSettings,
    noise_power: f64,
) -> (RowEvaluator<'a>, TrialChannel) {
    match scenario {
        Scenario::CoherentKnownSnr | Scenario::FusionTheorem5 => {
            let known = ChannelParams::new(1.0, 0.0, noise_power);
            (
                RowEvaluator::Coherent {
                    evaluators: schemes
                        .iter()
                        .map(|s| GmmLikelihood::new(s, &known))
                        .collect(),
                },
                TrialChannel::Known(known),
            )
        }
        Scenario::NoncoherentHlrt => (
            RowEvaluator::Hlrt {
                schemes,
                resolution: settings.grid_resolution,
                refinements: settings.refinements,
            },
            TrialChannel::Draw(ChannelSpec {
                amplitude: AmplitudeModel::Fixed(1.0),
                phase: PhaseModel::UniformFullCircle,
                noise_power,
            }),
        ),
        Scenario::PartialHlrt => {
            let spec = MarginalSpec {
                amplitude: settings
                    .marginalize
                    .contains(&MarginalAxis::Amplitude)
                    .then_some(AmplitudePrior::Rayleigh {
                        mean_square: settings.gamma,
                    }),
                phase: settings
                    .marginalize
                    .contains(&MarginalAxis::Phase)
                    .then_some(PhasePrior::UniformPeriod),
                noise_power: settings
                    .marginalize
                    .contains(&MarginalAxis::NoisePower)
                    .then_some(NoisePowerPrior::Known(noise_power)),
                phase_nodes: settings.phase_nodes,
                amplitude_nodes: settings.amplitude_nodes,
            };
            let channel = TrialChannel::Draw(ChannelSpec {
                amplitude: AmplitudeModel::Fixed(1.0),
                phase: PhaseModel::UniformFullCircle,
                noise_power,
            });
            (
                RowEvaluator::Partial {
                    schemes,
                    spec,
                    resolution: settings.grid_resolution,
                    refinements: settings.refinements,
                },
                channel,
            )
        }
        Scenario::AlrtRayleigh => (
            RowEvaluator::Alrt {
                schemes,
                priors: AlrtPriors::new(settings.gamma, noise_power),
                settings: AlrtSettings {
                    exhaustive_cap: settings.exhaustive_cap,
                    phase_nodes: settings.phase_nodes.max(16),
                    amplitude_nodes: settings.amplitude_nodes.max(16),
                },
            },
            TrialChannel::Draw(ChannelSpec {
                amplitude: AmplitudeModel::Rayleigh {
                    mean_square: settings.gamma,
                },
                phase: PhaseModel::UniformFullCircle,
                noise_power,
            }),
        ),
    }
}

/// Runs one trial: draws the trial's symbols, channels and noise from its
/// own streams, classifies, and returns the chosen hypothesis index.
fn run_one_trial(
    schemes: &[ConstellationSet],
    hypothesis: usize,
    trial: u64,
    seed: u64,
    windows: &WindowAssignment,
    channel: &TrialChannel,
    evaluator: &RowEvaluator<'_>,
) -> usize {
    let truth = &schemes[hypothesis];
    let mut sym_rng = stream(seed, hypothesis, trial, Lane::Symbols);
    let symbols = generate_symbols(truth, windows.total_symbols(), &mut sym_rng);
    let n = windows.samples_per_sensor();
    let matrix: Vec<Vec<f64>> = windows
        .index_sets()
        .iter()
        .enumerate()
        .map(|(sensor, window)| {
            let params = match channel {
                TrialChannel::Known(p) => *p,
                TrialChannel::Draw(spec) => {
                    let mut chan_rng = stream(seed, hypothesis, trial, Lane::Channel { sensor });
                    draw_channel(spec, &mut chan_rng)
                }
            };
            let gain = params.gain();
            let samples = window
                .iter()
                .enumerate()
                .map(|(k, &time_index)| {
                    let mut noise_rng =
                        stream(seed, hypothesis, trial, Lane::Noise { slot: sensor * n + k });
                    gain * truth.symbols()[symbols[time_index]]
                        + noise_sample(params.noise_power, &mut noise_rng)
                })
                .collect();
            let obs = ObservationVector::new(samples).reindexed(window.clone());
            evaluator.row(&obs)
        })
        .collect();
    let mut tie_rng = stream(seed, hypothesis, trial, Lane::TieBreak);
    fuse_soft(&matrix, &mut tie_rng).chosen
}

fn run_point(
    schemes: &[ConstellationSet],
    scenario: Scenario,
    settings: &ClassifierSettings,
    noise_power: f64,
    point: SweepPoint,
    mode: &OverlapMode,
    trials_per_hypothesis: u64,
    seed: u64,
) -> Result<PeEstimate> {
    let windows = assign_windows(point.sensors, point.samples_per_sensor, mode)?;
    let (evaluator, channel) = build_evaluator(scenario, schemes, settings, noise_power);
    let error_counts: Vec<u64> = (0..schemes.len())
        .map(|hyp| {
            count_over_trials(trials_per_hypothesis, |t| {
                run_one_trial(schemes, hyp, t, seed, &windows, &channel, &evaluator) != hyp
            })
        })
        .collect();
    Ok(estimate_pe(
        &error_counts,
        &vec![trials_per_hypothesis; schemes.len()],
    ))
}

fn sweep_curves(config: &ExperimentConfig, mode: &OverlapMode, label: &str) -> Result<Vec<PeCurve>> {
    let schemes = scheme_catalog(&config.schemes)?;
    let points = config.sweep.points()?;
    let trials_per_hypothesis = (config.trials / schemes.len()).max(1) as u64;
    let mean_square_gain = match config.scenario {
        Scenario::AlrtRayleigh => config.classifier.gamma,
        _ => 1.0,
    };
    config
        .snr_db_list
        .iter()
        .map(|&snr_db| {
            let noise_power = snr_to_noise_power(snr_db, mean_square_gain);
            let curve_points = points
                .iter()
                .map(|&p| {
                    Ok(PePoint {
                        sweep_value: p.value,
                        estimate: run_point(
                            &schemes,
                            config.scenario,
                            &config.classifier,
                            noise_power,
                            p,
                            mode,
                            trials_per_hypothesis,
                            config.seed,
                        )?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PeCurve {
                scenario: label.to_string(),
                sweep_var: config.sweep.variable().to_string(),
                snr_db,
                seed: config.seed,
                points: curve_points,
            })
        })
        .collect()
}

/// Runs the configured sweep and returns one Pe curve per SNR.
pub fn run_pe_sweep(config: &ExperimentConfig) -> Result<Vec<PeCurve>> {
    config.validate()?;
    if config.scenario == Scenario::FusionTheorem5 {
        return Err(Error::InvalidConfig(
            "the theorem5 scenario is paired; use run_theorem5_study".into(),
        ));
    }
    sweep_curves(config, &OverlapMode::Disjoint, config.scenario.label())
}

/// One (N, L) point of a Theorem-5 comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaPoint {
    pub samples_per_sensor: usize,
    pub sensors: usize,
    /// |Pe(FullOverlap) - Pe(Disjoint)|.
    pub delta: f64,
    /// sqrt of summed squared standard errors of the two estimates.
    pub combined_se: f64,
}

/// Paired overlap/disjoint curves at one SNR with per-point deltas.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem5Study {
    pub snr_db: f64,
    pub product: usize,
    pub full_overlap: PeCurve,
    pub disjoint: PeCurve,
    pub deltas: Vec<DeltaPoint>,
}

/// Runs the fused classifier under complete window overlap and under
/// disjoint windows on shared seeds, one study per SNR.
pub fn run_theorem5_study(config: &ExperimentConfig) -> Result<Vec<Theorem5Study>> {
    config.validate()?;
    if config.scenario != Scenario::FusionTheorem5 {
        return Err(Error::InvalidConfig(
            "run_theorem5_study needs the theorem5 scenario".into(),
        ));
    }
    let Sweep::FixedProduct { product, .. } = &config.sweep else {
        return Err(Error::InvalidConfig(
            "theorem5 study needs a fixed-product sweep".into(),
        ));
    };
    let points = config.sweep.points()?;
    let overlap = sweep_curves(config, &OverlapMode::FullOverlap, "theorem5/full-overlap")?;
    let disjoint = sweep_curves(config, &OverlapMode::Disjoint, "theorem5/disjoint")?;
    Ok(overlap
        .into_iter()
        .zip(disjoint)
        .map(|(o, d)| {
            let deltas = o
                .points
                .iter()
                .zip(&d.points)
                .zip(&points)
                .map(|((po, pd), sp)| DeltaPoint {
                    samples_per_sensor: sp.samples_per_sensor,
                    sensors: sp.sensors,
                    delta: (po.estimate.pe - pd.estimate.pe).abs(),
                    combined_se: (po.estimate.standard_error().powi(2)
                        + pd.estimate.standard_error().powi(2))
                    .sqrt(),
                })
                .collect();
            Theorem5Study {
                snr_db: o.snr_db,
                product: *product,
                full_overlap: o,
                disjoint: d,
                deltas,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            scenario: Scenario::CoherentKnownSnr,
            schemes: vec!["BPSK".into(), "QPSK".into()],
            snr_db_list: vec![0.0],
            sweep: Sweep::OverN { n_values: vec![1] },
            trials: 100,
            seed: 7,
            classifier: ClassifierSettings::default(),
        }
    }

    #[test]
    fn wilson_pooling_matches_the_examples() {
        let zero = estimate_pe(&[0], &[1000]);
        assert_eq!(zero.pe, 0.0);
        assert!((zero.ci_high - 0.003826898586390522).abs() < 1e-12);

        let half = estimate_pe(&[500, 500], &[1000, 1000]);
        assert_eq!(half.pe, 0.5);

        let avg = estimate_pe(&[100, 300], &[1000, 1000]);
        assert!((avg.pe - 0.2).abs() < 1e-15);
        assert!(avg.ci_low <= avg.pe && avg.pe <= avg.ci_high);
        assert_eq!(avg.per_hypothesis, vec![0.1, 0.3]);
    }

    #[test]
    fn sweep_points_resolve_sensor_counts() {
        let over_n = Sweep::OverN {
            n_values: vec![1, 5],
        };
        assert_eq!(
            over_n.points().unwrap(),
            vec![
                SweepPoint { samples_per_sensor: 1, sensors: 1, value: 1 },
                SweepPoint { samples_per_sensor: 5, sensors: 1, value: 5 },
            ]
        );
        let over_l = Sweep::OverL {
            l_values: vec![1, 4],
            samples_per_sensor: 4,
        };
        assert_eq!(over_l.points().unwrap()[1].sensors, 4);
        assert_eq!(over_l.variable(), "L");

        let product = Sweep::FixedProduct {
            product: 1000,
            n_values: vec![1, 2, 5, 10],
        };
        let pts = product.points().unwrap();
        assert!(pts.iter().all(|p| p.samples_per_sensor * p.sensors == 1000));

        let bad = Sweep::FixedProduct {
            product: 1000,
            n_values: vec![3],
        };
        assert!(bad.points().is_err());
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let mut c = tiny_config();
        c.trials = 99;
        assert!(c.validate().is_err());

        let mut c = tiny_config();
        c.schemes = vec!["13PSK".into()];
        assert!(c.validate().is_err());

        let mut c = tiny_config();
        c.sweep = Sweep::OverN {
            n_values: vec![5, 5],
        };
        assert!(c.validate().is_err());

        let mut c = tiny_config();
        c.scenario = Scenario::FusionTheorem5;
        assert!(c.validate().is_err());

        assert!(tiny_config().validate().is_ok());
    }

    #[test]
    fn fast_mode_divides_trials_with_a_floor() {
        let mut c = tiny_config();
        c.trials = 2000;
        assert_eq!(c.clone().fast().trials, 200);
        c.trials = 500;
        assert_eq!(c.fast().trials, 100);
    }

    #[test]
    fn sanity_run_completes_with_a_valid_estimate() {
        let curves = run_pe_sweep(&tiny_config()).unwrap();
        assert_eq!(curves.len(), 1);
        let p = &curves[0].points[0];
        assert!((0.0..=1.0).contains(&p.estimate.pe));
        assert_eq!(p.estimate.trials, 100);
    }

    #[test]
    fn identical_configs_give_identical_curves() {
        let config = ExperimentConfig {
            sweep: Sweep::OverN {
                n_values: vec![1, 4],
            },
            trials: 200,
            ..tiny_config()
        };
        let a = run_pe_sweep(&config).unwrap();
        let b = run_pe_sweep(&config).unwrap();
        assert_eq!(a, b);
        let mut reseeded = config;
        reseeded.seed = 8;
        assert_ne!(run_pe_sweep(&reseeded).unwrap(), a);
    }

    #[test]
    fn disjoint_fusion_depends_only_on_the_total_sample_count() {
        // Noise is keyed by sample slot, so every (N, L) partition of the
        // same product classifies literally the same data.
        let config = ExperimentConfig {
            schemes: vec!["16PSK".into(), "16QAM".into()],
            sweep: Sweep::FixedProduct {
                product: 8,
                n_values: vec![1, 2, 4, 8],
            },
            trials: 300,
            ..tiny_config()
        };
        let curves = run_pe_sweep(&config).unwrap();
        let pes: Vec<f64> = curves[0].points.iter().map(|p| p.estimate.pe).collect();
        for w in pes.windows(2) {
            assert_eq!(w[0], w[1], "disjoint Pe should not depend on the split");
        }
    }

    #[test]
    fn theorem5_pairs_coincide_for_a_single_sensor() {
        let config = ExperimentConfig {
            scenario: Scenario::FusionTheorem5,
            schemes: vec!["16PSK".into(), "16QAM".into()],
            sweep: Sweep::FixedProduct {
                product: 4,
                n_values: vec![1, 2, 4],
            },
            trials: 200,
            ..tiny_config()
        };
        let studies = run_theorem5_study(&config).unwrap();
        let study = &studies[0];
        // At N = product the two modes are the same single-sensor system.
        let last = study.deltas.last().unwrap();
        assert_eq!(last.sensors, 1);
        assert_eq!(last.delta, 0.0);
    }
}
