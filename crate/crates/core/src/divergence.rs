//! Monte Carlo Kullback-Leibler divergence estimation between modulation
//! likelihoods: the identifiability diagnostics behind the classifiers'
//! asymptotic behaviour.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::channel::ChannelParams;
use crate::constellation::ConstellationSet;
use crate::error::{Error, Result};
use crate::likelihood::GmmLikelihood;
use crate::parallel::map_collect;
use crate::rng::{stream, Lane};

/// A Monte Carlo KL estimate D(p‖q) in nats with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

impl KlEstimate {
    /// Whether the estimate is positive with the given sigma margin.
    pub fn positive_with_margin(&self, sigmas: f64) -> bool {
        self.value > sigmas * self.std_error
    }
}

/// Estimates D(p‖q) = E_p[log p(x) - log q(x)] by sampling from p.
///
/// Fails if any sampled point yields a non-finite log-ratio, which signals a
/// support mismatch between the densities.
pub fn kl_mc<T, R, S, P, Q>(
    mut sample: S,
    log_p: P,
    log_q: Q,
    n_samples: usize,
    rng: &mut R,
) -> Result<KlEstimate>
where
    R: Rng,
    S: FnMut(&mut R) -> T,
    P: Fn(&T) -> f64,
    Q: Fn(&T) -> f64,
{
    assert!(n_samples >= 1);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..n_samples {
        let x = sample(rng);
        let ratio = log_p(&x) - log_q(&x);
        if !ratio.is_finite() {
            return Err(Error::NonFiniteLogRatio(i));
        }
        sum += ratio;
        sum_sq += ratio * ratio;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let std_error = if n_samples > 1 {
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(KlEstimate {
        value: mean,
        std_error,
        n_samples,
    })
}

/// Draws one sample from the per-sample GMM of `scheme` under `params`.
pub fn sample_from_gmm<R: Rng>(
    scheme: &ConstellationSet,
    params: &ChannelParams,
    rng: &mut R,
) -> num_complex::Complex64 {
    let idx = rng.random_range(0..scheme.order() as usize);
    let sigma = (params.noise_power / 2.0).sqrt();
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    params.gain() * scheme.symbols()[idx]
        + num_complex::Complex64::new(normal.sample(rng), normal.sample(rng))
}

/// A coarse per-axis grid over (a, θ, N0); at most 5 points per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub noise_powers: Vec<f64>,
}

impl ParamGrid {
    pub fn single(params: &ChannelParams) -> Self {
        Self {
            amplitudes: vec![params.amplitude],
            phases: vec![params.phase],
            noise_powers: vec![params.noise_power],
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, axis) in [
            ("amplitudes", &self.amplitudes),
            ("phases", &self.phases),
            ("noise_powers", &self.noise_powers),
        ] {
            if axis.is_empty() || axis.len() > 5 {
                return Err(Error::InvalidConfig(format!(
                    "grid axis {name} must have 1..=5 points, got {}",
                    axis.len()
                )));
            }
        }
        Ok(())
    }

    fn points(&self) -> Vec<ChannelParams> {
        let mut out = Vec::new();
        for &a in &self.amplitudes {
            for &t in &self.phases {
                for &n0 in &self.noise_powers {
                    out.push(ChannelParams::new(a, t, n0));
                }
            }
        }
        out
    }
}

/// The grid point that minimises the estimated KL distance, together with
/// its estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub params_i: ChannelParams,
    pub params_j: ChannelParams,
    pub estimate: KlEstimate,
}

/// Scans D(p_i(·|u_i) ‖ p_j(·|u_j)) over the cartesian product of two
/// parameter grids and returns the minimising pair: the worst-case
/// separation between the two hypotheses over the searched cube.
pub fn lemma1_scan(
    scheme_i: &ConstellationSet,
    scheme_j: &ConstellationSet,
    grid_i: &ParamGrid,
    grid_j: &ParamGrid,
    n_samples: usize,
    seed: u64,
) -> Result<ScanResult> {
    grid_i.validate()?;
    grid_j.validate()?;
    let points_i = grid_i.points();
    let points_j = grid_j.points();
    let combos: Vec<(ChannelParams, ChannelParams)> = points_i
        .iter()
        .flat_map(|ui| points_j.iter().map(move |uj| (*ui, *uj)))
        .collect();
    let estimates: Vec<Result<KlEstimate>> = map_collect(combos.len(), |k| {
        let (ui, uj) = combos[k];
        let p = GmmLikelihood::new(scheme_i, &ui);
        let q = GmmLikelihood::new(scheme_j, &uj);
        let mut rng = stream(seed, 0, k as u64, Lane::Aux { index: 0 });
        kl_mc(
            |rng| sample_from_gmm(scheme_i, &ui, rng),
            |r| p.sample_log_likelihood(*r),
            |r| q.sample_log_likelihood(*r),
            n_samples,
            &mut rng,
        )
    });
    let mut best: Option<ScanResult> = None;
    for (k, est) in estimates.into_iter().enumerate() {
        let est = est?;
        if best.map_or(true, |b| est.value < b.estimate.value) {
            best = Some(ScanResult {
                params_i: combos[k].0,
                params_j: combos[k].1,
                estimate: est,
            });
        }
    }
    Ok(best.expect("nonempty grid"))
}
