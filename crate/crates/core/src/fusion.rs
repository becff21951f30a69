//! Multi-sensor observation windows and soft decision fusion.
//!
//! Sensor observations are independent across sensors exactly when their
//! symbol index windows are pairwise disjoint; the fusion rule nevertheless
//! always multiplies per-sensor likelihoods (sums their logs), because that
//! is the rule whose behaviour under overlapping windows is being studied.

use rand::Rng;

use crate::constellation::ConstellationSet;
use crate::error::{Error, Result};
use crate::likelihood::{decide, Decision};

/// How sensor windows cover the transmitted symbol sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OverlapMode {
    /// I_l = {(l-1)N .. lN-1}: pairwise disjoint windows.
    Disjoint,
    /// Every sensor observes {0 .. N-1}.
    FullOverlap,
    /// Sensor l observes {offsets[l] .. offsets[l]+N-1}.
    Custom(Vec<usize>),
}

/// The symbol index windows I_l of L sensors, N indices each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowAssignment {
    sensor_count: usize,
    samples_per_sensor: usize,
    index_sets: Vec<Vec<usize>>,
}

/// Builds the window assignment for `sensor_count` sensors with
/// `samples_per_sensor` symbols each.
pub fn assign_windows(
    sensor_count: usize,
    samples_per_sensor: usize,
    mode: &OverlapMode,
) -> Result<WindowAssignment> {
    assert!(sensor_count >= 1);
    assert!(samples_per_sensor >= 1);
    let window = |start: usize| (start..start + samples_per_sensor).collect::<Vec<_>>();
    let index_sets = match mode {
        OverlapMode::Disjoint => (0..sensor_count)
            .map(|l| window(l * samples_per_sensor))
            .collect(),
        OverlapMode::FullOverlap => (0..sensor_count).map(|_| window(0)).collect(),
        OverlapMode::Custom(offsets) => {
            if offsets.len() != sensor_count {
                return Err(Error::InvalidWindows(format!(
                    "{} offsets for {} sensors",
            offsets.len(),
                    sensor_count
                )));
            }
            offsets.iter().map(|&o| window(o)).collect()
        }
    };
    Ok(WindowAssignment {
        sensor_count,
        samples_per_sensor,
        index_sets,
    })
}

impl WindowAssignment {
    pub fn sensor_count(&self) -> usize {
        self.sensor_count
    }

    pub fn samples_per_sensor(&self) -> usize {
        self.samples_per_sensor
    }

    pub fn index_sets(&self) -> &[Vec<usize>] {
        &self.index_sets
    }

    /// Length of the transmitted symbol sequence the windows draw from.
    pub fn total_symbols(&self) -> usize {
        self.index_sets
            .iter()
            .flat_map(|w| w.iter())
            .max()
            .map(|&m| m + 1)
            .unwrap_or(0)
    }

    /// Whether all windows are pairwise disjoint (the independence
    /// condition for the fused likelihood to factor).
    pub fn pairwise_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.index_sets
            .iter()
            .flat_map(|w| w.iter())
            .all(|&i| seen.insert(i))
    }
}

/// Soft fusion: sums per-sensor log-likelihoods per hypothesis (an L×S
/// matrix, one row per sensor) and picks the maximising hypothesis with a
/// random tie-break. The sum always assumes independence across sensors.
pub fn fuse_soft<R: Rng>(per_sensor_log_likelihoods: &[Vec<f64>], rng: &mut R) -> Decision {
    assert!(!per_sensor_log_likelihoods.is_empty());
    let hypotheses = per_sensor_log_likelihoods[0].len();
    assert!(hypotheses >= 1);
    let mut fused = vec![0.0; hypotheses];
    for row in per_sensor_log_likelihoods {
        assert_eq!(row.len(), hypotheses, "ragged log-likelihood matrix");
        for (acc, &v) in fused.iter_mut().zip(row) {
            assert!(v.is_finite(), "non-finite log-likelihood");
            *acc += v;
        }
    }
    // decide() minimises, so negate the fused log-likelihoods.
    for v in fused.iter_mut() {
        *v = -*v;
    }
    decide(&fused, rng)
}

/// Relative frequency of each constellation symbol in a transmitted index
/// sequence.
pub fn symbol_frequency(symbol_indices: &[usize], scheme: &ConstellationSet) -> Vec<f64> {
    assert!(!symbol_indices.is_empty());
    let mut counts = vec![0u64; scheme.order() as usize];
    for &i in symbol_indices {
        counts[i] += 1;
    }
    let n = symbol_indices.len() as f64;
    counts.iter().map(|&c| c as f64 / n).collect()
}
