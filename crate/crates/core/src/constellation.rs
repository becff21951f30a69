//! PSK and QAM constellation sets with unit average power.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Modulation family of a constellation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationFamily {
    Psk,
    Qam,
}

impl ConstellationFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ConstellationFamily::Psk => "PSK",
            ConstellationFamily::Qam => "QAM",
        }
    }
}

/// A named constellation: the hypothesis H_i of the classification problem.
///
/// Symbols are stored in a canonical deterministic order (increasing angle
/// for PSK, grid scan for QAM) and scaled so the mean squared magnitude is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationSet {
    family: ConstellationFamily,
    order: u32,
    symbols: Vec<Complex64>,
    label: String,
}

/// M-PSK symbol set {e^{j2πm/M} | m = 0..M-1}.
///
/// M must be a power of two, M ≥ 2. Coordinates within 1e-15 of zero are
/// snapped to exactly 0 so that BPSK and QPSK symbols are exactly
/// representable; downstream degeneracy checks depend on this.
pub fn psk_set(order: u32) -> Result<ConstellationSet> {
    if order < 2 || !order.is_power_of_two() {
        return Err(Error::UnsupportedOrder {
            family: "PSK",
            order,
        });
    }
    let symbols = (0..order)
        .map(|m| {
            let angle = 2.0 * PI * m as f64 / order as f64;
            Complex64::new(snap_zero(angle.cos()), snap_zero(angle.sin()))
        })
        .collect();
    Ok(ConstellationSet {
        family: ConstellationFamily::Psk,
        order,
        symbols,
        label: match order {
            2 => "BPSK".to_string(),
            4 => "QPSK".to_string(),
            m => format!("{m}PSK"),
        },
    })
}

fn snap_zero(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// M-QAM symbol set, M ∈ {16, 32, 64, 128, 256}.
///
/// Square orders use the {±1, ±3, ...}² grid; 32 and 128 use the
/// conventional cross constellation (square grid with corner points
/// removed). A single positive scale makes the mean squared magnitude
/// exactly 1.
pub fn qam_set(order: u32) -> Result<ConstellationSet> {
    let points: Vec<(i32, i32)> = match order {
        16 | 64 | 256 => {
            let half = (order as f64).sqrt() as i32 / 2;
            grid_points(half, |_, _| true)
        }
        32 => grid_points(3, |re, im| !(re.abs() == 5 && im.abs() == 5)),
        128 => grid_points(6, |re, im| !(re.abs() >= 9 && im.abs() >= 9)),
        _ => {
            return Err(Error::UnsupportedOrder {
                family: "QAM",
                order,
            })
        }
    };
    debug_assert_eq!(points.len(), order as usize);
    let energy: i64 = points
        .iter()
        .map(|&(re, im)| (re as i64).pow(2) + (im as i64).pow(2))
        .sum();
    let scale = 1.0 / ((energy as f64 / order as f64).sqrt());
    let symbols = points
        .iter()
        .map(|&(re, im)| Complex64::new(re as f64 * scale, im as f64 * scale))
        .collect();
    Ok(ConstellationSet {
        family: ConstellationFamily::Qam,
        order,
        symbols,
        label: format!("{order}QAM"),
    })
}

/// Odd-integer grid {-(2*half-1) .. 2*half-1}² filtered by `keep`,
/// scanned row-major (ascending real, then ascending imaginary part).
fn grid_points(half: i32, keep: impl Fn(i32, i32) -> bool) -> Vec<(i32, i32)> {
    let levels: Vec<i32> = (-half..half).map(|k| 2 * k + 1).collect();
    let mut points = Vec::new();
    for &re in &levels {
        for &im in &levels {
            if keep(re, im) {
                points.push((re, im));
            }
        }
    }
    points
}

/// Parses a label of the form `{M}{PSK|QAM}` (case-insensitive, optional
/// hyphen) plus the BPSK/QPSK aliases.
pub fn parse_label(label: &str) -> Result<ConstellationSet> {
    let norm: String = label
        .trim()
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '-' && *c != '_')
        .collect::<String>()
        .to_uppercase();
    match norm.as_str() {
        "BPSK" => return psk_set(2),
        "QPSK" => return psk_set(4),
        _ => {}
    }
    let split = norm.find(|c: char| !c.is_ascii_digit());
    let (digits, family) = match split {
        Some(pos) if pos > 0 => norm.split_at(pos),
        _ => return Err(Error::UnknownLabel(label.to_string())),
    };
    let order: u32 = digits
        .parse()
        .map_err(|_| Error::UnknownLabel(label.to_string()))?;
    match family {
        "PSK" => psk_set(order),
        "QAM" => qam_set(order),
        _ => Err(Error::UnknownLabel(label.to_string())),
    }
}

/// Resolves an ordered list of labels into constellation sets. The order
/// defines the hypothesis indices of the classification problem.
pub fn scheme_catalog<S: AsRef<str>>(labels: &[S]) -> Result<Vec<ConstellationSet>> {
    if labels.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    labels.iter().map(|l| parse_label(l.as_ref())).collect()
}

impl ConstellationSet {
    pub fn family(&self) -> ConstellationFamily {
        self.family
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mean squared symbol magnitude; 1.0 by construction.
    pub fn mean_power(&self) -> f64 {
        self.symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.symbols.len() as f64
    }

    /// Smallest distance between two distinct symbols.
    pub fn min_distance(&self) -> f64 {
        let mut min = f64::INFINITY;
        for (i, a) in self.symbols.iter().enumerate() {
            for b in &self.symbols[i + 1..] {
                min = min.min((a - b).norm());
            }
        }
        min
    }

    /// Whether two sets contain the same symbols (as sets, within `tol`).
    pub fn same_symbols(&self, other: &ConstellationSet, tol: f64) -> bool {
        self.symbols.len() == other.symbols.len()
            && self
                .symbols
                .iter()
                .all(|a| other.symbols.iter().any(|b| (a - b).norm() <= tol))
    }
}

impl std::fmt::Display for ConstellationSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bpsk_is_plus_minus_one() {
        let set = psk_set(2).unwrap();
        assert_eq!(set.symbols(), &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
    }

    #[test]
    fn qpsk_axes_are_exact() {
        let set = psk_set(4).unwrap();
        assert_eq!(
            set.symbols(),
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, -1.0),
            ]
        );
    }

    #[test]
    fn psk8_sits_on_the_unit_circle() {
        let set = psk_set(8).unwrap();
        for s in set.symbols() {
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
        assert!((set.mean_power() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psk_rejects_bad_orders() {
        assert!(psk_set(0).is_err());
        assert!(psk_set(1).is_err());
        assert!(psk_set(3).is_err());
        assert!(psk_set(12).is_err());
    }

    #[test]
    fn qam16_scale_is_inverse_sqrt_ten() {
        // Enumerating the 16 points a+jb with a,b in {±1,±3} gives mean
        // energy 10, so the corner symbol 1+1j maps to (1+1j)/sqrt(10).
        let set = qam_set(16).unwrap();
        let expected = 1.0 / 10.0f64.sqrt();
        let corner = set
            .symbols()
            .iter()
            .find(|s| s.re > 0.0 && s.im > 0.0 && s.re == s.im)
            .unwrap();
        assert!((corner.re - expected).abs() < 1e-15);
        assert!((set.mean_power() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qam_rejects_orders_served_by_psk() {
        assert!(qam_set(4).is_err());
        assert!(qam_set(8).is_err());
        assert!(qam_set(512).is_err());
    }

    #[test]
    fn cross_constellations_have_expected_sizes_and_power() {
        // 32-cross: 6x6 grid minus 4 corners, mean energy 20.
        // 128-cross: 12x12 grid minus 2x2 corner blocks, mean energy 82.
        for (order, energy) in [(32u32, 20.0f64), (128, 82.0)] {
            let set = qam_set(order).unwrap();
            assert_eq!(set.symbols().len(), order as usize);
            assert!((set.mean_power() - 1.0).abs() < 1e-12);
            let max = set
                .symbols()
                .iter()
                .map(|s| s.re.abs().max(s.im.abs()))
                .fold(0.0, f64::max);
            let side = if order == 32 { 5.0 } else { 11.0 };
            assert!((max - side / energy.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn catalog_maps_labels_in_order() {
        let sets = scheme_catalog(&["BPSK", "QPSK"]).unwrap();
        assert_eq!(sets[0].order(), 2);
        assert_eq!(sets[1].order(), 4);
        let sets = scheme_catalog(&["16PSK", "16qam", "32-QAM"]).unwrap();
        assert_eq!(
            sets.iter().map(|s| s.order()).collect::<Vec<_>>(),
            vec![16, 16, 32]
        );
        assert_eq!(sets[0].family(), ConstellationFamily::Psk);
        assert_eq!(sets[1].family(), ConstellationFamily::Qam);
    }

    #[test]
    fn catalog_rejects_empty_and_unknown() {
        assert!(matches!(
            scheme_catalog::<&str>(&[]),
            Err(Error::EmptyCatalog)
        ));
        assert!(scheme_catalog(&["16APSK"]).is_err());
        assert!(scheme_catalog(&["PSK"]).is_err());
    }

    #[test]
    fn different_labels_give_different_symbol_sets() {
        let sets = scheme_catalog(&["BPSK", "QPSK", "16PSK", "16QAM", "32QAM"]).unwrap();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                assert!(!a.same_symbols(b, 1e-9), "{} vs {}", a.label(), b.label());
            }
        }
    }

    proptest! {
        #[test]
        fn every_set_has_unit_power_and_distinct_symbols(choice in 0usize..10) {
            let set = match choice {
                0 => psk_set(2), 1 => psk_set(4), 2 => psk_set(8),
                3 => psk_set(16), 4 => psk_set(32),
                5 => qam_set(16), 6 => qam_set(32), 7 => qam_set(64),
                8 => qam_set(128), _ => qam_set(256),
            }.unwrap();
            prop_assert!((set.mean_power() - 1.0).abs() < 1e-12);
            prop_assert!(set.min_distance() > 0.0);
            prop_assert_eq!(set.symbols().len(), set.order() as usize);
        }
    }
}
