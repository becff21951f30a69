//! Experiment configuration files: a flat TOML document that maps 1:1 onto
//! [`ExperimentConfig`].
//!
//! ```toml
//! scenario = "coherent"          # coherent | hlrt | partial-hlrt | alrt | theorem5
//! schemes = ["BPSK", "QPSK"]
//! snr_db = [0.0, 6.0]
//! trials = 2000
//! seed = 7
//!
//! [sweep]
//! variable = "n"                 # n | l | product
//! values = [1, 2, 5, 10, 20, 50, 100]
//! # samples_per_sensor = 4       # required for variable = "l"
//! # product = 1000               # required for variable = "product"
//!
//! [classifier]                   # optional; defaults shown
//! grid_resolution = 15
//! refinements = 3
//! phase_nodes = 32
//! amplitude_nodes = 32
//! exhaustive_cap = 1048576
//! gamma = 1.0
//! marginalize = ["phase"]        # partial-hlrt: amplitude | phase | noise
//! ```

use serde::Deserialize;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{ClassifierSettings, ExperimentConfig, MarginalAxis, Scenario, Sweep};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    schemes: Vec<String>,
    snr_db: Vec<f64>,
    trials: usize,
    seed: u64,
    sweep: RawSweep,
    #[serde(default)]
    classifier: RawClassifier,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    variable: String,
    values: Vec<usize>,
    samples_per_sensor: Option<usize>,
    product: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClassifier {
    grid_resolution: Option<usize>,
    refinements: Option<usize>,
    phase_nodes: Option<usize>,
    amplitude_nodes: Option<usize>,
    exhaustive_cap: Option<u64>,
    gamma: Option<f64>,
    marginalize: Option<Vec<String>>,
}

/// Parses and validates a configuration document.
pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let sweep = match raw.sweep.variable.to_lowercase().as_str() {
        "n" => Sweep::OverN {
            n_values: raw.sweep.values,
        },
        "l" => Sweep::OverL {
            l_values: raw.sweep.values,
            samples_per_sensor: raw.sweep.samples_per_sensor.ok_or_else(|| {
                Error::InvalidConfig("sweep over L needs samples_per_sensor".into())
            })?,
        },
        "product" => Sweep::FixedProduct {
            product: raw
                .sweep
                .product
                .ok_or_else(|| Error::InvalidConfig("product sweep needs product".into()))?,
            n_values: raw.sweep.values,
        },
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown sweep variable '{other}' (use n, l or product)"
            )))
        }
    };
    let defaults = ClassifierSettings::default();
    let marginalize = match raw.classifier.marginalize {
        None => defaults.marginalize.clone(),
        Some(axes) => axes
            .iter()
            .map(|a| match a.to_lowercase().as_str() {
                "amplitude" | "a" => Ok(MarginalAxis::Amplitude),
                "phase" | "theta" => Ok(MarginalAxis::Phase),
                "noise" | "noise_power" | "n0" => Ok(MarginalAxis::NoisePower),
                other => Err(Error::InvalidConfig(format!(
                    "unknown marginal axis '{other}'"
                ))),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let config = ExperimentConfig {
        scenario: Scenario::parse(&raw.scenario)?,
        schemes: raw.schemes,
        snr_db_list: raw.snr_db,
        sweep,
        trials: raw.trials,
        seed: raw.seed,
        classifier: ClassifierSettings {
            grid_resolution: raw
                .classifier
                .grid_resolution
                .unwrap_or(defaults.grid_resolution),
            refinements: raw.classifier.refinements.unwrap_or(defaults.refinements),
            phase_nodes: raw.classifier.phase_nodes.unwrap_or(defaults.phase_nodes),
            amplitude_nodes: raw
                .classifier
                .amplitude_nodes
                .unwrap_or(defaults.amplitude_nodes),
            exhaustive_cap: raw
                .classifier
                .exhaustive_cap
                .unwrap_or(defaults.exhaustive_cap),
            gamma: raw.classifier.gamma.unwrap_or(defaults.gamma),
            marginalize,
        },
    };
    config.validate()?;
    Ok(config)
}

/// Loads a configuration file from disk.
pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    from_toml_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
scenario = "coherent"
schemes = ["BPSK", "QPSK"]
snr_db = [0.0, 6.0]
trials = 2000
seed = 42

[sweep]
variable = "n"
values = [1, 2, 5, 10]
"#;

    #[test]
    fn minimal_document_parses_with_defaults() {
        let c = from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.scenario, Scenario::CoherentKnownSnr);
        assert_eq!(c.trials, 2000);
        assert_eq!(c.classifier.grid_resolution, 15);
        assert_eq!(c.classifier.marginalize, vec![MarginalAxis::Phase]);
        assert_eq!(c.sweep.variable(), "N");
    }

    #[test]
    fn sweep_variants_resolve() {
        let l = MINIMAL
            .replace(
                "variable = \"n\"",
                "variable = \"l\"\nsamples_per_sensor = 4",
            )
            .replace("\"coherent\"", "\"alrt\"");
        let c = from_toml_str(&l).unwrap();
        assert!(matches!(
            c.sweep,
            Sweep::OverL {
                samples_per_sensor: 4,
                ..
            }
        ));

        let p = MINIMAL
            .replace("variable = \"n\"", "variable = \"product\"\nproduct = 40")
            .replace("values = [1, 2, 5, 10]", "values = [1, 2, 5, 10, 20, 40]");
        let c = from_toml_str(&p).unwrap();
        assert!(matches!(c.sweep, Sweep::FixedProduct { product: 40, .. }));
    }

    #[test]
    fn missing_fields_and_typos_are_rejected() {
        assert!(from_toml_str("scenario = \"coherent\"").is_err());
        assert!(from_toml_str(&MINIMAL.replace("seed", "sede")).is_err());
        assert!(from_toml_str(&MINIMAL.replace("\"coherent\"", "\"glrt\"")).is_err());
        // L sweep without samples_per_sensor.
        assert!(from_toml_str(&MINIMAL.replace("variable = \"n\"", "variable = \"l\"")).is_err());
        // Validation runs: too few trials.
        assert!(from_toml_str(&MINIMAL.replace("trials = 2000", "trials = 50")).is_err());
    }

    #[test]
    fn classifier_overrides_apply() {
        let text = format!(
            "{MINIMAL}\n[classifier]\ngrid_resolution = 9\nmarginalize = [\"amplitude\", \"noise\"]\n"
        );
        let c = from_toml_str(&text).unwrap();
        assert_eq!(c.classifier.grid_resolution, 9);
        assert_eq!(
            c.classifier.marginalize,
            vec![MarginalAxis::Amplitude, MarginalAxis::NoisePower]
        );
    }
}
