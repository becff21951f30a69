//! CSV emission of Pe curves and the run manifest.
//!
//! Values are written with Rust's shortest round-trip float formatting, so
//! parsing an emitted file reproduces the curve exactly and re-emitting it
//! is byte-identical.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{PeCurve, PeEstimate, PePoint};

pub const CSV_HEADER: &str = "sweep_var,sweep_value,pe,ci_low,ci_high,trials,scenario,snr_db,seed";

/// Renders one curve as CSV text (header plus one row per point).
pub fn csv_string(curve: &PeCurve) -> String {
    let mut out = String::with_capacity(64 * (curve.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &curve.points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            curve.sweep_var,
            p.sweep_value,
            p.estimate.pe,
            p.estimate.ci_low,
            p.estimate.ci_high,
            p.estimate.trials,
            curve.scenario,
            curve.snr_db,
            curve.seed
        ));
    }
    out
}

/// Writes one curve to a CSV file.
pub fn write_csv(curve: &PeCurve, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(curve))?;
    Ok(())
}

/// Parses a curve from CSV text. The per-hypothesis breakdown is not part
/// of the format and comes back empty.
pub fn parse_csv(text: &str) -> Result<PeCurve> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedCsv("empty file".into()))?;
    if header != CSV_HEADER {
        return Err(Error::MalformedCsv(format!("unexpected header '{header}'")));
    }
    let mut curve: Option<PeCurve> = None;
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::MalformedCsv(format!(
                "row {}: expected 9 fields, got {}",
                line_no + 2,
                fields.len()
            )));
        }
        let bad = |what: &str| Error::MalformedCsv(format!("row {}: bad {what}", line_no + 2));
        let point = PePoint {
            sweep_value: fields[1].parse().map_err(|_| bad("sweep_value"))?,
            estimate: PeEstimate {
                pe: fields[2].parse().map_err(|_| bad("pe"))?,
                ci_low: fields[3].parse().map_err(|_| bad("ci_low"))?,
                ci_high: fields[4].parse().map_err(|_| bad("ci_high"))?,
                trials: fields[5].parse().map_err(|_| bad("trials"))?,
                per_hypothesis: Vec::new(),
            },
        };
        let sweep_var = fields[0].to_string();
        let scenario = fields[6].to_string();
        let snr_db: f64 = fields[7].parse().map_err(|_| bad("snr_db"))?;
        let seed: u64 = fields[8].parse().map_err(|_| bad("seed"))?;
        match &mut curve {
            None => {
                curve = Some(PeCurve {
                    scenario,
                    sweep_var,
                    snr_db,
                    seed,
                    points: vec![point],
                })
            }
            Some(c) => {
                if c.scenario != scenario || c.sweep_var != sweep_var || c.seed != seed {
                    return Err(Error::MalformedCsv(format!(
                        "row {}: mixed curves in one file",
                        line_no + 2
                    )));
                }
                c.points.push(point);
            }
        }
    }
    Ok(curve.unwrap_or(PeCurve {
        scenario: String::new(),
        sweep_var: String::new(),
        snr_db: 0.0,
        seed: 0,
        points: Vec::new(),
    }))
}

/// Reads a curve back from a CSV file.
pub fn read_csv(path: &Path) -> Result<PeCurve> {
    parse_csv(&std::fs::read_to_string(path)?)
}

/// SHA-256 of the raw configuration file bytes, hex encoded.
pub fn config_hash(config_bytes: &[u8]) -> String {
    let digest = Sha256::digest(config_bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Provenance record written atomically alongside the outputs of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(config_bytes: &[u8], seed: u64) -> Self {
        Self {
            config_hash: config_hash(config_bytes),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: chrono::Utc::now().to_rfc3339(),
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    pub fn finish(&mut self, outputs: Vec<String>) {
        self.outputs = outputs;
        self.finished = chrono::Utc::now().to_rfc3339();
    }
}

/// Writes the manifest atomically (temp file + rename in the same
/// directory).
pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, json)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a manifest back.
pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::MalformedCsv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_curve(points: usize) -> PeCurve {
        PeCurve {
            scenario: "coherent".into(),
            sweep_var: "N".into(),
            snr_db: 6.0,
            seed: 42,
            points: (0..points)
                .map(|i| PePoint {
                    sweep_value: (i as u64 + 1) * 5,
                    estimate: PeEstimate {
                        pe: 0.25 / (i as f64 + 1.0),
                        trials: 2000,
                        ci_low: 0.2 / (i as f64 + 1.0),
                        ci_high: 0.3 / (i as f64 + 1.0),
                        per_hypothesis: Vec::new(),
                    },
                })
                .collect(),
        }
    }

    #[test]
    fn line_counts_match_the_points() {
        assert_eq!(csv_string(&sample_curve(3)).lines().count(), 4);
        assert_eq!(csv_string(&sample_curve(0)), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn write_read_write_is_byte_identical() {
        let curve = sample_curve(4);
        let text = csv_string(&curve);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed, curve);
        assert_eq!(csv_string(&parsed), text);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("a,b,c\n").is_err());
        let text = format!("{CSV_HEADER}\nN,1,0.5,0.4\n");
        assert!(parse_csv(&text).is_err());
        let text = format!("{CSV_HEADER}\nN,1,zebra,0.4,0.6,100,coherent,0,7\n");
        assert!(parse_csv(&text).is_err());
    }

    #[test]
    fn manifest_hash_is_stable_and_content_sensitive() {
        let m1 = RunManifest::new(b"trials = 2000", 7);
        let m2 = RunManifest::new(b"trials = 2000", 7);
        assert_eq!(m1.config_hash, m2.config_hash);
        assert_eq!(m1.config_hash.len(), 64);
        let m3 = RunManifest::new(b"trials = 2001", 7);
        assert_ne!(m1.config_hash, m3.config_hash);
    }

    #[test]
    fn manifest_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        let mut m = RunManifest::new(b"cfg", 9);
        m.finish(vec!["pe.csv".into()]);
        write_manifest(&m, &path).unwrap();
        assert_eq!(read_manifest(&path).unwrap(), m);
    }

    proptest! {
        // Round trip for arbitrary finite estimates via shortest-float
        // formatting.
        #[test]
        fn csv_round_trip_is_exact(
            pe in 0.0f64..1.0, width in 0.0f64..0.2, snr in -10.0f64..20.0,
            value in 1u64..10_000, seed in any::<u64>()
        ) {
            let curve = PeCurve {
                scenario: "alrt".into(),
                sweep_var: "L".into(),
                snr_db: snr,
                seed,
                points: vec![PePoint {
                    sweep_value: value,
                    estimate: PeEstimate {
                        pe,
                        trials: 1000,
                        ci_low: (pe - width).max(0.0),
                        ci_high: (pe + width).min(1.0),
                        per_hypothesis: Vec::new(),
                    },
                }],
            };
            let parsed = parse_csv(&csv_string(&curve)).unwrap();
            prop_assert_eq!(parsed, curve);
        }
    }
}
