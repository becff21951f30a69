//! Likelihood-based classification of linearly modulated signals (PSK/QAM).
//!
//! The crate provides the building blocks of a modulation classification
//! simulator: constellation sets, a flat block-fading channel model, the
//! Gaussian-mixture likelihood of a received sample, three classifiers
//! (coherent ML, HLRT with bounded grid estimation of the unknown channel,
//! and ALRT under Rayleigh amplitude / uniform phase priors), multi-sensor
//! soft decision fusion, Monte Carlo KL-divergence diagnostics, and a
//! reproducible Pe-curve experiment harness with CSV/SVG output.
//!
//! Trials are data-parallel via `rayon` when the default `parallel` feature
//! is enabled; building with `--no-default-features` yields a sequential
//! fallback with identical (seed-stable) results.

pub mod alrt;
pub mod channel;
pub mod config;
pub mod constellation;
pub mod divergence;
pub mod error;
pub mod experiments;
pub mod fusion;
pub mod hlrt;
pub mod likelihood;
pub mod math;
pub mod parallel;
pub mod plot;
pub mod report;
pub mod rng;

pub use channel::{AmplitudeModel, ChannelParams, ChannelSpec, ObservationVector, PhaseModel};
pub use constellation::{ConstellationFamily, ConstellationSet};
pub use error::{Error, Result};
pub use likelihood::{Classification, ClassifierKind, Decision, TestStatistic};
