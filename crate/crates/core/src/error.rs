//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Constellation order outside the supported set.
    #[error("unsupported {family} order {order}")]
    UnsupportedOrder { family: &'static str, order: u32 },

    /// A modulation label that does not parse as `{M}{PSK|QAM}`.
    #[error("unknown modulation label '{0}'")]
    UnknownLabel(String),

    /// An empty hypothesis list.
    #[error("hypothesis catalog is empty")]
    EmptyCatalog,

    /// Exhaustive ALRT enumeration would exceed the configured cap.
    #[error("enumeration of {order}^{samples} symbol sequences exceeds cap {cap}")]
    ExhaustiveCapExceeded {
        order: u32,
        samples: usize,
        cap: u64,
    },

    /// A malformed window assignment.
    #[error("invalid window assignment: {0}")]
    InvalidWindows(String),

    /// Invalid experiment or classifier configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The KL estimator hit a point where the log-density ratio is not finite.
    #[error("non-finite log density ratio at sample {0}")]
    NonFiniteLogRatio(usize),

    /// Malformed CSV input.
    #[error("malformed curve file: {0}")]
    MalformedCsv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
