//! Error type shared across the crate.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for optimizer, benchmark, and harness operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Pair-moment fitting needs at least two points to form an ordered pair.
    #[error("need at least 2 points to form ordered pairs, got {0}")]
    TooFewPoints(usize),

    /// Two quantities that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A NaN or infinity appeared where only finite values are allowed.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// The objective returned NaN or infinity; the offending point is included
    /// so the caller can reproduce the evaluation.
    #[error("objective returned non-finite value {value} at point {point:?}")]
    ObjectiveNotFinite { value: f64, point: Vec<f64> },

    /// The regularized covariance block could not be factorized even after the
    /// ridge retry; the model inputs are pathological.
    #[error("covariance conditioning failed: block not factorizable after ridge retry")]
    ConditioningFailed,

    /// Sampling was requested from a distribution whose covariance has collapsed.
    #[error("cannot sample from a degenerate (collapsed-covariance) distribution")]
    DegenerateDistribution,

    /// Sampling was requested with a zero sample count.
    #[error("sample count must be positive")]
    EmptySampleRequest,

    /// A configuration value violates its documented constraints.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Box-domain construction was given inconsistent or non-finite bounds.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// A point fell outside the box domain on a checked evaluation path.
    #[error("coordinate {index} = {value} outside [{lower}, {upper}]")]
    OutOfDomain {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    /// Benchmark lookup by name failed; the message lists every valid name.
    #[error("unknown function `{name}`; valid names: {valid}")]
    UnknownFunction { name: String, valid: String },

    /// A benchmark was requested at a dimension its formula cannot support.
    #[error(
        "function `{name}` needs dimension {}{expected}, requested {requested}",
        if *adjustable { "at least " } else { "exactly " }
    )]
    InvalidDimension {
        name: &'static str,
        expected: usize,
        requested: usize,
        /// True when the function accepts any dimension from `expected` up.
        adjustable: bool,
    },

    /// Report or trace output could not be written.
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),

    /// CSV serialization failed while writing a trace.
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}
