use std::fmt;

/// Errors produced by allocation, sorting, the oracle, and experiment
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Weight is negative, NaN, or infinite.
    InvalidWeight(f64),
    /// A ball set must contain at least one ball.
    NoBalls,
    /// A load vector or bin count must contain at least one bin.
    NoBins,
    /// The exact oracle refuses instances above its size guard.
    InstanceTooLarge { n: usize, m: usize },
    /// Bucket ratio outside (0, 1].
    InvalidBucketRatio(f64),
    /// An experiment or sweep configuration is inconsistent.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWeight(w) => {
                write!(f, "invalid weight {w}: weights must be finite and non-negative")
            }
            Error::NoBalls => write!(f, "no balls"),
            Error::NoBins => write!(f, "no bins"),
            Error::InstanceTooLarge { n, m } => write!(
                f,
                "instance too large for oracle: n={n}, m={m} (limits: n <= 16, m <= 4)"
            ),
            Error::InvalidBucketRatio(r) => {
                write!(f, "bucket ratio {r} must lie in (0, 1]")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
