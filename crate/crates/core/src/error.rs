use thiserror::Error;

/// Failures of the numeric layer. Each maps to one CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("curve is singular: roots {i} and {j} are {distance:.3e} apart")]
    CurveSingular { i: usize, j: usize, distance: f64 },
    #[error("precision target {target:.1e} not reached in {what} (achieved {achieved:.3e})")]
    Precision {
        what: String,
        target: f64,
        achieved: f64,
    },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("ray ({0}, {1}) is degenerate: a1^3/3 = a3")]
    DegenerateRay(String, String),
    #[error("{what} has a pole at this argument (|denominator| = {magnitude:.3e})")]
    Pole { what: String, magnitude: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integration path passes through a branch point: {0}")]
    Path(String),
    #[error("derivative order {0} exceeds 3")]
    UnsupportedOrder(u32),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type NumResult<T> = std::result::Result<T, NumericError>;
