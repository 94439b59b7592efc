use thiserror::Error;

/// Failures shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("input out of domain: {0}")]
    Domain(String),

    /// Pre- and post-selection are (numerically) orthogonal, so the
    /// post-selected probe carries no light.
    #[error("near-orthogonal selection: |<f|i>| = {overlap:e} is at or below the floor {floor:e}")]
    NearOrthogonal { overlap: f64, floor: f64 },

    #[error("gaussian fit failed after {iterations} iterations (relative residual {residual:e})")]
    FitFailure { iterations: usize, residual: f64 },

    /// The data cannot support the requested estimate (all-zero spectrum, too few points).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {value}")))
    }
}
