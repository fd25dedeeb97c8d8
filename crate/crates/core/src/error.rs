use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("singular point: {what} at {at}")]
    Singularity { what: &'static str, at: f64 },
    #[error("outside domain: {what} (value {value})")]
    Domain { what: &'static str, value: f64 },
    #[error("inconsistent input: {what} (mismatch {mismatch})")]
    Consistency { what: &'static str, mismatch: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Distance from a singular locus below which operations refuse to evaluate.
pub const SINGULAR_MARGIN: f64 = 1e-6;

pub(crate) fn guard_nonzero(what: &'static str, value: f64, at: f64) -> Result<()> {
    if value.abs() < SINGULAR_MARGIN || !value.is_finite() {
        Err(GeometryError::Singularity { what, at })
    } else {
        Ok(())
    }
}
