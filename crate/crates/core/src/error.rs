use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n too small: need at least 8 nodes, got {0}")]
    GridTooSmall(usize),
    #[error("n must be even, got {0}")]
    GridOdd(usize),
    #[error("domain length must be positive and finite, got {0}")]
    GridLength(f64),
    #[error("length mismatch: expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("depth must stay positive: H[{index}] = {value}")]
    NonPositiveDepth { index: usize, value: f64 },
    #[error("cyclic tridiagonal solve failed: matrix is singular or indefinite (pivot {pivot} at row {row})")]
    Singular { row: usize, pivot: f64 },
    #[error("c must exceed 1 (got c = {0})")]
    InadmissibleSpeed(f64),
    #[error("model {0} has no momentum operator")]
    NoMomentumOperator(&'static str),
    #[error("{what} is only defined for {expected}")]
    UnsupportedModel {
        what: &'static str,
        expected: &'static str,
    },
    #[error("implicit relation undefined: need 1 < H < c, got H = {h}, c = {c}")]
    OutsideImplicitRange { h: f64, c: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("depth positivity lost at stage {stage} (min H = {min_h})")]
    PositivityLost { stage: usize, min_h: f64 },
    #[error("gradient blow-up: max |u_x| = {max_slope} exceeds limit {limit} at t = {t}")]
    GradientBlowup { t: f64, max_slope: f64, limit: f64 },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
}

impl Error {
    /// True for failures of the numerics (as opposed to bad inputs).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::PositivityLost { .. }
                | Error::GradientBlowup { .. }
                | Error::NonFinite { .. }
        )
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

pub(crate) fn check_depth(h: &[f64]) -> Result<()> {
    match h.iter().position(|&v| !(v > 0.0)) {
        Some(index) => Err(Error::NonPositiveDepth {
            index,
            value: h[index],
        }),
        None => Ok(()),
    }
}
