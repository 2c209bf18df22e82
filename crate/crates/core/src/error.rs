use thiserror::Error;

/// Errors produced by the emission library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A real parameter fell outside the interval where the formulas apply.
    #[error("{param} = {value} is outside the valid range [{min}, {max}]")]
    Domain {
        param: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A structurally invalid input (zero dipole, bad range, ...).
    #[error("invalid {param}: {reason}")]
    Invalid { param: &'static str, reason: String },

    #[error("unsupported compound tensor rank {0}; expected 0, 1 or 2")]
    UnsupportedRank(u8),

    /// The s-polarized electric field is a real vector and has no
    /// TM-style polarization, ellipticity or spin.
    #[error("operation requires a p-polarized mode, got {0}")]
    WrongPolarization(&'static str),

    #[error(
        "quadrature did not converge: error estimate {estimate:.3e} exceeds \
         tolerance {tolerance:.3e} after {subdivisions} subdivisions"
    )]
    Quadrature {
        value: f64,
        estimate: f64,
        tolerance: f64,
        subdivisions: usize,
    },
}

impl Error {
    pub(crate) fn invalid(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            param,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
