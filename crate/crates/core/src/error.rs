use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the numerical routines.
///
/// The domain variants (`NotNormal`, `SpectrumOffContour`, `UncoveredSpectrum`,
/// `EmptyTruncation`) describe inputs that are well formed but fall outside
/// the hypotheses of the requested construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (defect={defect:e})")]
    NotHermitian { defect: f64 },

    #[error("NotNormal(defect={defect:e})")]
    NotNormal { defect: f64 },

    #[error("UncoveredSpectrum(eigenvalue={}{:+}i)", .eigenvalue.re, .eigenvalue.im)]
    UncoveredSpectrum { eigenvalue: Complex64 },

    #[error("SpectrumOffContour(eigenvalue={}{:+}i)", .eigenvalue.re, .eigenvalue.im)]
    SpectrumOffContour { eigenvalue: Complex64 },

    #[error("EmptyTruncation(lambda={lambda})")]
    EmptyTruncation { lambda: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("certified bound violated: {0}")]
    BoundViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors that reject a well-formed input on mathematical grounds.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotNormal { .. }
                | Error::NotHermitian { .. }
                | Error::UncoveredSpectrum { .. }
                | Error::SpectrumOffContour { .. }
                | Error::EmptyTruncation { .. }
                | Error::BoundViolation(_)
        )
    }
}
