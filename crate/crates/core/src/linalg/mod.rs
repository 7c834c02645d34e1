//! Dense complex linear algebra: the matrix type, norms, commutators and the
//! Jacobi-based decompositions everything else is built on.

mod decomp;
mod jacobi;
mod matrix;
mod norms;

pub use decomp::{
    hermitian_eig, normal_spectral_decomp, polar_decomp, singular_values, svd, HermitianEig, PolarDecomp,
    SpectralDecomp, Svd,
};
pub(crate) use jacobi::Rot2;
pub use matrix::CMatrix;
pub(crate) use matrix::{ONE, ZERO};
pub use norms::{
    commutator, norm_report, operator_norm, schatten_from_singular, schatten_norm, self_commutator, NormReport,
    SchattenP,
};

/// Normality defect `‖[A*, A]‖` in operator norm.
pub fn normality_defect(a: &CMatrix) -> f64 {
    operator_norm(&self_commutator(a))
}
