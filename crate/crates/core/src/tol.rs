//! Default tolerances. All are relative to the norm of the matrix involved
//! unless stated otherwise.

/// `‖U*U − I‖` allowed for computed unitaries.
pub const UNITARY_TOL: f64 = 1e-9;

/// `‖A − U·S·W*‖ / ‖A‖` allowed for decompositions.
pub const RECONSTRUCT_TOL: f64 = 1e-9;

/// `‖[A*,A]‖ / ‖A‖²` below which a matrix is treated as normal.
pub const NORMAL_TOL: f64 = 1e-8;

/// Width (relative to `‖A‖`) of a cluster of equal real parts.
pub const CLUSTER_TOL: f64 = 1e-8;

/// `‖A − A*‖ / ‖A‖` accepted by the Hermitian eigensolver.
pub const HERM_TOL: f64 = 1e-10;

/// Absolute tolerance for projection identities.
pub const PROJ_TOL: f64 = 1e-8;

/// Eigenvalues of a positive semidefinite factor may dip this far below zero.
pub const PSD_TOL: f64 = 1e-12;
