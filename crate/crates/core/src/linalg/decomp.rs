use num_complex::Complex64;

use super::jacobi::{complete_orthonormal, jacobi_hermitian, one_sided_jacobi};
use super::matrix::{CMatrix, ZERO};
use super::norms::{operator_norm, self_commutator};
use crate::error::{Error, Result};
use crate::tol;

/// Eigendecomposition of a Hermitian matrix: `A = V·diag(values)·V*` with
/// `values` ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn hermitian_eig(a: &CMatrix) -> Result<HermitianEig> {
    let scale = a.max_abs();
    let defect = (a - &a.adjoint()).max_abs();
    if defect > tol::HERM_TOL * scale {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = jacobi_hermitian(a);
    Ok(HermitianEig { values, vectors })
}

/// Singular value decomposition `A = U·diag(values)·W*`, values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub left: CMatrix,
    pub right: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let s: Vec<Complex64> = self.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let us = CMatrix::from_fn(self.left.dim(), |i, j| self.left[(i, j)] * s[j]);
        &us * &self.right.adjoint()
    }
}

pub fn svd(a: &CMatrix) -> Svd {
    let n = a.dim();
    let (g, w) = one_sided_jacobi(a, true);
    let w = w.expect("right factor requested");
    let norms: Vec<f64> = (0..n)
        .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = CMatrix::from_fn(n, |i, k| w[(i, order[k])]);
    let mut left = CMatrix::zeros(n);
    let mut missing = vec![false; n];
    let floor = values[0] * f64::EPSILON * 1e-3;
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s <= floor || s == 0.0 {
            missing[k] = true;
            continue;
        }
        let col: Vec<Complex64> = g.column(j).iter().map(|z| z / s).collect();
        left.set_column(k, &col);
    }
    if missing.iter().any(|&m| m) {
        complete_orthonormal(&mut left, &missing);
    }
    Svd { values, left, right }
}

/// Singular values only, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let n = a.dim();
    if let Some(mut s) = monomial_singular_values(a) {
        s.sort_by(|x, y| y.total_cmp(x));
        return s;
    }
    let (g, _) = one_sided_jacobi(a, false);
    let mut s: Vec<f64> = (0..n)
        .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// With at most one nonzero per row and per column, `A` is a diagonal matrix
/// up to permutations of rows and columns, so its singular values are the
/// moduli of the entries.
fn monomial_singular_values(a: &CMatrix) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut col_used = vec![false; n];
    let mut s = vec![0.0; n];
    let mut k = 0;
    for i in 0..n {
        let mut seen = false;
        for (j, z) in a.row(i).iter().enumerate() {
            if *z == Complex64::new(0.0, 0.0) {
                continue;
            }
            if seen || col_used[j] {
                return None;
            }
            seen = true;
            col_used[j] = true;
            s[k] = z.norm();
            k += 1;
        }
    }
    Some(s)
}

/// Polar decomposition `A = V·P`, `V` unitary and `P = (A*A)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarDecomp {
    pub unitary: CMatrix,
    pub positive: CMatrix,
}

pub fn polar_decomp(a: &CMatrix) -> PolarDecomp {
    let Svd { values, left, right } = svd(a);
    let unitary = &left * &right.adjoint();
    let s: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let positive = CMatrix::conjugate_diag(&right, &s).hermitian_part();
    PolarDecomp { unitary, positive }
}

/// Spectral decomposition `A = U·diag(λ)·U*` of a normal matrix; the
/// substrate for the functional calculus used throughout the crate.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    eigenvalues: Vec<Complex64>,
    basis: CMatrix,
}

impl SpectralDecomp {
    /// Assembles a decomposition from known parts, checking that `basis` is unitary.
    pub fn from_parts(eigenvalues: Vec<Complex64>, basis: CMatrix) -> Result<Self> {
        if eigenvalues.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                left: basis.dim(),
                right: eigenvalues.len(),
            });
        }
        if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = basis.unitarity_defect();
        if defect > tol::UNITARY_TOL {
            return Err(Error::invalid(format!("basis is not unitary (defect {defect:e})")));
        }
        Ok(Self { eigenvalues, basis })
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Largest eigenvalue modulus, which is `‖A‖` for normal `A`.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn reconstruct(&self) -> CMatrix {
        CMatrix::conjugate_diag(&self.basis, &self.eigenvalues)
    }

    /// `f(A) = U·diag(f(λ))·U*`.
    pub fn apply(&self, f: impl Fn(Complex64) -> Complex64) -> CMatrix {
        let mapped: Vec<Complex64> = self.eigenvalues.iter().map(|&z| f(z)).collect();
        CMatrix::conjugate_diag(&self.basis, &mapped)
    }

    /// Same eigenvectors, eigenvalues replaced.
    pub fn with_eigenvalues(&self, eigenvalues: Vec<Complex64>) -> Self {
        assert_eq!(eigenvalues.len(), self.eigenvalues.len());
        Self {
            eigenvalues,
            basis: self.basis.clone(),
        }
    }

    /// Orthogonal projection onto the span of the eigenvectors selected by `keep`.
    pub fn projection_onto(&self, keep: impl Fn(usize, Complex64) -> bool) -> CMatrix {
        let ind: Vec<Complex64> = self
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &z)| if keep(k, z) { Complex64::new(1.0, 0.0) } else { ZERO })
            .collect();
        CMatrix::conjugate_diag(&self.basis, &ind).hermitian_part()
    }
}

/// Joint diagonalization of `Re A` and `Im A` for a normal `A`.
///
/// `Re A` is diagonalized first; inside each cluster of equal real parts
/// (width `CLUSTER_TOL·‖A‖`) the compression of `Im A` is diagonalized.
/// Eigenvalues are the Rayleigh quotients `u*Au` of the final basis.
pub fn normal_spectral_decomp(a: &CMatrix) -> Result<SpectralDecomp> {
    let n = a.dim();
    let norm = operator_norm(a);
    if norm == 0.0 {
        return Ok(SpectralDecomp {
            eigenvalues: vec![ZERO; n],
            basis: CMatrix::identity(n),
        });
    }
    let defect = operator_norm(&self_commutator(a));
    if defect > tol::NORMAL_TOL * norm * norm {
        return Err(Error::NotNormal { defect });
    }
    let (xs, mut basis) = jacobi_hermitian(&a.hermitian_part());
    let y = a.skew_part();
    let width = tol::CLUSTER_TOL * norm;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && xs[end] - xs[end - 1] <= width {
            end += 1;
        }
        if end - start > 1 {
            refine_cluster(&mut basis, &y, start, end);
        }
        start = end;
    }
    let b = &(&basis.adjoint() * a) * &basis;
    Ok(SpectralDecomp {
        eigenvalues: b.diag(),
        basis,
    })
}

fn refine_cluster(basis: &mut CMatrix, y: &CMatrix, start: usize, end: usize) {
    let n = basis.dim();
    let k = end - start;
    let cols: Vec<Vec<Complex64>> = (start..end).map(|j| basis.column(j)).collect();
    let yc: Vec<Vec<Complex64>> = cols
        .iter()
        .map(|c| (0..n).map(|i| (0..n).map(|l| y[(i, l)] * c[l]).sum()).collect())
        .collect();
    let compressed = CMatrix::from_fn(k, |i, j| cols[i].iter().zip(&yc[j]).map(|(u, v)| u.conj() * v).sum());
    let (_, w) = jacobi_hermitian(&compressed);
    for jj in 0..k {
        let col: Vec<Complex64> = (0..n).map(|i| (0..k).map(|l| cols[l][i] * w[(l, jj)]).sum()).collect();
        basis.set_column(start + jj, &col);
    }
}
