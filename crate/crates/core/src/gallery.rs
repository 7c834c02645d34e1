//! Deterministic generators for the concrete matrix families used in the
//! experiments, plus seeded random ensembles.
//!
//! Every generator is a pure function of its parameters and seed. Random
//! streams come from ChaCha8 so outputs are bit-reproducible across
//! platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{commutator, operator_norm, self_commutator, CMatrix, SpectralDecomp, ONE, ZERO};

/// The `m×m` matrix with `A e_{2i} = e_{2i−1}` and `A e_{2i−1} = 0`
/// (1-based), i.e. `m/2` copies of the nilpotent 2×2 Jordan block.
pub fn shift_example(m: usize) -> Result<CMatrix> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::invalid("m must be even"));
    }
    Ok(CMatrix::from_fn(
        m,
        |i, j| {
            if i % 2 == 0 && j == i + 1 {
                ONE
            } else {
                ZERO
            }
        },
    ))
}

/// The pair `(A, B)` of `(m+1)×(m+1)` matrices with
/// `A e_j = (1 − 2j/m) e_j` and `B e_j = (2/(m+1))·√((j+1)(m−j)) e_{j+1}`,
/// `B e_m = 0`.
///
/// The construction re-checks `‖A‖ = 1`, `‖B‖ ≤ 1`, `‖[B*,B]‖ ≤ 4/m` and
/// `‖[A,B]‖ ≤ 2/m` and fails with [`Error::BoundViolation`] otherwise.
pub fn almost_commuting_pair(m: usize) -> Result<(CMatrix, CMatrix)> {
    if m < 1 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let n = m + 1;
    let mf = m as f64;
    let a = CMatrix::from_real_diag(&(0..n).map(|j| 1.0 - 2.0 * j as f64 / mf).collect::<Vec<_>>());
    let mut b = CMatrix::zeros(n);
    for j in 0..m {
        let w = 2.0 / (mf + 1.0) * (((j + 1) * (m - j)) as f64).sqrt();
        b[(j + 1, j)] = Complex64::new(w, 0.0);
    }
    let bounds = PairBounds::measure(&a, &b);
    bounds.certify(m)?;
    Ok((a, b))
}

/// Measured norms of an almost-commuting pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairBounds {
    pub norm_a: f64,
    pub norm_b: f64,
    pub self_commutator_b: f64,
    pub commutator_ab: f64,
}

impl PairBounds {
    pub fn measure(a: &CMatrix, b: &CMatrix) -> Self {
        Self {
            norm_a: operator_norm(a),
            norm_b: operator_norm(b),
            self_commutator_b: operator_norm(&self_commutator(b)),
            commutator_ab: operator_norm(&commutator(a, b).expect("same dimension")),
        }
    }

    /// Relative slack for the norm comparisons: the bounds are attained with
    /// equality for odd `m`, so the computed norms may sit one rounding step
    /// above them.
    pub const SLACK: f64 = 1e-12;

    pub fn certify(&self, m: usize) -> Result<()> {
        let mf = m as f64;
        let checks = [
            ("‖A‖ = 1", (self.norm_a - 1.0).abs() <= Self::SLACK),
            ("‖B‖ ≤ 1", self.norm_b <= 1.0 + Self::SLACK),
            (
                "‖[B*,B]‖ ≤ 4/m",
                self.self_commutator_b <= 4.0 / mf * (1.0 + Self::SLACK),
            ),
            ("‖[A,B]‖ ≤ 2/m", self.commutator_ab <= 2.0 / mf * (1.0 + Self::SLACK)),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            Some((what, _)) => Err(Error::BoundViolation(format!(
                "almost-commuting pair m={m}: {what} ({self:?})"
            ))),
            None => Ok(()),
        }
    }
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix (Gram–Schmidt, which leaves the diagonal of `R` positive).
pub fn random_unitary_with(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| gaussian_complex(rng)).collect())
        .collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let (done, rest) = cols.split_at_mut(j);
                for (v, b) in rest[0].iter_mut().zip(&done[k]) {
                    *v -= proj * b;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    CMatrix::from_fn(n, |i, j| cols[j][i])
}

pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    random_unitary_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A random normal matrix together with its ground-truth decomposition.
#[derive(Debug, Clone)]
pub struct NormalSample {
    pub matrix: CMatrix,
    pub eigenvalues: Vec<Complex64>,
    pub basis: CMatrix,
}

impl NormalSample {
    pub fn decomposition(&self) -> SpectralDecomp {
        SpectralDecomp::from_parts(self.eigenvalues.clone(), self.basis.clone()).expect("Haar basis is unitary")
    }
}

/// Eigenvalues uniform in the closed unit disc, Haar eigenbasis.
pub fn random_normal_with(n: usize, rng: &mut ChaCha8Rng) -> NormalSample {
    let eigenvalues: Vec<Complex64> = (0..n)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, t)
        })
        .collect();
    let basis = random_unitary_with(n, rng);
    NormalSample {
        matrix: CMatrix::conjugate_diag(&basis, &eigenvalues),
        eigenvalues,
        basis,
    }
}

pub fn random_normal(n: usize, seed: u64) -> NormalSample {
    random_normal_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `N + δ·E/‖E‖`, rescaled into the unit ball, where `N` is a random normal
/// matrix and `E` a complex Gaussian matrix drawn from the same stream.
pub fn perturbed_normal(dim: usize, delta: f64, seed: u64) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta must be a finite number >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = random_normal_with(dim, &mut rng).matrix;
    let noise = CMatrix::from_fn(dim, |_, _| gaussian_complex(&mut rng));
    let noise_norm = operator_norm(&noise);
    let mut m = if delta > 0.0 && noise_norm > 0.0 {
        &normal + &noise.scale_real(delta / noise_norm)
    } else {
        normal
    };
    let norm = operator_norm(&m);
    if norm > 1.0 {
        m = m.scale_real(1.0 / norm);
    }
    Ok(m)
}

/// Finite Laurent symbol `Σ_{n=−d}^{d} c_n e^{inθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSymbol {
    coeffs: Vec<Complex64>,
}

impl LaurentSymbol {
    /// From `(n, c_n)` pairs; unspecified coefficients are zero.
    pub fn from_terms(terms: &[(i64, Complex64)]) -> Self {
        let d = terms.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![ZERO; 2 * d + 1];
        for &(n, c) in terms {
            coeffs[(n + d as i64) as usize] += c;
        }
        Self { coeffs }
    }

    /// `e^{iθ}`: multiplication by it is the bilateral shift `e_k ↦ e_{k+1}`.
    pub fn shift() -> Self {
        Self::from_terms(&[(1, ONE)])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coefficient(&self, n: i64) -> Complex64 {
        let d = self.degree() as i64;
        if n.abs() > d {
            ZERO
        } else {
            self.coeffs[(n + d) as usize]
        }
    }

    pub fn terms(&self) -> Vec<(i64, Complex64)> {
        let d = self.degree() as i64;
        (-d..=d)
            .map(|n| (n, self.coefficient(n)))
            .filter(|(_, c)| *c != ZERO)
            .collect()
    }

    /// `Σ |n|·|c_n|`, an upper bound for `‖[G, A]‖` with `G = diag(|k|)`.
    pub fn commutator_bound(&self) -> f64 {
        let d = self.degree() as i64;
        (-d..=d)
            .map(|n| n.unsigned_abs() as f64 * self.coefficient(n).norm())
            .sum()
    }
}

/// Finite Fourier window `k = −K..K` of the multiplication operator and of
/// `G = diag(|k|)`. Row/column `i` corresponds to the mode `k = i − K`.
#[derive(Debug, Clone)]
pub struct LaurentWindow {
    pub window: usize,
    pub g: CMatrix,
    pub a: CMatrix,
    /// Certified bound on `‖[G, A]‖`.
    pub commutator_bound: f64,
}

impl LaurentWindow {
    pub fn dim(&self) -> usize {
        2 * self.window + 1
    }

    pub fn mode(&self, index: usize) -> i64 {
        index as i64 - self.window as i64
    }

    /// Mode-ordered eigenvalues of `G`, i.e. `|k|` for `k = −K..K`.
    pub fn g_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mode(i).unsigned_abs() as f64).collect()
    }
}

pub fn laurent_multiplication(symbol: &LaurentSymbol, window: usize) -> Result<LaurentWindow> {
    let d = symbol.degree();
    if d > window {
        return Err(Error::invalid(format!("symbol degree {d} exceeds window {window}")));
    }
    let n = 2 * window + 1;
    let g = CMatrix::from_real_diag(
        &(0..n)
            .map(|i| (i as i64 - window as i64).unsigned_abs() as f64)
            .collect::<Vec<_>>(),
    );
    let a = CMatrix::from_fn(n, |j, k| symbol.coefficient(j as i64 - k as i64));
    let bound = symbol.commutator_bound();
    let actual = operator_norm(&commutator(&g, &a)?);
    if actual > bound * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::BoundViolation(format!("‖[G,A]‖ = {actual} exceeds {bound}")));
    }
    Ok(LaurentWindow {
        window,
        g,
        a,
        commutator_bound: bound,
    })
}

/// One member of an experiment ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    ShiftExample {
        m: usize,
    },
    /// Contributes the non-normal member `B` of the pair.
    AlmostCommuting {
        m: usize,
    },
    PerturbedNormal {
        dim: usize,
        delta: f64,
        seed: u64,
    },
    /// `coeffs` lists `[n, re, im]` triples.
    LaurentMultiplication {
        coeffs: Vec<(i64, f64, f64)>,
        window: usize,
    },
}

impl EnsembleSpec {
    pub fn label(&self) -> String {
        match self {
            EnsembleSpec::ShiftExample { m } => format!("shift_example(m={m})"),
            EnsembleSpec::AlmostCommuting { m } => format!("almost_commuting(m={m})"),
            EnsembleSpec::PerturbedNormal { dim, delta, seed } => {
                format!("perturbed_normal(dim={dim},delta={delta},seed={seed})")
            }
            EnsembleSpec::LaurentMultiplication { coeffs, window } => {
                let terms: Vec<String> = coeffs.iter().map(|(n, re, im)| format!("{n}:{re}{im:+}i")).collect();
                format!("laurent_multiplication([{}],K={window})", terms.join(" "))
            }
        }
    }

    pub fn generate(&self) -> Result<CMatrix> {
        match *self {
            EnsembleSpec::ShiftExample { m } => shift_example(m),
            EnsembleSpec::AlmostCommuting { m } => almost_commuting_pair(m).map(|(_, b)| b),
            EnsembleSpec::PerturbedNormal { dim, delta, seed } => perturbed_normal(dim, delta, seed),
            EnsembleSpec::LaurentMultiplication { ref coeffs, window } => {
                let terms: Vec<(i64, Complex64)> =
                    coeffs.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))).collect();
                laurent_multiplication(&LaurentSymbol::from_terms(&terms), window).map(|w| w.a)
            }
        }
    }
}
