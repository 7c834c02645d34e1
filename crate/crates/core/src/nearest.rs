//! Distance to the normal matrices.
//!
//! For the Frobenius norm the distance is `‖A‖₂² − sup Σ_j |(A u_j, u_j)|²`
//! under the square root, the supremum running over orthonormal bases; the
//! diagonal part of `A` in an optimal basis is a nearest normal matrix. The
//! supremum is approached by Jacobi-like sweeps over coordinate planes, each
//! plane solved by a grid search followed by Newton refinement.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::gallery::random_unitary_with;
use crate::linalg::{operator_norm, schatten_norm, self_commutator, CMatrix, Rot2, SchattenP};

const GRID: usize = 64;

/// Settings of [`maximize_diagonal`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximizeOptions {
    pub max_sweeps: usize,
    /// A sweep improving the objective by less than `obj_tol·‖A‖₂²` ends the run.
    pub obj_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl MaximizeOptions {
    pub fn new(seed: u64) -> Self {
        MaximizeOptions {
            max_sweeps: 200,
            obj_tol: 1e-12,
            restarts: 4,
            seed,
        }
    }
}

/// Best run of [`maximize_diagonal`].
#[derive(Debug, Clone)]
pub struct DiagonalMaximization {
    pub unitary: CMatrix,
    /// `Σ_j |(U*AU)_jj|²`.
    pub objective: f64,
    /// `‖U*AU − diag(U*AU)‖₂`, equal to `sqrt(‖A‖₂² − objective)`.
    pub off_diagonal: f64,
    /// Objective before the first sweep and after each sweep.
    pub history: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
    pub restart: usize,
}

/// `2×2` unitary with first column `(cos θ, e^{iφ} sin θ)`.
pub fn plane_rotation(theta: f64, phi: f64) -> Rot2 {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [[Complex64::new(c, 0.0), -e.conj() * s], [e * s, Complex64::new(c, 0.0)]]
}

/// The block `[[a, b], [c, d]]` split as `t/2·I + [[α, β], [γ, −α]]`.
#[derive(Debug, Clone, Copy)]
struct Plane {
    half_trace: Complex64,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
}

impl Plane {
    fn new(m: [[Complex64; 2]; 2]) -> Self {
        Plane {
            half_trace: (m[0][0] + m[1][1]) * 0.5,
            alpha: (m[0][0] - m[1][1]) * 0.5,
            beta: m[0][1],
            gamma: m[1][0],
        }
    }

    fn frobenius_sq(&self) -> f64 {
        2.0 * self.half_trace.norm_sqr() + 2.0 * self.alpha.norm_sqr() + self.beta.norm_sqr() + self.gamma.norm_sqr()
    }

    /// Off-diagonal mass `|b'|² + |c'|²` of `g*Mg`.
    fn off(&self, theta: f64, phi: f64) -> f64 {
        self.off_trig(theta.sin_cos(), Complex64::from_polar(1.0, phi))
    }

    fn off_trig(&self, (s, c): (f64, f64), e: Complex64) -> f64 {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let bp = -a * e.conj() * (2.0 * c * s) + b * (c * c) - g * e.conj() * e.conj() * (s * s);
        let cp = -a * e * (2.0 * c * s) - b * e * e * (s * s) + g * (c * c);
        bp.norm_sqr() + cp.norm_sqr()
    }

    /// Diagonal mass `|(g*Mg)_00|² + |(g*Mg)_11|²`.
    #[cfg(test)]
    fn value(&self, theta: f64, phi: f64) -> f64 {
        self.frobenius_sq() - self.off(theta, phi)
    }

    /// Smallest off-diagonal mass over all rotations: half the squared
    /// departure from normality of the block.
    fn off_min(&self) -> f64 {
        let f2 = 2.0 * self.alpha.norm_sqr() + self.beta.norm_sqr() + self.gamma.norm_sqr();
        let lam2 = (self.alpha * self.alpha + self.beta * self.gamma).norm();
        (0.5 * (f2 - 2.0 * lam2)).max(0.0)
    }
}

/// Optimal rotation of one coordinate plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSolution {
    pub theta: f64,
    pub phi: f64,
    /// Diagonal mass after the rotation.
    pub value: f64,
    /// Off-diagonal mass after the rotation.
    pub off: f64,
}

/// Maximizes the diagonal mass of `g*Mg` over `2×2` unitaries `g`, with
/// `M = [[a, b], [c, d]]`, by minimizing the off-diagonal mass.
///
/// Coarse `64×64` grid over `θ ∈ [0, π/4]`, `φ ∈ [0, 2π)`, then Newton
/// iterations with finite-difference derivatives and backtracking. Angles
/// past `π/4` only swap the two basis vectors, which leaves the diagonal
/// mass unchanged. Newton works in the coordinates `(θ cos φ, θ sin φ)`,
/// which stay regular at `θ = 0`.
pub fn solve_plane(m: [[Complex64; 2]; 2]) -> PlaneSolution {
    let plane = Plane::new(m);
    let thetas: Vec<(f64, (f64, f64))> = (0..GRID)
        .map(|i| {
            let t = FRAC_PI_4 * i as f64 / (GRID - 1) as f64;
            (t, t.sin_cos())
        })
        .collect();
    let phis: Vec<(f64, Complex64)> = (0..GRID)
        .map(|j| {
            let p = TAU * j as f64 / GRID as f64;
            (p, Complex64::from_polar(1.0, p))
        })
        .collect();
    let mut best = (0.0, 0.0, plane.off(0.0, 0.0));
    for &(t, sc) in &thetas {
        for &(p, e) in &phis {
            let v = plane.off_trig(sc, e);
            if v < best.2 {
                best = (t, p, v);
            }
        }
    }
    let polar = |x: f64, y: f64| (x.hypot(y), y.atan2(x));
    let f = |x: f64, y: f64| {
        let (t, p) = polar(x, y);
        plane.off(t, p)
    };
    let (x, y, off) = newton_minimize(&f, (best.0 * best.1.cos(), best.0 * best.1.sin(), best.2));
    let (theta, phi) = polar(x, y);
    PlaneSolution {
        theta,
        phi,
        value: plane.frobenius_sq() - off,
        off,
    }
}

fn newton_minimize(f: &impl Fn(f64, f64) -> f64, start: (f64, f64, f64)) -> (f64, f64, f64) {
    let (mut x, mut y, mut v) = start;
    let mut h: f64 = 1e-4;
    for _ in 0..100 {
        let f0 = v;
        let (fxp, fxm) = (f(x + h, y), f(x - h, y));
        let (fyp, fym) = (f(x, y + h), f(x, y - h));
        let gx = (fxp - fxm) / (2.0 * h);
        let gy = (fyp - fym) / (2.0 * h);
        let hxx = (fxp - 2.0 * f0 + fxm) / (h * h);
        let hyy = (fyp - 2.0 * f0 + fym) / (h * h);
        let hxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        let det = hxx * hyy - hxy * hxy;
        // Newton step when the Hessian is positive definite, gradient step otherwise
        let (mut dx, mut dy) = if hxx > 0.0 && det > 0.0 {
            ((-hyy * gx + hxy * gy) / det, (hxy * gx - hxx * gy) / det)
        } else {
            let scale = hxx.abs().max(hyy.abs()).max(1e-300);
            (-gx / scale, -gy / scale)
        };
        let len = dx.hypot(dy);
        if !len.is_finite() || len < 1e-16 {
            break;
        }
        let mut improved = false;
        for _ in 0..50 {
            let cand = f(x + dx, y + dy);
            if cand < v {
                x += dx;
                y += dy;
                v = cand;
                improved = true;
                break;
            }
            dx *= 0.5;
            dy *= 0.5;
        }
        if !improved {
            if h <= 1e-7 {
                break;
            }
            // finite-difference bias dominates: retry with a finer stencil
            h = (h * 0.1).max(1e-7);
            continue;
        }
        h = h.min(len.max(1e-7));
    }
    (x, y, v)
}

fn diag_objective(b: &CMatrix) -> f64 {
    b.diag().iter().map(|z| z.norm_sqr()).sum()
}

fn off_diagonal_sq(b: &CMatrix) -> f64 {
    let n = b.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += b[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn run_sweeps(a: &CMatrix, start: CMatrix, opts: &MaximizeOptions, restart: usize) -> DiagonalMaximization {
    let n = a.dim();
    let scale = a.frobenius_sq();
    let mut u = start;
    let mut b = &(&u.adjoint() * a) * &u;
    let mut objective = diag_objective(&b);
    let mut history = vec![objective];
    let mut converged = n < 2 || scale == 0.0;
    let mut sweeps = 0;
    let floor = f64::EPSILON * f64::EPSILON * scale;
    while !converged && sweeps < opts.max_sweeps {
        sweeps += 1;
        let before = objective;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let m = [[b[(p, p)], b[(p, q)]], [b[(q, p)], b[(q, q)]]];
                let plane = Plane::new(m);
                let current = plane.off(0.0, 0.0);
                if current <= floor || current - plane.off_min() <= 1e-9 * current {
                    continue;
                }
                let sol = solve_plane(m);
                if sol.off < current * (1.0 - 1e-12) {
                    let g = plane_rotation(sol.theta, sol.phi);
                    b.similarity_rotate(p, q, &g);
                    u.rotate_columns(p, q, &g);
                    rotated = true;
                }
            }
        }
        objective = diag_objective(&b);
        history.push(objective);
        if !rotated || objective - before < opts.obj_tol * scale {
            converged = true;
        }
    }
    let b = &(&u.adjoint() * a) * &u;
    DiagonalMaximization {
        unitary: u,
        objective: diag_objective(&b),
        off_diagonal: off_diagonal_sq(&b).sqrt(),
        history,
        sweeps,
        converged,
        restart,
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Maximizes `Σ_j |(U*AU)_jj|²` over unitaries `U`.
///
/// Restart 0 starts from the identity, the others from seeded random
/// unitaries. The best objective (smallest off-diagonal mass) wins; ties go
/// to the lower restart index.
pub fn maximize_diagonal(a: &CMatrix, opts: &MaximizeOptions) -> DiagonalMaximization {
    let n = a.dim();
    let runs: Vec<DiagonalMaximization> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let start = if k == 0 {
                CMatrix::identity(n)
            } else {
                random_unitary_with(n, &mut restart_rng(opts.seed, k))
            };
            run_sweeps(a, start, opts, k)
        })
        .collect();
    runs.into_iter()
        .reduce(|best, run| {
            if run.off_diagonal < best.off_diagonal {
                run
            } else {
                best
            }
        })
        .expect("at least one restart")
}

/// `‖[A*, A]‖_p / (4‖A‖)`, a lower bound for the `S_p` distance from `A` to
/// normal matrices of norm at most `‖A‖`. Zero for `A = 0`.
pub fn commutator_lower_bound(a: &CMatrix, p: SchattenP) -> f64 {
    let na = operator_norm(a);
    if na == 0.0 {
        return 0.0;
    }
    schatten_norm(&self_commutator(a), p).expect("valid exponent") / (4.0 * na)
}

/// Result of [`nearest_normal`].
#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    /// Normal witness `T = U·diag(U*AU)·U*`.
    #[serde(skip)]
    pub witness: CMatrix,
    #[serde(skip)]
    pub basis: CMatrix,
    /// `‖A − T‖_p` for each requested `p`.
    pub distances: Vec<(SchattenP, f64)>,
    /// `sqrt(‖A‖₂² − objective)`, evaluated as the off-diagonal mass of `U*AU`.
    pub frobenius_exact: f64,
    pub lower_bounds: Vec<(SchattenP, f64)>,
    pub sweeps: usize,
    pub objective_history: Vec<f64>,
    pub converged: bool,
}

impl DistanceReport {
    pub fn distance(&self, p: SchattenP) -> Option<f64> {
        lookup(&self.distances, p)
    }

    pub fn lower_bound(&self, p: SchattenP) -> Option<f64> {
        lookup(&self.lower_bounds, p)
    }
}

fn lookup(v: &[(SchattenP, f64)], p: SchattenP) -> Option<f64> {
    v.iter().find(|(q, _)| *q == p).map(|&(_, x)| x)
}

/// Nearest normal witness and distance report for the requested exponents.
pub fn nearest_normal(a: &CMatrix, ps: &[SchattenP], opts: &MaximizeOptions) -> DistanceReport {
    let n = a.dim();
    if a.max_abs() == 0.0 {
        return DistanceReport {
            witness: CMatrix::zeros(n),
            basis: CMatrix::identity(n),
            distances: ps.iter().map(|&p| (p, 0.0)).collect(),
            frobenius_exact: 0.0,
            lower_bounds: ps.iter().map(|&p| (p, 0.0)).collect(),
            sweeps: 0,
            objective_history: vec![0.0],
            converged: true,
        };
    }
    let run = maximize_diagonal(a, opts);
    let u = run.unitary;
    let b = &(&u.adjoint() * a) * &u;
    let witness = CMatrix::conjugate_diag(&u, &b.diag());
    let residual = a - &witness;
    DistanceReport {
        distances: ps
            .iter()
            .map(|&p| (p, schatten_norm(&residual, p).expect("valid exponent")))
            .collect(),
        frobenius_exact: run.off_diagonal,
        lower_bounds: ps.iter().map(|&p| (p, commutator_lower_bound(a, p))).collect(),
        witness,
        basis: u,
        sweeps: run.sweeps,
        objective_history: run.history,
        converged: run.converged,
    }
}
