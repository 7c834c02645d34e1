//! Spectrum surgery on normal matrices.
//!
//! Every construction here keeps the eigenvectors of the input and moves
//! eigenvalues through a map of the plane (functional calculus). Removing a
//! disc from the spectrum pushes the enclosed eigenvalues to its boundary;
//! removing an arc snaps eigenvalues lying on a chord to the chord's
//! endpoints. The oscillating-graph construction moves every eigenvalue
//! horizontally onto the graph of a rapidly oscillating cosine, so that the
//! imaginary part of the output is a function of its real part.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, CMatrix, SpectralDecomp};
use crate::partition::Disc;

/// A total map of the complex plane applied to eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneMap {
    /// Identity on the disc, radial projection onto its boundary outside.
    RadialCollapse { disc: Disc },
    /// `z ↦ a·z + b`, `a ≠ 0`.
    Affine { a: Complex64, b: Complex64 },
    /// Identity off the disc; inside, radial projection from `anchor` onto the boundary.
    BoundaryPush { disc: Disc, anchor: Complex64 },
    /// Identity off the disc; inside, the nearer chord endpoint (ties go to `plus`).
    ChordSnap {
        disc: Disc,
        minus: Complex64,
        plus: Complex64,
    },
}

impl PlaneMap {
    pub fn affine(a: Complex64, b: Complex64) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(Error::invalid("affine map needs a != 0"));
        }
        Ok(PlaneMap::Affine { a, b })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        match *self {
            PlaneMap::RadialCollapse { disc } => {
                let d = z - disc.center;
                let r = d.norm();
                if r <= disc.radius {
                    z
                } else {
                    disc.center + d * (disc.radius / r)
                }
            }
            PlaneMap::Affine { a, b } => a * z + b,
            PlaneMap::BoundaryPush { disc, anchor } => {
                if disc.contains(z) {
                    push_to_boundary(&disc, anchor, z)
                } else {
                    z
                }
            }
            PlaneMap::ChordSnap { disc, minus, plus } => {
                if disc.contains(z) {
                    if (z - minus).norm() < (z - plus).norm() {
                        minus
                    } else {
                        plus
                    }
                } else {
                    z
                }
            }
        }
    }
}

/// Point where the ray from `anchor` through `z` leaves the disc. The ray for
/// `z = anchor` points in the `+real` direction from the centre.
fn push_to_boundary(disc: &Disc, anchor: Complex64, z: Complex64) -> Complex64 {
    let c = disc.center;
    let r = disc.radius;
    let d = z - anchor;
    let len = d.norm();
    if len == 0.0 {
        return c + r;
    }
    let u = d / len;
    let w = anchor - c;
    // |w + t·u|² = r², t > 0
    let b = (u.conj() * w).re;
    let t = -b + (b * b - (w.norm_sqr() - r * r)).max(0.0).sqrt();
    let hit = anchor + u * t;
    let off = hit - c;
    let mut p = c + off * (r / off.norm());
    // the disc is open: rounding must not leave the point inside
    while disc.contains(p) {
        p = c + (p - c) * (1.0 + 2.0 * f64::EPSILON);
    }
    p
}

/// `φ(A) = U·diag(φ(λ))·U*`.
pub fn transport(decomp: &SpectralDecomp, map: &PlaneMap) -> CMatrix {
    decomp.apply(|z| map.apply(z))
}

/// Output of a surgery step.
#[derive(Debug, Clone)]
pub struct SurgeryResult {
    pub output: CMatrix,
    /// Eigen-decomposition of `output` (same basis as the input).
    pub decomp: SpectralDecomp,
    pub moved_count: usize,
    /// `‖A − A_Ω‖` in operator norm.
    pub perturbation_norm: f64,
    /// `2·radius`.
    pub bound: f64,
}

fn finish(decomp: &SpectralDecomp, map: &PlaneMap, disc: &Disc) -> SurgeryResult {
    let moved: Vec<Complex64> = decomp.eigenvalues().iter().map(|&z| map.apply(z)).collect();
    let moved_count = decomp.eigenvalues().iter().zip(&moved).filter(|(a, b)| a != b).count();
    let out = decomp.with_eigenvalues(moved);
    let output = out.reconstruct();
    let perturbation_norm = if moved_count == 0 {
        0.0
    } else {
        operator_norm(&(&decomp.reconstruct() - &output))
    };
    SurgeryResult {
        output,
        decomp: out,
        moved_count,
        perturbation_norm,
        bound: disc.diameter(),
    }
}

/// Removes the open disc from the spectrum: eigenvalues inside are pushed to
/// the boundary along rays from `anchor`, everything else is untouched.
pub fn remove_region(decomp: &SpectralDecomp, disc: &Disc, anchor: Complex64) -> Result<SurgeryResult> {
    if !disc.contains(anchor) {
        return Err(Error::invalid(format!("anchor {anchor} is not inside the disc")));
    }
    let map = PlaneMap::BoundaryPush { disc: *disc, anchor };
    Ok(finish(decomp, &map, disc))
}

/// Removes the disc from a spectrum that meets it only along the chord
/// `[minus, plus]`: enclosed eigenvalues snap to the nearer endpoint.
///
/// Fails with [`Error::SpectrumOffContour`] when an enclosed eigenvalue is
/// farther than `chord_tol` from the chord.
pub fn remove_arc(
    decomp: &SpectralDecomp,
    disc: &Disc,
    minus: Complex64,
    plus: Complex64,
    chord_tol: Option<f64>,
) -> Result<SurgeryResult> {
    let on_circle = |e: Complex64| ((e - disc.center).norm() - disc.radius).abs() <= 1e-9 * disc.radius;
    if !on_circle(minus) || !on_circle(plus) {
        return Err(Error::invalid("chord endpoints must lie on the disc boundary"));
    }
    if minus == plus {
        return Err(Error::invalid("chord endpoints must differ"));
    }
    let tol = chord_tol.unwrap_or(1e-9 * disc.diameter());
    for &z in decomp.eigenvalues() {
        if disc.contains(z) && distance_to_segment(z, minus, plus) > tol {
            return Err(Error::SpectrumOffContour { eigenvalue: z });
        }
    }
    let map = PlaneMap::ChordSnap {
        disc: *disc,
        minus,
        plus,
    };
    Ok(finish(decomp, &map, disc))
}

fn distance_to_segment(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = ((z - a).conj() * d).re / d.norm_sqr();
    (z - (a + d * t.clamp(0.0, 1.0))).norm()
}

/// `f(x) = (r + ε)·cos(2πx/ε)` on `[−r−ε, r+ε]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub eps: f64,
    pub r: f64,
}

pub fn oscillator(eps: f64, r: f64) -> Result<Oscillator> {
    if !(eps > 0.0 && eps.is_finite()) || !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!(
            "oscillator needs eps > 0 and r > 0, got eps={eps}, r={r}"
        )));
    }
    Ok(Oscillator { eps, r })
}

impl Oscillator {
    pub fn amplitude(&self) -> f64 {
        self.r + self.eps
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude() * (TAU * x / self.eps).cos()
    }

    pub fn domain(&self) -> (f64, f64) {
        (-self.amplitude(), self.amplitude())
    }

    /// Nearest `x'` to `x` with `f(x') = y`, by bisection on the monotone
    /// half-periods around `x`. `y` must lie in `[−(r+ε), r+ε]`.
    pub fn nearest_level_point(&self, x: f64, y: f64) -> f64 {
        let half = 0.5 * self.eps;
        let k0 = (x / half).floor() as i64;
        let mut best = f64::NAN;
        let mut best_dist = f64::INFINITY;
        for k in k0 - 1..=k0 + 1 {
            let (lo, hi) = (k as f64 * half, (k + 1) as f64 * half);
            if let Some(root) = self.bisect(lo, hi, y) {
                let d = (root - x).abs();
                // ties go to the larger root
                let tie = (d - best_dist).abs() <= 1e-12 * self.eps;
                if (d < best_dist && !tie) || (tie && root > best) {
                    best_dist = d;
                    best = root;
                }
            }
        }
        best
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, y: f64) -> Option<f64> {
        let g = |t: f64| self.eval(t) - y;
        let (mut glo, ghi) = (g(lo), g(hi));
        if glo == 0.0 {
            return Some(lo);
        }
        if ghi == 0.0 {
            return Some(hi);
        }
        if glo.signum() == ghi.signum() {
            // level at the extremum of this half-period, up to rounding
            let extreme = if glo.abs() < ghi.abs() { lo } else { hi };
            let scale = self.amplitude();
            return (g(extreme).abs() <= 4.0 * f64::EPSILON * scale).then_some(extreme);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let gm = g(mid);
            if gm == 0.0 {
                return Some(mid);
            }
            if gm.signum() == glo.signum() {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// Numerical net constant `ε′` of the level sets of `f` over the disc slices
/// of radius `r + ε`; `+∞` when `ε′ ≥ ε` or some level has no solution.
///
/// Levels are sampled with step `ε/100`; level sets are located by sign
/// changes on a grid of step `ε/2000` over `[−r−ε, r+ε]` and refined by bisection.
pub fn check_oscillator(f: impl Fn(f64) -> f64, eps: f64, r: f64) -> f64 {
    let big_r = r + eps;
    let x_step = eps / 2000.0;
    let nx = (2.0 * big_r / x_step).ceil() as usize;
    let xs: Vec<f64> = (0..=nx).map(|i| (-big_r + i as f64 * x_step).min(big_r)).collect();
    let fx: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let y_step = eps / 100.0;
    let ny = (2.0 * big_r / y_step).round() as usize;
    let mut worst: f64 = 0.0;
    for iy in 0..=ny {
        let y = (-big_r + iy as f64 * y_step).min(big_r);
        let roots = level_set(&f, &xs, &fx, y);
        let w = (big_r * big_r - y * y).max(0.0).sqrt();
        let d = net_distance(&roots, -w, w);
        worst = worst.max(d);
        if worst >= eps {
            return f64::INFINITY;
        }
    }
    worst
}

fn level_set(f: &impl Fn(f64) -> f64, xs: &[f64], fx: &[f64], y: f64) -> Vec<f64> {
    let tol = 1e-12 * (1.0 + y.abs());
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        let g0 = fx[i] - y;
        if g0.abs() <= tol {
            roots.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() {
            let g1 = fx[i + 1] - y;
            if g1.abs() > tol && g0.signum() != g1.signum() {
                let (mut lo, mut hi, mut glo) = (xs[i], xs[i + 1], g0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let gm = f(mid) - y;
                    if gm.signum() == glo.signum() {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            } else if i > 0 && g1.abs() > tol {
                // touching extremum: a local extremum of g between samples close to zero
                let gm1 = fx[i - 1] - y;
                if g0.abs() < gm1.abs()
                    && g0.abs() < g1.abs()
                    && g0.signum() == g1.signum()
                    && g0.signum() == gm1.signum()
                {
                    let x = refine_extremum(f, xs[i - 1], xs[i + 1], y);
                    if (f(x) - y).abs() <= 1e-9 * (1.0 + y.abs()) {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots
}

fn refine_extremum(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, y: f64) -> f64 {
    // golden-section search minimizing |f − y|
    let g = |t: f64| (f(t) - y).abs();
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..120 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if g(a) < g(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

/// Largest distance from a point of `[lo, hi]` to the nearest root.
fn net_distance(roots: &[f64], lo: f64, hi: f64) -> f64 {
    if roots.is_empty() {
        return f64::INFINITY;
    }
    let nearest = |x: f64| roots.iter().map(|r| (r - x).abs()).fold(f64::INFINITY, f64::min);
    let mut worst = nearest(lo).max(nearest(hi));
    for pair in roots.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        if mid > lo && mid < hi {
            worst = worst.max(0.5 * (pair[1] - pair[0]));
        }
    }
    worst
}

/// Diagnostics of [`graph_normal_approx`].
#[derive(Debug, Clone, Serialize)]
pub struct GraphReport {
    pub eps: f64,
    /// `r = ‖A‖`.
    pub radius: f64,
    /// `r/(r+ε)`.
    pub scale: f64,
    /// `max_k |ε_k|`.
    pub max_shift: f64,
    pub perturbation_norm: f64,
    /// `2ε + ε(1 + ‖A‖)`.
    pub bound: f64,
}

/// Output of [`graph_normal_approx`].
#[derive(Debug, Clone)]
pub struct GraphApprox {
    pub output: CMatrix,
    pub decomp: SpectralDecomp,
    pub report: GraphReport,
}

impl GraphApprox {
    /// `|Im w − s·f(Re w / s)|` maximized over output eigenvalues `w`.
    pub fn graph_residual(&self) -> f64 {
        let s = self.report.scale;
        if s == 0.0 {
            return self.decomp.eigenvalues().iter().map(|w| w.norm()).fold(0.0, f64::max);
        }
        let f = Oscillator {
            eps: self.report.eps,
            r: self.report.radius,
        };
        self.decomp
            .eigenvalues()
            .iter()
            .map(|w| (w.im - s * f.eval(w.re / s)).abs())
            .fold(0.0, f64::max)
    }
}

/// Moves each eigenvalue `x + iy` horizontally to the nearest point of the
/// graph of `f = oscillator(ε, ‖A‖)` at height `y`, then scales by
/// `r/(r+ε)` so the norm does not grow.
pub fn graph_normal_approx(decomp: &SpectralDecomp, eps: f64) -> Result<GraphApprox> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let r = decomp.spectral_radius();
    if r == 0.0 {
        let decomp_out = decomp.with_eigenvalues(vec![Complex64::new(0.0, 0.0); decomp.dim()]);
        return Ok(GraphApprox {
            output: decomp_out.reconstruct(),
            decomp: decomp_out,
            report: GraphReport {
                eps,
                radius: 0.0,
                scale: 0.0,
                max_shift: 0.0,
                perturbation_norm: 0.0,
                bound: 3.0 * eps,
            },
        });
    }
    let f = oscillator(eps, r)?;
    let amp = f.amplitude();
    let scale = r / amp;
    let mut max_shift: f64 = 0.0;
    let moved: Vec<Complex64> = decomp
        .eigenvalues()
        .iter()
        .map(|z| {
            let y = z.im.clamp(-amp, amp);
            let x = f.nearest_level_point(z.re, y);
            max_shift = max_shift.max((x - z.re).abs());
            Complex64::new(x, f.eval(x)) * scale
        })
        .collect();
    let out = decomp.with_eigenvalues(moved);
    let output = out.reconstruct();
    let perturbation_norm = operator_norm(&(&decomp.reconstruct() - &output));
    Ok(GraphApprox {
        output,
        decomp: out,
        report: GraphReport {
            eps,
            radius: r,
            scale,
            max_shift,
            perturbation_norm,
            bound: 2.0 * eps + eps * (1.0 + r),
        },
    })
}

/// `‖A − Ã‖` reported by [`graph_normal_approx`] is bounded by this per-eigenvalue
/// displacement; useful for comparing against the operator-norm route.
pub fn max_eigenvalue_displacement(before: &SpectralDecomp, after: &SpectralDecomp) -> f64 {
    before
        .eigenvalues()
        .iter()
        .zip(after.eigenvalues())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}
