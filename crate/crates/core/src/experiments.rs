//! Truncation inequalities, pseudospectra and the defect/distance scatter.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gallery::{EnsembleSpec, LaurentWindow};
use crate::linalg::{commutator, operator_norm, schatten_norm, self_commutator, singular_values, CMatrix, SchattenP};
use crate::nearest::{nearest_normal, MaximizeOptions};

/// Formats a float with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV record per row, under a fixed header.
pub trait CsvRow {
    fn header() -> &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

/// Writes `# ` prefixed preamble lines, the header and the rows.
pub fn write_csv<W: Write, R: CsvRow>(mut out: W, preamble: &[String], rows: &[R]) -> std::io::Result<()> {
    for line in preamble {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::header())?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()
}

/// `N(λ)` and `N₁(λ)` on a grid of `λ` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingReport {
    pub lambda_grid: Vec<f64>,
    /// `#{j : g_j < λ}`.
    pub n: Vec<usize>,
    /// `max_{μ ≤ λ} #{j : μ − 1 ≤ g_j < μ}`.
    pub n1: Vec<usize>,
}

fn check_sorted(g: &[f64]) -> Result<()> {
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if g.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("eigenvalues of G must be sorted ascending"));
    }
    Ok(())
}

fn count_below(g: &[f64], lambda: f64) -> usize {
    g.partition_point(|&x| x < lambda)
}

fn window_count(g: &[f64], mu: f64) -> usize {
    count_below(g, mu) - count_below(g, mu - 1.0)
}

/// `N₁(λ)`: the window count is piecewise constant in `μ` and its maximum
/// over `μ ≤ λ` is attained at `μ = λ` or at some `μ = g_j + 1 ≤ λ`.
fn n1_at(g: &[f64], lambda: f64) -> usize {
    let mut best = window_count(g, lambda);
    for &x in g {
        let mu = x + 1.0;
        if mu > lambda {
            break;
        }
        best = best.max(window_count(g, mu));
    }
    best
}

pub fn counting_functions(g: &[f64], lambda_grid: &[f64]) -> Result<CountingReport> {
    check_sorted(g)?;
    let mut n1 = Vec::with_capacity(lambda_grid.len());
    let mut running_max = 0;
    let mut order: Vec<usize> = (0..lambda_grid.len()).collect();
    order.sort_by(|&i, &j| lambda_grid[i].total_cmp(&lambda_grid[j]));
    let mut by_index = vec![0; lambda_grid.len()];
    for &i in &order {
        running_max = running_max.max(n1_at(g, lambda_grid[i]));
        by_index[i] = running_max;
    }
    n1.extend(by_index);
    Ok(CountingReport {
        lambda_grid: lambda_grid.to_vec(),
        n: lambda_grid.iter().map(|&l| count_below(g, l)).collect(),
        n1,
    })
}

/// `A` written in an eigenbasis of a positive `G` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct TruncationModel {
    pub g: Vec<f64>,
    pub a: CMatrix,
    pub norm_a: f64,
    /// `‖[G, A]‖`.
    pub norm_commutator_ga: f64,
    /// Largest `λ` accepted by [`verify_truncation_bounds`], if any.
    pub edge_guard: Option<f64>,
}

impl TruncationModel {
    pub fn new(g: Vec<f64>, a: CMatrix) -> Result<Self> {
        check_sorted(&g)?;
        if g.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                left: g.len(),
                right: a.dim(),
            });
        }
        let gm = CMatrix::from_real_diag(&g);
        let norm_commutator_ga = operator_norm(&commutator(&gm, &a)?);
        Ok(TruncationModel {
            norm_a: operator_norm(&a),
            norm_commutator_ga,
            g,
            a,
            edge_guard: None,
        })
    }

    /// Reorders the window by `(|k|, k)` so that `G` is ascending; the edge
    /// guard is `K/2`.
    pub fn from_laurent(window: &LaurentWindow) -> Result<Self> {
        let mut perm: Vec<usize> = (0..window.dim()).collect();
        perm.sort_by_key(|&i| {
            let k = window.mode(i);
            (k.unsigned_abs(), k)
        });
        let g: Vec<f64> = perm.iter().map(|&i| window.mode(i).unsigned_abs() as f64).collect();
        let mut model = Self::new(g, window.a.permuted(&perm))?;
        model.edge_guard = Some(window.window as f64 / 2.0);
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    /// `N(λ)`.
    pub fn rank(&self, lambda: f64) -> usize {
        count_below(&self.g, lambda)
    }

    /// `N₁(λ)`.
    pub fn window_rank(&self, lambda: f64) -> usize {
        n1_at(&self.g, lambda)
    }
}

/// `A_λ = P_λ A P_λ` on the range of `P_λ`, of dimension `N(λ)`.
pub fn truncate(model: &TruncationModel, lambda: f64) -> Result<CMatrix> {
    match model.rank(lambda) {
        0 => Err(Error::EmptyTruncation { lambda }),
        n => Ok(model.a.leading_block(n)),
    }
}

/// Both sides of the two truncation inequalities at one `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationCheck {
    pub lambda: f64,
    pub n: usize,
    pub n1: usize,
    /// `‖(I − P_λ)AP_λ‖₂²`.
    pub lhs2: f64,
    /// `‖(I − P_λ)A*P_λ‖₂²`.
    pub lhs2_adjoint: f64,
    /// `(‖A‖² + (π²/6)‖[G, A]‖²)·N₁(λ)`.
    pub rhs2: f64,
    /// `‖[A_λ*, A_λ]‖₁`.
    pub lhs3: f64,
    /// `(2‖A‖² + (π²/3)‖[G, A]‖²)·N₁(λ)`.
    pub rhs3: f64,
    pub pass: bool,
}

const SLACK: f64 = 1e-9;

pub fn verify_truncation_bounds(model: &TruncationModel, lambda: f64) -> Result<TruncationCheck> {
    if let Some(guard) = model.edge_guard {
        if lambda > guard {
            return Err(Error::invalid(format!(
                "lambda {lambda} exceeds the edge guard {guard}"
            )));
        }
    }
    let a_l = truncate(model, lambda)?;
    let n = a_l.dim();
    let n1 = model.window_rank(lambda);
    let a = &model.a;
    let (mut lhs2, mut lhs2_adjoint) = (0.0, 0.0);
    for i in n..model.dim() {
        for j in 0..n {
            lhs2 += a[(i, j)].norm_sqr();
            lhs2_adjoint += a[(j, i)].norm_sqr();
        }
    }
    let (na2, nc2) = (model.norm_a.powi(2), model.norm_commutator_ga.powi(2));
    let rhs2 = (na2 + PI * PI / 6.0 * nc2) * n1 as f64;
    let rhs3 = (2.0 * na2 + PI * PI / 3.0 * nc2) * n1 as f64;
    let lhs3 = schatten_norm(&self_commutator(&a_l), SchattenP::TRACE)?;
    let ok = |l: f64, r: f64| l <= r + SLACK * (1.0 + r);
    Ok(TruncationCheck {
        lambda,
        n,
        n1,
        lhs2,
        lhs2_adjoint,
        rhs2,
        lhs3,
        rhs3,
        pass: ok(lhs2, rhs2) && ok(lhs2_adjoint, rhs2) && ok(lhs3, rhs3),
    })
}

/// [`TruncationCheck`] plus the trace-norm distance of the nearest-normal
/// witness of `A_λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub check: TruncationCheck,
    /// `‖A_λ − T‖₁` for the witness `T` (an upper bound on the distance).
    pub dist1_witness: f64,
    /// `dist1_witness / N(λ)`.
    pub ratio: f64,
}

impl CsvRow for ScalingRow {
    fn header() -> &'static [&'static str] {
        &[
            "lambda",
            "N",
            "N1",
            "lhs2",
            "lhs2_adjoint",
            "rhs2",
            "lhs3",
            "rhs3",
            "pass",
            "dist1_witness",
            "dist1_over_N",
        ]
    }

    fn record(&self) -> Vec<String> {
        let c = &self.check;
        vec![
            fmt_float(c.lambda),
            c.n.to_string(),
            c.n1.to_string(),
            fmt_float(c.lhs2),
            fmt_float(c.lhs2_adjoint),
            fmt_float(c.rhs2),
            fmt_float(c.lhs3),
            fmt_float(c.rhs3),
            c.pass.to_string(),
            fmt_float(self.dist1_witness),
            fmt_float(self.ratio),
        ]
    }
}

pub fn truncation_scaling(
    model: &TruncationModel,
    lambda_grid: &[f64],
    opts: &MaximizeOptions,
) -> Result<Vec<ScalingRow>> {
    lambda_grid
        .iter()
        .map(|&lambda| {
            let check = verify_truncation_bounds(model, lambda)?;
            let a_l = truncate(model, lambda)?;
            let report = nearest_normal(&a_l, &[SchattenP::TRACE], opts);
            let dist1_witness = report.distance(SchattenP::TRACE).expect("requested");
            Ok(ScalingRow {
                ratio: dist1_witness / check.n as f64,
                check,
                dist1_witness,
            })
        })
        .collect()
}

/// Square lattice `center + (x + iy)` with `x, y` running over
/// `resolution` equally spaced values in `[−half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub center: Complex64,
    pub half_width: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub const DEFAULT_RESOLUTION: usize = 201;

    /// Grid centered at the origin covering the disc of radius `‖A‖ + ε`.
    pub fn covering(a: &CMatrix, eps: f64, resolution: usize) -> Self {
        GridSpec {
            center: Complex64::new(0.0, 0.0),
            half_width: operator_norm(a) + eps,
            resolution,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::invalid("grid resolution must be at least 2"));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::invalid("grid half-width must be positive"));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.resolution - 1) as f64
    }

    /// Points ordered by imaginary part, then real part.
    pub fn points(&self) -> Vec<Complex64> {
        let coord = |i: usize| -self.half_width + i as f64 * self.step();
        let mut pts = Vec::with_capacity(self.resolution * self.resolution);
        for j in 0..self.resolution {
            for i in 0..self.resolution {
                pts.push(self.center + Complex64::new(coord(i), coord(j)));
            }
        }
        pts
    }

    /// Whether the lattice square contains the closed disc `|z| ≤ r`.
    pub fn covers_disc(&self, r: f64) -> bool {
        self.center.re.abs() + r <= self.half_width && self.center.im.abs() + r <= self.half_width
    }
}

/// `σ_min(A − zI)`.
pub fn sigma_min(a: &CMatrix, z: Complex64) -> f64 {
    let shifted = a - &CMatrix::identity(a.dim()).scale(z);
    *singular_values(&shifted).last().expect("nonempty")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PseudospectrumReport {
    pub epsilon: f64,
    pub grid: GridSpec,
    /// Grid points with `σ_min(A − zI) < ε`, in grid order.
    pub members: Vec<Complex64>,
    /// `max` over members of the distance to the reference set; `0` with no
    /// members, `None` when there are members but no reference points.
    pub d_eps: Option<f64>,
}

pub fn pseudospectrum(a: &CMatrix, eps: f64, grid: &GridSpec, reference: &[Complex64]) -> Result<PseudospectrumReport> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("epsilon must be positive, got {eps}")));
    }
    grid.validate()?;
    let needed = operator_norm(a) + eps;
    if !grid.covers_disc(needed) {
        return Err(Error::invalid(format!(
            "grid does not cover the disc of radius {needed} (norm + epsilon)"
        )));
    }
    let members: Vec<Complex64> = grid
        .points()
        .into_par_iter()
        .filter(|&z| sigma_min(a, z) < eps)
        .collect();
    let d_eps = if members.is_empty() {
        Some(0.0)
    } else if reference.is_empty() {
        None
    } else {
        Some(
            members
                .iter()
                .map(|z| reference.iter().map(|s| (z - s).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max),
        )
    };
    Ok(PseudospectrumReport {
        epsilon: eps,
        grid: *grid,
        members,
        d_eps,
    })
}

/// One point of the defect/distance scatter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub index: usize,
    pub label: String,
    pub dim: usize,
    /// `‖[A*, A]‖`.
    pub defect: f64,
    /// `‖[A*, A]‖₂`.
    pub defect_frob: f64,
    /// `‖A − T‖` for the nearest-normal witness `T`.
    pub dist_op_witness: f64,
    pub dist_frob_exact: f64,
    /// `defect / 4`.
    pub lower_bound_op: f64,
    /// `dist_frob_exact / defect_frob`, `0` for normal members.
    pub frob_ratio: f64,
}

impl CsvRow for ScatterRow {
    fn header() -> &'static [&'static str] {
        &[
            "index",
            "label",
            "dim",
            "defect",
            "defect_frob",
            "dist_op_witness",
            "dist_frob_exact",
            "lower_bound_op",
            "frob_ratio",
        ]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.index.to_string(),
            self.label.clone(),
            self.dim.to_string(),
            fmt_float(self.defect),
            fmt_float(self.defect_frob),
            fmt_float(self.dist_op_witness),
            fmt_float(self.dist_frob_exact),
            fmt_float(self.lower_bound_op),
            fmt_float(self.frob_ratio),
        ]
    }
}

/// Scatter of `‖[A*, A]‖` against the distance to normal matrices. Members
/// with `‖A‖ > 1` are rescaled to norm one. Fails with
/// [`Error::BoundViolation`] if a row breaks `dist ≥ defect/4`.
pub fn f_scatter(ensemble: &[EnsembleSpec], opts: &MaximizeOptions) -> Result<Vec<ScatterRow>> {
    ensemble
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            let mut a = spec.generate()?;
            let norm = operator_norm(&a);
            if norm > 1.0 {
                a = a.scale_real(1.0 / norm);
            }
            let comm = self_commutator(&a);
            let defect = operator_norm(&comm);
            let defect_frob = comm.frobenius();
            let report = nearest_normal(&a, &[SchattenP::OPERATOR], opts);
            let dist_op_witness = report.distance(SchattenP::OPERATOR).expect("requested");
            let lower_bound_op = defect / 4.0;
            if dist_op_witness < lower_bound_op - SLACK {
                return Err(Error::BoundViolation(format!(
                    "{}: distance {dist_op_witness} below defect/4 = {lower_bound_op}",
                    spec.label()
                )));
            }
            Ok(ScatterRow {
                index,
                label: spec.label(),
                dim: a.dim(),
                defect,
                defect_frob,
                dist_op_witness,
                dist_frob_exact: report.frobenius_exact,
                lower_bound_op,
                frob_ratio: if defect_frob > 0.0 {
                    report.frobenius_exact / defect_frob
                } else {
                    0.0
                },
            })
        })
        .collect()
}
