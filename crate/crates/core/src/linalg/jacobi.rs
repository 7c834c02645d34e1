use num_complex::Complex64;

use super::matrix::{CMatrix, ONE, ZERO};

pub(crate) type Rot2 = [[Complex64; 2]; 2];

/// Unitary `g` with `g*·H·g` diagonal for `H = [[app, apq], [conj(apq), aqq]]`.
///
/// The phase of `apq` is removed first; what remains is the real symmetric
/// Jacobi rotation with the smaller of the two admissible angles.
pub(crate) fn hermitian_rotation(app: f64, aqq: f64, apq: Complex64) -> Rot2 {
    let r = apq.norm();
    if r == 0.0 {
        return [[ONE, ZERO], [ZERO, ONE]];
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let e = phase.conj();
    [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [e * -s, e * c]]
}

/// Cyclic Jacobi on a Hermitian matrix. Returns ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
pub(crate) fn jacobi_hermitian(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    const MAX_SWEEPS: usize = 100;
    let n = a.dim();
    let mut b = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = b.frobenius();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    let floor = f64::EPSILON * 1e-6 * scale;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = b[(p, q)];
                let app = b[(p, p)].re;
                let aqq = b[(q, q)].re;
                if apq.norm() <= f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) || apq.norm() <= floor {
                    b[(p, q)] = ZERO;
                    b[(q, p)] = ZERO;
                    continue;
                }
                rotated = true;
                let g = hermitian_rotation(app, aqq, apq);
                b.similarity_rotate(p, q, &g);
                b[(p, q)] = ZERO;
                b[(q, p)] = ZERO;
                b[(p, p)].im = 0.0;
                b[(q, q)].im = 0.0;
                v.rotate_columns(p, q, &g);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| b[(i, i)].re.total_cmp(&b[(j, j)].re));
    let values = order.iter().map(|&i| b[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    (values, vectors)
}

/// One-sided (Hestenes) Jacobi: orthogonalizes the columns of `A·W`.
/// Returns the column-orthogonal `A·W` and, when requested, `W`.
pub(crate) fn one_sided_jacobi(a: &CMatrix, want_right: bool) -> (CMatrix, Option<CMatrix>) {
    const MAX_SWEEPS: usize = 80;
    let n = a.dim();
    // column-major working copy: g[j] is column j
    let mut g: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut w = want_right.then(|| CMatrix::identity(n));
    let tol = f64::EPSILON * n as f64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (gp, gq) = (&g[p], &g[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = ZERO;
                    for (x, y) in gp.iter().zip(gq) {
                        alpha += x.norm_sqr();
                        beta += y.norm_sqr();
                        gamma += x.conj() * y;
                    }
                    (alpha, beta, gamma)
                };
                if alpha == 0.0 || beta == 0.0 || gamma.norm() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = hermitian_rotation(alpha, beta, gamma);
                let (left, right) = g.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * rot[0][0] + yq * rot[1][0];
                    *y = xp * rot[0][1] + yq * rot[1][1];
                }
                if let Some(w) = w.as_mut() {
                    w.rotate_columns(p, q, &rot);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut out = CMatrix::zeros(n);
    for (j, col) in g.iter().enumerate() {
        out.set_column(j, col);
    }
    (out, w)
}

/// Fills the columns of `u` flagged `missing` with unit vectors orthogonal to
/// every other column (modified Gram–Schmidt against the standard basis).
pub(crate) fn complete_orthonormal(u: &mut CMatrix, missing: &[bool]) {
    let n = u.dim();
    let mut basis: Vec<Vec<Complex64>> = (0..n).filter(|&j| !missing[j]).map(|j| u.column(j)).collect();
    let mut candidates = 0..n;
    for j in (0..n).filter(|&j| missing[j]) {
        loop {
            let e = candidates
                .next()
                .expect("unitary completion exhausted the standard basis");
            let mut v = vec![ZERO; n];
            v[e] = ONE;
            for _ in 0..2 {
                for b in &basis {
                    let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                v.iter_mut().for_each(|z| *z /= norm);
                u.set_column(j, &v);
                basis.push(v);
                break;
            }
        }
    }
}
