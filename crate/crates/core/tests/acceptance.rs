//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use almost_normal::experiments::{pseudospectrum, verify_truncation_bounds, GridSpec, TruncationModel};
use almost_normal::gallery::{
    almost_commuting_pair, laurent_multiplication, random_normal, random_unitary, shift_example, LaurentSymbol,
    PairBounds,
};
use almost_normal::linalg::{commutator, normal_spectral_decomp, normality_defect, operator_norm, schatten_norm};
use almost_normal::nearest::{nearest_normal, MaximizeOptions};
use almost_normal::partition::{finite_spectrum_approx, spectral_projection, square_cover, Disc};
use almost_normal::surgery::{graph_normal_approx, remove_arc, remove_region};
use almost_normal::{CMatrix, Complex64, Error, SchattenP, SpectralDecomp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// a NaN has to fail the check, hence the negated comparison
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).max_abs()
}

fn shift_exactness() -> Outcome {
    let mut slowest = Duration::ZERO;
    for m in [2usize, 4, 8, 16, 32] {
        let a = shift_example(m).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let r = nearest_normal(&a, &[SchattenP::FROBENIUS], &MaximizeOptions::new(0));
        let took = start.elapsed();
        slowest = slowest.max(took);
        let want = (m as f64 / 4.0).sqrt();
        let rel = (r.frobenius_exact - want).abs() / want;
        ensure!(
            rel <= 1e-7,
            "m={m}: frobenius {} vs {want} (rel {rel:e})",
            r.frobenius_exact
        );
        ensure!(took < Duration::from_secs(5), "m={m} took {took:?}");
    }
    Ok(format!("m in 2..32, slowest instance {slowest:.2?}"))
}

fn shift_commutators() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [2usize, 4, 8, 16, 32] {
        let a = shift_example(m).map_err(|e| e.to_string())?;
        let comm = commutator(&a, &a.adjoint()).map_err(|e| e.to_string())?;
        let f = schatten_norm(&comm, SchattenP::FROBENIUS).map_err(|e| e.to_string())?;
        let err = (f - (m as f64).sqrt()).abs();
        worst = worst.max(err);
        ensure!(err <= 1e-10, "m={m}: ‖[A,A*]‖₂ = {f}");
    }
    Ok(format!("max error {worst:.1e}"))
}

fn lower_bound_sandwich() -> Outcome {
    let ps = [SchattenP::TRACE, SchattenP::FROBENIUS, SchattenP::OPERATOR];
    let mut tightest = f64::INFINITY;
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0000 + seed);
        let n = rng.random_range(2..=12);
        let raw = random_matrix(&mut rng, n);
        let target = rng.random_range(0.05..=1.0);
        let a = raw.scale_real(target / operator_norm(&raw));
        let r = nearest_normal(&a, &ps, &MaximizeOptions::new(seed));
        for p in ps {
            let (lo, d) = (r.lower_bound(p).unwrap(), r.distance(p).unwrap());
            ensure!(lo <= d + 1e-9, "seed {seed} dim {n} p={p}: lower {lo} > distance {d}");
            tightest = tightest.min(d - lo);
        }
        let lo2 = r.lower_bound(SchattenP::FROBENIUS).unwrap();
        ensure!(
            lo2 <= r.frobenius_exact + 1e-9,
            "seed {seed}: lower(2) {lo2} > frobenius {}",
            r.frobenius_exact
        );
    }
    Ok(format!("500 matrices, min gap {tightest:.3e}"))
}

fn normal_ensemble() -> impl Iterator<Item = (u64, SpectralDecomp)> {
    (0..200u64).map(|seed| {
        let n = 2 + (seed as usize % 15);
        (seed, random_normal(n, 0x9A27 + seed).decomposition())
    })
}

fn partition_bound() -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    for (seed, d) in normal_ensemble() {
        for side in [0.5, 0.1, 0.02] {
            let cover = square_cover(d.eigenvalues(), side).map_err(|e| e.to_string())?;
            let approx = finite_spectrum_approx(&d, &cover).map_err(|e| e.to_string())?;
            let bound = 4f64.sqrt() * side * 2f64.sqrt();
            ensure!(
                approx.multiplicity <= 4,
                "seed {seed}: multiplicity {}",
                approx.multiplicity
            );
            ensure!(
                approx.error_actual <= bound,
                "seed {seed} side {side}: {} > {bound}",
                approx.error_actual
            );
            let disp = approx.eigenvalue_displacement(&d);
            ensure!(
                approx.error_actual <= disp + 1e-12,
                "seed {seed} side {side}: error {} exceeds displacement {disp}",
                approx.error_actual
            );
            worst_ratio = worst_ratio.max(approx.error_actual / bound);
        }
    }
    Ok(format!("600 covers, max error/bound {worst_ratio:.3}"))
}

fn projection_algebra() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut worst: f64 = 0.0;
    for (seed, d) in normal_ensemble() {
        let n = d.dim();
        let id = CMatrix::identity(n);
        for side in [0.5, 0.1, 0.02] {
            let cover = square_cover(d.eigenvalues(), side).map_err(|e| e.to_string())?;
            let res = finite_spectrum_approx(&d, &cover)
                .map_err(|e| e.to_string())?
                .resolution;
            let mut sum = CMatrix::zeros(n);
            for (j, p) in res.projections.iter().enumerate() {
                let herm = max_abs_diff(p, &p.adjoint());
                let idem = max_abs_diff(&(p * p), p);
                let pi = spectral_projection(&d, &res.cover.regions[j]);
                let sub = (&(&id - &pi) * p).frobenius();
                worst = worst.max(herm).max(idem).max(sub);
                ensure!(
                    herm <= TOL && idem <= TOL,
                    "seed {seed}: P_{j} not an orthogonal projection"
                );
                ensure!(sub <= TOL, "seed {seed}: range of P_{j} leaves its region ({sub:e})");
                for q in &res.projections[j + 1..] {
                    let cross = (p * q).frobenius();
                    worst = worst.max(cross);
                    ensure!(cross <= TOL, "seed {seed}: P_i P_j = {cross:e}");
                }
                sum = &sum + p;
            }
            let total = max_abs_diff(&sum, &id);
            worst = worst.max(total);
            ensure!(total <= TOL, "seed {seed}: Σ P_j differs from I by {total:e}");
        }
    }
    Ok(format!("worst residual {worst:.1e}"))
}

fn surgery_invariants() -> Outcome {
    let mut moved_total = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5E7 + seed);
        let n = rng.random_range(2..=12);
        let d = random_normal(n, seed).decomposition();
        let a = d.reconstruct();
        let r = rng.random_range(0.1..1.0);
        let centre = c(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
        let anchor = centre + Complex64::from_polar(0.9 * r * rng.random::<f64>(), rng.random::<f64>() * TAU);
        let disc = Disc::new(centre, r).map_err(|e| e.to_string())?;
        let out = remove_region(&d, &disc, anchor).map_err(|e| e.to_string())?;

        ensure!(out.decomp.basis() == d.basis(), "seed {seed}: eigenbasis changed");
        for (k, (&before, &after)) in d.eigenvalues().iter().zip(out.decomp.eigenvalues()).enumerate() {
            if disc.contains(before) {
                moved_total += 1;
                let off = ((after - centre).norm() - r).abs();
                ensure!(
                    off <= 1e-12 * r,
                    "seed {seed}: moved eigenvalue {k} is {off:e} off the circle"
                );
            } else {
                ensure!(before == after, "seed {seed}: untouched eigenvalue {k} changed");
            }
            ensure!(!disc.contains(after), "seed {seed}: eigenvalue {after} still inside");
        }
        // the untouched block also survives at matrix level
        let pi = spectral_projection(&d, &disc.into());
        let keep = &CMatrix::identity(n) - &pi;
        let block = (&(&out.output - &a) * &keep).frobenius();
        ensure!(block <= 1e-12, "seed {seed}: (A_Ω − A)(I − Π) = {block:e}");
        let pert = operator_norm(&(&a - &out.output));
        ensure!(
            pert <= 2.0 * r * (1.0 + 1e-12),
            "seed {seed}: ‖A − A_Ω‖ = {pert} > 2r = {}",
            2.0 * r
        );
    }

    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA2C + seed);
        let disc = Disc::new(
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            rng.random_range(0.2..2.0),
        )
        .map_err(|e| e.to_string())?;
        let t0 = rng.random::<f64>() * TAU;
        let t1 = t0 + rng.random_range(0.3..(TAU - 0.3));
        let (minus, plus) = (
            disc.center + Complex64::from_polar(disc.radius, t0),
            disc.center + Complex64::from_polar(disc.radius, t1),
        );
        let n = rng.random_range(3..=9);
        let eigs: Vec<Complex64> = (0..n)
            .map(|k| {
                if k % 3 == 2 {
                    disc.center
                        + Complex64::from_polar(disc.radius * rng.random_range(1.5..3.0), rng.random::<f64>() * TAU)
                } else {
                    let s = rng.random::<f64>();
                    minus * (1.0 - s) + plus * s
                }
            })
            .collect();
        let d = SpectralDecomp::from_parts(eigs.clone(), random_unitary(n, seed)).map_err(|e| e.to_string())?;
        let out = remove_arc(&d, &disc, minus, plus, None).map_err(|e| format!("seed {seed}: {e}"))?;
        for (&before, &after) in eigs.iter().zip(out.decomp.eigenvalues()) {
            if disc.contains(before) {
                ensure!(after == minus || after == plus, "seed {seed}: {before} went to {after}");
            } else {
                ensure!(before == after, "seed {seed}: eigenvalue outside the disc moved");
            }
        }
        let stray = SpectralDecomp::from_parts(
            vec![disc.center + (minus - disc.center) * 0.1 + (plus - minus) * 0.3],
            CMatrix::identity(1),
        )
        .map_err(|e| e.to_string())?;
        let stray_mid = stray.eigenvalues()[0];
        let on_chord =
            ((stray_mid - minus) * (plus - minus).conj()).im.abs() / (plus - minus).norm() < 1e-9 * disc.radius;
        if !on_chord {
            ensure!(
                matches!(
                    remove_arc(&stray, &disc, minus, plus, None),
                    Err(Error::SpectrumOffContour { .. })
                ),
                "seed {seed}: off-chord eigenvalue accepted"
            );
        }
    }
    Ok(format!(
        "200 disc pairs ({moved_total} moved eigenvalues), 50 arc cases"
    ))
}

fn oscillating_graph() -> Outcome {
    let epss = [0.4, 0.2, 0.1, 0.05];
    let mut worst_resid: f64 = 0.0;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize % 11);
        let d = random_normal(n, 0x6A + seed).decomposition();
        let a = d.reconstruct();
        let norm_a = operator_norm(&a);
        let mut prev: Option<f64> = None;
        for eps in epss {
            let g = graph_normal_approx(&d, eps).map_err(|e| e.to_string())?;
            let defect = normality_defect(&g.output);
            ensure!(defect <= 1e-9, "seed {seed} eps {eps}: defect {defect:e}");
            let norm_out = operator_norm(&g.output);
            ensure!(
                norm_out <= norm_a * (1.0 + 1e-12),
                "seed {seed} eps {eps}: norm grew {norm_a} -> {norm_out}"
            );

            let (r, s) = (norm_a, norm_a / (norm_a + eps));
            let f = |x: f64| (r + eps) * (TAU * x / eps).cos();
            let out_d = normal_spectral_decomp(&g.output).map_err(|e| e.to_string())?;
            for w in out_d.eigenvalues() {
                let resid = (w.im - s * f(w.re / s)).abs();
                worst_resid = worst_resid.max(resid);
                ensure!(
                    resid <= 1e-9,
                    "seed {seed} eps {eps}: eigenvalue {w} is {resid:e} off the graph"
                );
            }

            let dist = operator_norm(&(&a - &g.output));
            if let Some(p) = prev {
                ensure!(
                    dist <= 2.0 * p,
                    "seed {seed}: ‖A − Ã‖ rose from {p} to {dist} at eps {eps}"
                );
            }
            prev = Some(dist);
        }
    }
    Ok(format!("400 constructions, max graph residual {worst_resid:.1e}"))
}

fn almost_commuting() -> Outcome {
    let start = Instant::now();
    for m in 1..=512usize {
        let (a, b) = almost_commuting_pair(m).map_err(|e| e.to_string())?;
        let pb = PairBounds::measure(&a, &b);
        let mf = m as f64;
        ensure!(pb.norm_a == 1.0, "m={m}: ‖A‖ = {}", pb.norm_a);
        ensure!(
            pb.commutator_ab <= 2.0 / mf * (1.0 + 1e-12),
            "m={m}: ‖[A,B]‖ = {}",
            pb.commutator_ab
        );
        ensure!(
            pb.self_commutator_b <= 4.0 / mf * (1.0 + 1e-12),
            "m={m}: ‖[B*,B]‖ = {}",
            pb.self_commutator_b
        );
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("m = 1..512 in {took:.2?}"))
}

fn truncation_inequalities() -> Outcome {
    let mut points = 0;
    for k in [16usize, 32] {
        let window = laurent_multiplication(&LaurentSymbol::shift(), k).map_err(|e| e.to_string())?;
        let model = TruncationModel::from_laurent(&window).map_err(|e| e.to_string())?;
        let top = (k / 2) as f64;
        let grid = (3..=2 * (k / 2)).map(|j| j as f64 * 0.5).filter(|&l| l <= top);
        for lambda in grid {
            let check = verify_truncation_bounds(&model, lambda).map_err(|e| format!("K={k} λ={lambda}: {e}"))?;
            ensure!(check.pass, "K={k} λ={lambda}: {check:?}");
            ensure!(
                check.lhs2 <= check.rhs2 && check.lhs2_adjoint <= check.rhs2,
                "K={k} λ={lambda}: lhs2"
            );
            ensure!(check.lhs3 <= check.rhs3, "K={k} λ={lambda}: lhs3");
            ensure!(
                (check.lhs3 - 2.0).abs() <= 1e-12,
                "K={k} λ={lambda}: S₁ commutator {}",
                check.lhs3
            );
            let want = (2.0 + PI * PI / 3.0) * 2.0;
            ensure!(
                (check.rhs3 - want).abs() <= 1e-12 * want,
                "K={k} λ={lambda}: rhs3 {} vs {want}",
                check.rhs3
            );
            points += 1;
        }
    }
    Ok(format!(
        "{points} grid points, S₁ commutator 2 vs bound {:.4}",
        (2.0 + PI * PI / 3.0) * 2.0
    ))
}

fn pseudospectrum_correctness() -> Outcome {
    let mut checked = 0usize;
    let mut borderline = 0usize;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x95E + seed);
        let n = rng.random_range(2..=10);
        let d = random_normal(n, seed).decomposition();
        let a = d.reconstruct();
        let eps = rng.random_range(0.05..0.3);
        let grid = GridSpec::covering(&a, eps, 81);
        let report = pseudospectrum(&a, eps, &grid, d.eigenvalues()).map_err(|e| e.to_string())?;
        let members: HashSet<(u64, u64)> = report
            .members
            .iter()
            .map(|z| (z.re.to_bits(), z.im.to_bits()))
            .collect();
        let step = grid.step();
        for z in grid.points() {
            let dist = d
                .eigenvalues()
                .iter()
                .map(|l| (z - l).norm())
                .fold(f64::INFINITY, f64::min);
            let member = members.contains(&(z.re.to_bits(), z.im.to_bits()));
            if (dist < eps) != member {
                ensure!(
                    (dist - eps).abs() <= step,
                    "seed {seed}: {z} member={member} at distance {dist} (eps {eps})"
                );
                borderline += 1;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} grid points, {borderline} within one step of the boundary"
    ))
}

/// Brute-force `min_U off(U*AU)` over `U = [[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]]`.
fn brute_force_2x2(a: &CMatrix) -> f64 {
    let m = [[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]];
    let off = |theta: f64, phi: f64| -> f64 {
        let (s, co) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let u = [[c(co, 0.0), -e.conj() * s], [e * s, c(co, 0.0)]];
        let au = |i: usize, j: usize| m[i][0] * u[0][j] + m[i][1] * u[1][j];
        let t = |i: usize, j: usize| u[0][i].conj() * au(0, j) + u[1][i].conj() * au(1, j);
        t(0, 1).norm_sqr() + t(1, 0).norm_sqr()
    };
    const N: usize = 2000;
    let (dt, dp) = (FRAC_PI_2 / N as f64, TAU / N as f64);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=N {
        let theta = i as f64 * dt;
        for j in 0..N {
            let phi = j as f64 * dp;
            let v = off(theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }
    // compass search from the best grid node
    let (mut v, mut theta, mut phi) = best;
    let (mut ht, mut hp) = (dt, dp);
    while ht > 1e-13 {
        let mut moved = false;
        for (a, b) in [(ht, 0.0), (-ht, 0.0), (0.0, hp), (0.0, -hp)] {
            let w = off(theta + a, phi + b);
            if w < v {
                (v, theta, phi) = (w, theta + a, phi + b);
                moved = true;
            }
        }
        if !moved {
            ht *= 0.5;
            hp *= 0.5;
        }
    }
    v.max(0.0).sqrt()
}

fn oracle_2x2() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x22 + seed);
        let a = random_matrix(&mut rng, 2);
        let got = nearest_normal(&a, &[SchattenP::FROBENIUS], &MaximizeOptions::new(seed)).frobenius_exact;
        let want = brute_force_2x2(&a);
        worst = worst.max((got - want).abs());
        ensure!((got - want).abs() <= 1e-4, "seed {seed}: {got} vs brute force {want}");
    }
    Ok(format!("100 matrices, max deviation {worst:.1e}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_almost-normal"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(())
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    run_cli(
        dir,
        &[
            "gallery",
            "perturbed",
            "--dim",
            "6",
            "--delta",
            "0.2",
            "--seed",
            "3",
            "--out",
            "P.json",
        ],
    )?;
    run_cli(
        dir,
        &["gallery", "normal", "--dim", "6", "--seed", "5", "--out", "N.json"],
    )?;

    let cases: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (
            vec!["gallery", "shift", "--m", "8", "--out", "shift.json"],
            vec!["shift.json"],
        ),
        (
            vec!["gallery", "pair", "--m", "6", "--out-dir", "pair"],
            vec!["pair/A.json", "pair/B.json"],
        ),
        (
            vec![
                "gallery",
                "perturbed",
                "--dim",
                "5",
                "--delta",
                "0.1",
                "--seed",
                "9",
                "--out",
                "g.json",
            ],
            vec!["g.json"],
        ),
        (
            vec![
                "nearest",
                "P.json",
                "--p",
                "1,2,inf",
                "--seed",
                "4",
                "--out",
                "near.json",
                "--witness",
                "T.json",
            ],
            vec!["near.json", "T.json"],
        ),
        (
            vec![
                "partition",
                "N.json",
                "--side",
                "0.2",
                "--out",
                "part.json",
                "--approx",
                "approx.json",
            ],
            vec!["part.json", "approx.json"],
        ),
        (
            vec![
                "surgery",
                "N.json",
                "--op",
                "remove-disc",
                "--center",
                "0,0",
                "--radius",
                "0.5",
                "--anchor",
                "0.1,0",
                "--out",
                "s1.json",
                "--report",
                "s1r.json",
            ],
            vec!["s1.json", "s1r.json"],
        ),
        (
            vec![
                "surgery", "N.json", "--op", "graph", "--eps", "0.1", "--out", "s2.json", "--report", "s2r.json",
            ],
            vec!["s2.json", "s2r.json"],
        ),
        (
            vec![
                "truncate",
                "--window",
                "32",
                "--lambda",
                "4,8,12,16",
                "--out",
                "trunc.csv",
            ],
            vec!["trunc.csv"],
        ),
        (
            vec![
                "pseudospec",
                "P.json",
                "--eps",
                "0.1",
                "--resolution",
                "41",
                "--out",
                "ps.csv",
                "--report",
                "psr.json",
            ],
            vec!["ps.csv", "psr.json"],
        ),
        (
            vec![
                "scatter",
                "--shift",
                "2,4,8",
                "--delta",
                "0.05,0.2",
                "--dim",
                "5",
                "--out",
                "scatter.csv",
            ],
            vec!["scatter.csv"],
        ),
    ];
    let mut files = 0;
    for (args, outputs) in &cases {
        run_cli(dir, args)?;
        let first: Vec<Vec<u8>> = outputs
            .iter()
            .map(|f| std::fs::read(dir.join(f)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for f in outputs {
            std::fs::remove_file(dir.join(f)).map_err(|e| e.to_string())?;
        }
        let mut again = vec!["--threads", "2"];
        again.extend(args.iter());
        run_cli(dir, &again)?;
        for (f, bytes) in outputs.iter().zip(&first) {
            let second = std::fs::read(dir.join(f)).map_err(|e| e.to_string())?;
            ensure!(&second == bytes, "{} produced different bytes for {f}", args[0]);
            files += 1;
        }
    }
    Ok(format!("{} runs, {files} output files byte-identical", cases.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("shift example nearest-normal distance", shift_exactness),
        ("shift example commutator norms", shift_commutators),
        ("lower-bound sandwich", lower_bound_sandwich),
        ("partition error bound", partition_bound),
        ("resolution of the identity", projection_algebra),
        ("spectrum surgery", surgery_invariants),
        ("oscillating graph", oscillating_graph),
        ("almost-commuting pair", almost_commuting),
        ("truncation inequalities", truncation_inequalities),
        ("pseudospectrum of normal matrices", pseudospectrum_correctness),
        ("2x2 brute-force oracle", oracle_2x2),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
