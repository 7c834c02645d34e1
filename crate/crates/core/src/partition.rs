//! Finite open covers of the spectrum and the resolutions of the identity
//! they induce for normal matrices.
//!
//! For a normal matrix the exact spectral projections are available, so a
//! cover `{Ω_j}` is turned into mutually orthogonal projections by assigning
//! each eigenvalue to the first region (in cover order) containing it. The
//! finite-spectrum approximant `T = Σ z_j P_j` then satisfies
//! `‖A − T‖ ≤ √k · max_j diam Ω_j` where `k` is the multiplicity of the cover
//! on the spectrum.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, CMatrix, SpectralDecomp, ZERO};

/// Open disc `|z − center| < radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

/// Open axis-aligned square of the given side centred at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Square {
    pub center: Complex64,
    pub side: f64,
}

impl Square {
    pub fn new(center: Complex64, side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::invalid(format!("square side must be positive, got {side}")));
        }
        Ok(Self { center, side })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = z - self.center;
        let h = 0.5 * self.side;
        d.re.abs() < h && d.im.abs() < h
    }

    pub fn diameter(&self) -> f64 {
        self.side * std::f64::consts::SQRT_2
    }
}

/// A cover element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Region {
    Disc { center: [f64; 2], radius: f64 },
    Square { center: [f64; 2], side: f64 },
}

impl From<Disc> for Region {
    fn from(d: Disc) -> Self {
        Region::Disc {
            center: [d.center.re, d.center.im],
            radius: d.radius,
        }
    }
}

impl From<Square> for Region {
    fn from(s: Square) -> Self {
        Region::Square {
            center: [s.center.re, s.center.im],
            side: s.side,
        }
    }
}

impl Region {
    pub fn disc(center: Complex64, radius: f64) -> Result<Self> {
        Disc::new(center, radius).map(Into::into)
    }

    pub fn square(center: Complex64, side: f64) -> Result<Self> {
        Square::new(center, side).map(Into::into)
    }

    pub fn center(&self) -> Complex64 {
        match *self {
            Region::Disc { center, .. } | Region::Square { center, .. } => Complex64::new(center[0], center[1]),
        }
    }

    /// Strict-interior membership.
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Disc { radius, .. } => (z - self.center()).norm() < radius,
            Region::Square { side, .. } => {
                let d = z - self.center();
                d.re.abs() < 0.5 * side && d.im.abs() < 0.5 * side
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Region::Disc { radius, .. } => 2.0 * radius,
            Region::Square { side, .. } => side * std::f64::consts::SQRT_2,
        }
    }

    fn validate(&self) -> Result<()> {
        let (c, size) = match *self {
            Region::Disc { center, radius } => (center, radius),
            Region::Square { center, side } => (center, side),
        };
        if !(size > 0.0 && size.is_finite()) || !c.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid(format!("degenerate region {self:?}")));
        }
        Ok(())
    }

    /// Moves `z` into the open region if it is not already inside, keeping
    /// the direction from the centre.
    pub fn clamp(&self, z: Complex64) -> Complex64 {
        if self.contains(z) {
            return z;
        }
        let c = self.center();
        let shrink = 1.0 - 1e-9;
        let clamped = match *self {
            Region::Disc { radius, .. } => {
                let d = z - c;
                c + d / d.norm() * (radius * shrink)
            }
            Region::Square { side, .. } => {
                let h = 0.5 * side * shrink;
                let d = z - c;
                c + Complex64::new(d.re.clamp(-h, h), d.im.clamp(-h, h))
            }
        };
        if self.contains(clamped) {
            clamped
        } else {
            c
        }
    }
}

/// Ordered finite family of open regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cover {
    pub regions: Vec<Region>,
}

impl Cover {
    pub fn new(regions: Vec<Region>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::invalid("cover needs at least one region"));
        }
        for r in &regions {
            r.validate()?;
        }
        Ok(Self { regions })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    /// Number of regions containing `z`.
    pub fn count_at(&self, z: Complex64) -> usize {
        self.regions.iter().filter(|r| r.contains(z)).count()
    }

    /// Maximum over `points` of the number of regions containing the point.
    pub fn multiplicity(&self, points: &[Complex64]) -> usize {
        points.iter().map(|&z| self.count_at(z)).max().unwrap_or(0)
    }

    /// Index of the first region containing `z`.
    pub fn first_hit(&self, z: Complex64) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(z))
    }

    pub fn covers(&self, points: &[Complex64]) -> bool {
        points.iter().all(|&z| self.first_hit(z).is_some())
    }

    pub fn max_diameter(&self) -> f64 {
        self.regions.iter().map(Region::diameter).fold(0.0, f64::max)
    }
}

/// Squares of side `side` centred on the lattice `(side/2)·Z²`, keeping
/// those that contain at least one of `points`. Every point of the plane
/// lies in at most four such squares.
pub fn square_cover(points: &[Complex64], side: f64) -> Result<Cover> {
    if !(side > 0.0 && side.is_finite()) {
        return Err(Error::invalid(format!("side must be positive, got {side}")));
    }
    if points.is_empty() {
        return Err(Error::invalid("square_cover needs at least one point"));
    }
    let step = 0.5 * side;
    let mut cells = BTreeSet::new();
    for &z in points {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let (kx, ky) = ((z.re / step).floor() as i64, (z.im / step).floor() as i64);
        for i in kx - 1..=kx + 1 {
            for j in ky - 1..=ky + 1 {
                let sq = Square {
                    center: Complex64::new(i as f64 * step, j as f64 * step),
                    side,
                };
                if sq.contains(z) {
                    cells.insert((i, j));
                }
            }
        }
    }
    let regions = cells
        .into_iter()
        .map(|(i, j)| {
            Region::from(Square {
                center: Complex64::new(i as f64 * step, j as f64 * step),
                side,
            })
        })
        .collect();
    Ok(Cover { regions })
}

/// Mutually orthogonal projections `P_j` with `Σ P_j = I`, each subordinate
/// to one cover region, and labels `z_j ∈ Ω_j`.
#[derive(Debug, Clone)]
pub struct ResolutionOfIdentity {
    pub projections: Vec<CMatrix>,
    pub labels: Vec<Complex64>,
    /// Region index assigned to each eigenvalue of the source decomposition.
    pub assignment: Vec<usize>,
    pub cover: Cover,
}

impl ResolutionOfIdentity {
    /// `Σ z_j P_j`.
    pub fn assemble(&self) -> CMatrix {
        let n = self.projections[0].dim();
        let mut t = CMatrix::zeros(n);
        for (p, &z) in self.projections.iter().zip(&self.labels) {
            if z != ZERO {
                t = &t + &p.scale(z);
            }
        }
        t
    }

    /// Replaces the labels; each must lie in its region.
    pub fn with_labels(mut self, labels: Vec<Complex64>) -> Result<Self> {
        if labels.len() != self.cover.len() {
            return Err(Error::DimensionMismatch {
                left: self.cover.len(),
                right: labels.len(),
            });
        }
        if let Some((j, z)) = labels
            .iter()
            .enumerate()
            .find(|(j, z)| !self.cover.regions[*j].contains(**z))
        {
            return Err(Error::invalid(format!("label {z} lies outside region {j}")));
        }
        self.labels = labels;
        Ok(self)
    }
}

/// `Π_Ω = Σ_{λ_k ∈ Ω} u_k u_k*`.
pub fn spectral_projection(decomp: &SpectralDecomp, region: &Region) -> CMatrix {
    decomp.projection_onto(|_, z| region.contains(z))
}

/// First-hit disjointification of `cover` over the spectrum of `decomp`.
pub fn resolution_of_identity(decomp: &SpectralDecomp, cover: &Cover) -> Result<ResolutionOfIdentity> {
    let assignment = decomp
        .eigenvalues()
        .iter()
        .map(|&z| cover.first_hit(z).ok_or(Error::UncoveredSpectrum { eigenvalue: z }))
        .collect::<Result<Vec<_>>>()?;
    let projections: Vec<CMatrix> = (0..cover.len())
        .into_par_iter()
        .map(|j| decomp.projection_onto(|k, _| assignment[k] == j))
        .collect();
    let labels = cover
        .regions
        .iter()
        .enumerate()
        .map(|(j, region)| {
            let members: Vec<Complex64> = decomp
                .eigenvalues()
                .iter()
                .zip(&assignment)
                .filter(|(_, &a)| a == j)
                .map(|(&z, _)| z)
                .collect();
            if members.is_empty() {
                region.center()
            } else {
                let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
                region.clamp(centroid)
            }
        })
        .collect();
    Ok(ResolutionOfIdentity {
        projections,
        labels,
        assignment,
        cover: cover.clone(),
    })
}

/// Finite-spectrum normal approximant together with the certified bound.
#[derive(Debug, Clone)]
pub struct FiniteSpectrumApprox {
    pub approximant: CMatrix,
    /// `√k · max_j diam Ω_j` with `k` the multiplicity of the cover on the spectrum.
    pub error_bound: f64,
    /// `‖A − T‖` in operator norm.
    pub error_actual: f64,
    pub multiplicity: usize,
    pub resolution: ResolutionOfIdentity,
}

impl FiniteSpectrumApprox {
    /// `max_k |λ_k − z_{j(k)}|`, the exact value of `‖A − T‖` for normal `A`.
    pub fn eigenvalue_displacement(&self, decomp: &SpectralDecomp) -> f64 {
        decomp
            .eigenvalues()
            .iter()
            .zip(&self.resolution.assignment)
            .map(|(&z, &j)| (z - self.resolution.labels[j]).norm())
            .fold(0.0, f64::max)
    }
}

pub fn finite_spectrum_approx(decomp: &SpectralDecomp, cover: &Cover) -> Result<FiniteSpectrumApprox> {
    let resolution = resolution_of_identity(decomp, cover)?;
    finite_spectrum_from_resolution(decomp, resolution)
}

/// As [`finite_spectrum_approx`] but with caller-chosen labels.
pub fn finite_spectrum_from_resolution(
    decomp: &SpectralDecomp,
    resolution: ResolutionOfIdentity,
) -> Result<FiniteSpectrumApprox> {
    let multiplicity = resolution.cover.multiplicity(decomp.eigenvalues());
    let error_bound = (multiplicity as f64).sqrt() * resolution.cover.max_diameter();
    let approximant = resolution.assemble();
    let error_actual = operator_norm(&(&decomp.reconstruct() - &approximant));
    Ok(FiniteSpectrumApprox {
        approximant,
        error_bound,
        error_actual,
        multiplicity,
        resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::random_normal;
    use crate::linalg::{normal_spectral_decomp, normality_defect};
    use crate::tol::PROJ_TOL;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_decomp(ev: &[Complex64]) -> SpectralDecomp {
        SpectralDecomp::from_parts(ev.to_vec(), CMatrix::identity(ev.len())).unwrap()
    }

    fn projection_defects(res: &ResolutionOfIdentity, decomp: &SpectralDecomp) -> f64 {
        let n = decomp.dim();
        let id = CMatrix::identity(n);
        let mut worst: f64 = 0.0;
        let mut sum = CMatrix::zeros(n);
        for (j, p) in res.projections.iter().enumerate() {
            worst = worst.max((p - &p.adjoint()).max_abs());
            worst = worst.max((&(p * p) - p).max_abs());
            let pi = spectral_projection(decomp, &res.cover.regions[j]);
            worst = worst.max(operator_norm(&(&(&id - &pi) * p)));
            for q in &res.projections[j + 1..] {
                worst = worst.max((p * q).max_abs());
            }
            sum = &sum + p;
        }
        worst.max((&sum - &id).max_abs())
    }

    #[test]
    fn region_geometry() {
        let d = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(d.diameter(), 2.0);
        assert!(d.contains(c(0.5, 0.5)) && !d.contains(c(1.0, 0.0)));
        let s = Region::square(c(0.0, 0.0), 1.0).unwrap();
        assert!((s.diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.contains(c(0.49, -0.49)) && !s.contains(c(0.5, 0.0)));
        assert!(Region::disc(c(0.0, 0.0), 0.0).is_err());
        assert_eq!(d.clamp(c(3.0, 0.0)).im, 0.0);
        assert!(d.contains(d.clamp(c(3.0, 0.0))));
        assert!(s.contains(s.clamp(c(3.0, -3.0))));
    }

    #[test]
    fn spectral_projection_simple_cases() {
        let d = diag_decomp(&[c(0.0, 0.0), c(5.0, 0.0)]);
        let p = spectral_projection(&d, &Region::disc(c(0.0, 0.0), 1.0).unwrap());
        assert_eq!(p, CMatrix::from_real_diag(&[1.0, 0.0]));
        let all = spectral_projection(&d, &Region::disc(c(2.5, 0.0), 10.0).unwrap());
        assert_eq!(all, CMatrix::identity(2));
    }

    #[test]
    fn spectral_projection_rank_matches_membership_count() {
        let sample = random_normal(6, 17);
        let decomp = normal_spectral_decomp(&sample.matrix).unwrap();
        // split on the median real part: exactly half the eigenvalues are inside
        let mut re: Vec<f64> = sample.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        let cut = 0.5 * (re[1] + re[2]);
        let region = Region::square(c(cut - 50.0, 0.0), 100.0).unwrap();
        let inside = sample.eigenvalues.iter().filter(|&&z| region.contains(z)).count();
        assert_eq!(inside, 2);
        let p = spectral_projection(&decomp, &region);
        assert!((p.trace().re - 2.0).abs() < 1e-10);
        assert!((&(&p * &p) - &p).max_abs() < PROJ_TOL);
    }

    #[test]
    fn square_cover_examples() {
        let cover = square_cover(&[c(0.0, 0.0)], 1.0).unwrap();
        assert!(cover.len() <= 4);
        assert!(cover.count_at(c(0.0, 0.0)) >= 1 && cover.count_at(c(0.0, 0.0)) <= 4);

        let line: Vec<Complex64> = (0..4).map(|k| c(k as f64, 0.0)).collect();
        let cover = square_cover(&line, 1.0).unwrap();
        assert!(cover.covers(&line));
        assert!(cover.multiplicity(&line) <= 4);
        assert!(cover.regions.iter().all(|r| (r.diameter() - 2f64.sqrt()).abs() < 1e-15));
        assert!(square_cover(&line, 0.0).is_err());
        assert!(square_cover(&[], 1.0).is_err());
    }

    #[test]
    fn square_cover_multiplicity_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<Complex64> = (0..100)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let cover = square_cover(&pts, 0.25).unwrap();
        for &z in &pts {
            let hits = cover.regions.iter().filter(|r| r.contains(z)).count();
            assert!((1..=4).contains(&hits));
        }
        // jittered audit: ten times denser, anywhere in the plane region
        for _ in 0..1000 {
            let z = c(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
            assert!(cover.count_at(z) <= 4);
        }
    }

    #[test]
    fn resolution_single_region_is_identity() {
        let d = diag_decomp(&[c(0.1, 0.0), c(-0.2, 0.3)]);
        let cover = Cover::new(vec![Region::disc(c(0.0, 0.0), 1.0).unwrap()]).unwrap();
        let res = resolution_of_identity(&d, &cover).unwrap();
        assert_eq!(res.projections.len(), 1);
        assert!((&res.projections[0] - &CMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn resolution_disjoint_discs() {
        let d = diag_decomp(&[c(0.0, 0.0), c(5.0, 0.0)]);
        let cover = Cover::new(vec![
            Region::disc(c(0.0, 0.0), 1.0).unwrap(),
            Region::disc(c(5.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let res = resolution_of_identity(&d, &cover).unwrap();
        assert_eq!(res.projections[0], CMatrix::from_real_diag(&[1.0, 0.0]));
        assert_eq!(res.projections[1], CMatrix::from_real_diag(&[0.0, 1.0]));
    }

    #[test]
    fn resolution_first_hit_on_overlap() {
        let d = diag_decomp(&[c(0.3, 0.0), c(1.2, 0.0)]);
        let cover = Cover::new(vec![
            Region::disc(c(0.0, 0.0), 1.0).unwrap(),
            Region::disc(c(0.5, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let res = resolution_of_identity(&d, &cover).unwrap();
        // 0.3 lies in both discs and goes to the first; 1.2 only in the second
        assert_eq!(res.assignment, vec![0, 1]);
        assert_eq!(res.projections[0], CMatrix::from_real_diag(&[1.0, 0.0]));
        assert_eq!((&res.projections[0] * &res.projections[1]).max_abs(), 0.0);
    }

    #[test]
    fn resolution_reports_uncovered_eigenvalue() {
        let d = diag_decomp(&[c(0.0, 0.0), c(3.0, 0.0)]);
        let cover = Cover::new(vec![Region::disc(c(0.0, 0.0), 1.0).unwrap()]).unwrap();
        match resolution_of_identity(&d, &cover) {
            Err(Error::UncoveredSpectrum { eigenvalue }) => assert_eq!(eigenvalue, c(3.0, 0.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_region_keeps_index_alignment() {
        let d = diag_decomp(&[c(0.0, 0.0)]);
        let cover = Cover::new(vec![
            Region::disc(c(9.0, 0.0), 1.0).unwrap(),
            Region::disc(c(0.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let res = resolution_of_identity(&d, &cover).unwrap();
        assert_eq!(res.projections[0].max_abs(), 0.0);
        assert_eq!(res.labels[0], c(9.0, 0.0));
        assert_eq!(res.projections[1], CMatrix::identity(1));
    }

    #[test]
    fn finite_spectrum_singletons_are_exact() {
        let ev = [c(0.0, 0.0), c(2.0, 1.0), c(-1.0, 3.0)];
        let d = diag_decomp(&ev);
        let cover = Cover::new(ev.iter().map(|&z| Region::disc(z, 0.5).unwrap()).collect()).unwrap();
        let approx = finite_spectrum_approx(&d, &cover).unwrap();
        assert_eq!(approx.error_actual, 0.0);
        assert_eq!(approx.multiplicity, 1);
        assert_eq!(approx.error_bound, 1.0);
    }

    #[test]
    fn finite_spectrum_square_cover_bound() {
        for seed in 0..10 {
            let sample = random_normal(8, 100 + seed);
            let d = sample.decomposition();
            for side in [0.5, 0.1] {
                let cover = square_cover(d.eigenvalues(), side).unwrap();
                let approx = finite_spectrum_approx(&d, &cover).unwrap();
                assert!(approx.error_actual <= 2.0 * side * 2f64.sqrt());
                assert!(approx.error_actual <= approx.error_bound + 1e-12);
                let disp = approx.eigenvalue_displacement(&d);
                assert!(
                    (approx.error_actual - disp).abs() <= 1e-9,
                    "{} vs {disp}",
                    approx.error_actual
                );
                assert!(normality_defect(&approx.approximant) <= PROJ_TOL);
            }
        }
    }

    #[test]
    fn caller_labels_must_lie_in_regions() {
        let d = diag_decomp(&[c(0.2, 0.0)]);
        let cover = Cover::new(vec![Region::disc(c(0.0, 0.0), 1.0).unwrap()]).unwrap();
        let res = resolution_of_identity(&d, &cover).unwrap();
        assert!(res.clone().with_labels(vec![c(2.0, 0.0)]).is_err());
        let res = res.with_labels(vec![c(0.2, 0.0)]).unwrap();
        let approx = finite_spectrum_from_resolution(&d, res).unwrap();
        assert!(approx.error_actual < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn resolution_invariants_hold(seed in 0u64..10_000, n in 2usize..17, ncov in 1usize..6, side in 0.05f64..1.5) {
            let sample = random_normal(n, seed);
            let d = normal_spectral_decomp(&sample.matrix).unwrap();
            // random discs first, then a square cover so everything is covered
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let mut regions: Vec<Region> = (0..ncov)
                .map(|_| Region::disc(c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), rng.random_range(0.1..0.8)).unwrap())
                .collect();
            regions.extend(square_cover(d.eigenvalues(), side).unwrap().regions);
            let cover = Cover::new(regions).unwrap();
            let res = resolution_of_identity(&d, &cover).unwrap();
            prop_assert!(projection_defects(&res, &d) <= PROJ_TOL);
            for (j, z) in res.labels.iter().enumerate() {
                prop_assert!(cover.regions[j].contains(*z));
            }
        }

        #[test]
        fn finite_spectrum_reaches_any_accuracy(seed in 0u64..10_000, n in 2usize..10, eps in 0.01f64..1.0) {
            let d = random_normal(n, seed).decomposition();
            let side = eps / (2.0 * std::f64::consts::SQRT_2);
            let cover = square_cover(d.eigenvalues(), side).unwrap();
            let approx = finite_spectrum_approx(&d, &cover).unwrap();
            prop_assert!(approx.error_actual <= eps);
        }
    }
}
