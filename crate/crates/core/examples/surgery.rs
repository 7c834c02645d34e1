//! Spectrum surgery: push eigenvalues out of a disc, snap eigenvalues on a
//! chord to its endpoints, and transport the spectrum through plane maps.

use almost_normal::gallery::random_normal;
use almost_normal::partition::Disc;
use almost_normal::surgery::{remove_arc, remove_region, transport, PlaneMap};
use almost_normal::{CMatrix, Complex64, SpectralDecomp};

fn main() -> almost_normal::Result<()> {
    let c = Complex64::new;

    let d = SpectralDecomp::from_parts(vec![c(0.0, 0.0), c(5.0, 0.0)], CMatrix::identity(2))?;
    let r = remove_region(&d, &Disc::new(c(0.0, 0.0), 1.0)?, c(0.0, 0.0))?;
    println!("diag(0, 5) without the unit disc: {:?}", r.output.diag());

    let sample = random_normal(8, 11);
    let decomp = sample.decomposition();
    let disc = Disc::new(c(0.1, -0.2), 0.6)?;
    let r = remove_region(&decomp, &disc, c(0.2, -0.1))?;
    println!(
        "random 8×8: moved {} eigenvalues, ‖A − A_Ω‖ = {:.4} ≤ {}",
        r.moved_count, r.perturbation_norm, r.bound
    );

    let on_chord = SpectralDecomp::from_parts(vec![c(-0.5, 0.0), c(0.3, 0.0), c(2.0, 0.0)], CMatrix::identity(3))?;
    let r = remove_arc(
        &on_chord,
        &Disc::new(c(0.0, 0.0), 1.0)?,
        c(-1.0, 0.0),
        c(1.0, 0.0),
        None,
    )?;
    println!("chord snap: {:?}", r.output.diag());

    // everything outside the disc of radius 1/2 collapses onto its boundary
    let shrink = PlaneMap::RadialCollapse {
        disc: Disc::new(c(0.0, 0.0), 0.5)?,
    };
    let out = transport(&decomp, &shrink);
    println!(
        "radial collapse: ‖φ(A)‖ = {:.6}",
        almost_normal::linalg::operator_norm(&out)
    );
    Ok(())
}
