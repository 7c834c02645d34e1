//! ε-pseudospectra on a grid: the neighbourhood of the spectrum for a normal
//! matrix, and a much larger disc for the nilpotent shift example.

use almost_normal::experiments::{pseudospectrum, GridSpec};
use almost_normal::gallery::shift_example;
use almost_normal::{CMatrix, Complex64};

fn main() -> almost_normal::Result<()> {
    let zero = Complex64::new(0.0, 0.0);

    let normal = CMatrix::from_real_diag(&[0.0, 1.0]);
    let grid = GridSpec::covering(&normal, 0.1, 101);
    let r = pseudospectrum(&normal, 0.1, &grid, &[zero, Complex64::new(1.0, 0.0)])?;
    println!("diag(0,1), eps 0.1: {} members, d_eps = {:?}", r.members.len(), r.d_eps);

    let a = shift_example(8)?;
    for eps in [0.05, 0.1, 0.25, 0.5] {
        let grid = GridSpec::covering(&a, eps, 81);
        let r = pseudospectrum(&a, eps, &grid, &[zero])?;
        println!(
            "shift m=8, eps {eps}: {} members, reaches radius {:.3}",
            r.members.len(),
            r.d_eps.unwrap()
        );
    }
    Ok(())
}
