//! Square covers of the spectrum of a random normal matrix, the induced
//! resolution of the identity and the finite-spectrum approximant.

use almost_normal::gallery::random_normal;
use almost_normal::partition::{finite_spectrum_approx, square_cover};

fn main() -> almost_normal::Result<()> {
    let sample = random_normal(12, 5);
    let decomp = sample.decomposition();

    for side in [0.5, 0.1, 0.02] {
        let cover = square_cover(decomp.eigenvalues(), side)?;
        let approx = finite_spectrum_approx(&decomp, &cover)?;
        let used = approx
            .resolution
            .projections
            .iter()
            .filter(|p| p.trace().re > 0.5)
            .count();
        println!(
            "side {side:<5} regions {:>3} (nonempty {used:>2}) multiplicity {}  ‖A−T‖ = {:.3e} ≤ {:.3e}",
            cover.len(),
            approx.multiplicity,
            approx.error_actual,
            approx.error_bound
        );
    }
    Ok(())
}
