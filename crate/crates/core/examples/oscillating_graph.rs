//! Moves the spectrum of a normal matrix onto the graph of a fast cosine, so
//! that the imaginary part of the result is a function of its real part.

use almost_normal::gallery::random_normal;
use almost_normal::linalg::normality_defect;
use almost_normal::surgery::{check_oscillator, graph_normal_approx, oscillator};

fn main() -> almost_normal::Result<()> {
    let decomp = random_normal(10, 3).decomposition();
    let r = decomp.spectral_radius();

    for eps in [0.4, 0.2, 0.1, 0.05] {
        let f = oscillator(eps, r)?;
        let net = check_oscillator(|x| f.eval(x), eps, r);
        let g = graph_normal_approx(&decomp, eps)?;
        println!(
            "eps {eps:<5} net {net:.4}  ‖A − Ã‖ = {:.4} (bound {:.4})  graph residual {:.1e}  defect {:.1e}",
            g.report.perturbation_norm,
            g.report.bound,
            g.graph_residual(),
            normality_defect(&g.output)
        );
    }
    Ok(())
}
