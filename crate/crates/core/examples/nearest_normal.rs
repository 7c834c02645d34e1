//! Nearest normal matrix: Frobenius distance, Schatten-norm witness
//! distances and the commutator lower bound, for the shift example and a
//! random perturbation of a normal matrix.

use almost_normal::gallery::{perturbed_normal, shift_example};
use almost_normal::nearest::{nearest_normal, MaximizeOptions};
use almost_normal::{CMatrix, SchattenP};

fn show(name: &str, a: &CMatrix) {
    let ps = [SchattenP::TRACE, SchattenP::FROBENIUS, SchattenP::OPERATOR];
    let r = nearest_normal(a, &ps, &MaximizeOptions::new(2024));
    println!(
        "{name}: dim {}, {} sweeps, converged {}",
        a.dim(),
        r.sweeps,
        r.converged
    );
    println!("  frobenius distance  {:.10}", r.frobenius_exact);
    for p in ps {
        println!(
            "  p = {p:<4} lower {:.6}  witness {:.6}",
            r.lower_bound(p).unwrap(),
            r.distance(p).unwrap()
        );
    }
}

fn main() -> almost_normal::Result<()> {
    for m in [2, 4, 8, 16] {
        show(
            &format!("shift m={m} (expect {:.10})", (m as f64 / 4.0).sqrt()),
            &shift_example(m)?,
        );
    }
    show("perturbed normal, delta=0.2", &perturbed_normal(10, 0.2, 7)?);
    Ok(())
}
