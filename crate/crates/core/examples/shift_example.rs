//! The shift example: a nilpotent matrix whose self-commutator is `diag(±1)`,
//! with its commutator norms and Schatten-norm report.
//!
//!     cargo run --example shift_example -- 8

use almost_normal::gallery::shift_example;
use almost_normal::linalg::{commutator, norm_report, schatten_norm};
use almost_normal::SchattenP;

fn main() -> almost_normal::Result<()> {
    let m: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("m must be an integer"))
        .unwrap_or(8);
    let a = shift_example(m)?;

    let comm = commutator(&a, &a.adjoint())?;
    println!("m = {m}");
    println!(
        "[A, A*] diagonal: {:?}",
        comm.diag().iter().map(|z| z.re).collect::<Vec<_>>()
    );
    println!(
        "‖[A, A*]‖₂ = {:.12} (√m = {:.12})",
        schatten_norm(&comm, SchattenP::FROBENIUS)?,
        (m as f64).sqrt()
    );

    let report = norm_report(&a, &[SchattenP::TRACE, SchattenP::FROBENIUS, SchattenP::Finite(3.0)]);
    println!("‖A‖ = {}", report.operator_norm);
    for (p, v) in &report.schatten {
        println!("‖A‖_{p} = {v:.12}");
    }
    println!("normality defect ‖[A*, A]‖ = {}", report.normality_defect);
    Ok(())
}
