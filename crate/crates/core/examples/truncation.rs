//! Truncations of Laurent multiplication operators: the counting functions
//! and both truncation inequalities along a grid of cut-offs.

use almost_normal::experiments::{counting_functions, truncation_scaling, TruncationModel};
use almost_normal::gallery::{laurent_multiplication, LaurentSymbol};
use almost_normal::nearest::MaximizeOptions;
use almost_normal::Complex64;

fn main() -> almost_normal::Result<()> {
    let shift = TruncationModel::from_laurent(&laurent_multiplication(&LaurentSymbol::shift(), 32)?)?;
    let grid = [4.0, 8.0, 12.0, 16.0];
    let counts = counting_functions(&shift.g, &grid)?;
    println!("N  = {:?}\nN₁ = {:?}", counts.n, counts.n1);

    for row in truncation_scaling(&shift, &grid, &MaximizeOptions::new(1))? {
        let c = &row.check;
        println!(
            "λ {:>4}  ‖[A_λ*,A_λ]‖₁ = {:.3} ≤ {:.3}   dist₁ {:.4}  dist₁/N {:.4}  pass {}",
            c.lambda, c.lhs3, c.rhs3, row.dist1_witness, row.ratio, c.pass
        );
    }

    let symbol = LaurentSymbol::from_terms(&[
        (-2, Complex64::new(0.3, 0.1)),
        (1, Complex64::new(1.0, 0.0)),
        (3, Complex64::new(0.0, -0.4)),
    ]);
    let model = TruncationModel::from_laurent(&laurent_multiplication(&symbol, 24)?)?;
    for lambda in [2.5, 6.0, 12.0] {
        let c = almost_normal::experiments::verify_truncation_bounds(&model, lambda)?;
        println!(
            "random symbol λ {lambda}: lhs2 {:.3} ≤ rhs2 {:.3}, lhs3 {:.3} ≤ rhs3 {:.3}",
            c.lhs2, c.rhs2, c.lhs3, c.rhs3
        );
    }
    Ok(())
}
