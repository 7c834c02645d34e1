//! The almost-commuting pair: a Hermitian `A` and a weighted shift `B` whose
//! commutators shrink like `1/m`.

use almost_normal::gallery::{almost_commuting_pair, PairBounds};

fn main() -> almost_normal::Result<()> {
    println!(
        "{:>5} {:>10} {:>12} {:>10} {:>12} {:>10}",
        "m", "‖B‖", "‖[B*,B]‖", "4/m", "‖[A,B]‖", "2/m"
    );
    for m in [1, 2, 4, 10, 32, 100, 256] {
        let (a, b) = almost_commuting_pair(m)?;
        let pb = PairBounds::measure(&a, &b);
        println!(
            "{m:>5} {:>10.6} {:>12.6} {:>10.6} {:>12.6} {:>10.6}",
            pb.norm_b,
            pb.self_commutator_b,
            4.0 / m as f64,
            pb.commutator_ab,
            2.0 / m as f64
        );
    }
    Ok(())
}
