//! Commutator defect against distance to the normal matrices over a small
//! ensemble, written as CSV to stdout.

use almost_normal::experiments::{f_scatter, write_csv};
use almost_normal::gallery::EnsembleSpec;
use almost_normal::nearest::MaximizeOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut ensemble: Vec<EnsembleSpec> = [2, 4, 8, 16]
        .into_iter()
        .map(|m| EnsembleSpec::ShiftExample { m })
        .collect();
    ensemble.extend([0.01, 0.05, 0.1, 0.2, 0.3].map(|delta| EnsembleSpec::PerturbedNormal { dim: 8, delta, seed: 3 }));
    ensemble.push(EnsembleSpec::AlmostCommuting { m: 12 });

    let rows = f_scatter(&ensemble, &MaximizeOptions::new(0))?;
    write_csv(std::io::stdout().lock(), &["defect vs distance".to_string()], &rows)?;
    Ok(())
}
