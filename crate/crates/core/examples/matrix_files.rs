//! Writing and reading the JSON matrix format, plus the hand-authored CSV
//! form (`re,im` cells separated by spaces or `;`).

use almost_normal::cli::{parse_csv_matrix, MatrixFile, MatrixMetadata};
use almost_normal::gallery::perturbed_normal;

fn main() -> almost_normal::Result<()> {
    let a = perturbed_normal(3, 0.1, 7)?;
    let meta = MatrixMetadata {
        name: Some("example".into()),
        seed: Some(7),
        generator: Some("perturbed_normal".into()),
    };
    let json = MatrixFile::from_matrix(&a, meta, None).to_json();
    println!("{json}");
    let back = MatrixFile::parse(&json)?.to_matrix()?;
    println!("round trip exact: {}", back == a);

    let hand = parse_csv_matrix("# a Jordan block\n0,0 ; 1,0\n0,0 ; 0,0\n")?;
    println!("{hand:?}");
    Ok(())
}
