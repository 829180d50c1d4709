//! Exhaustive and sampled corruptibility censuses against the closed forms.

use ganti::attacks::{corruptibility_census, CensusMode, DEFAULT_CENSUS_SEED};
use ganti::blockgen::{build_noncomplementary, predict_corruptibility, BlockKind};
use ganti::NonCompSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (small, _) = build_noncomplementary(&NonCompSpec::canonical(5, 2))?;
    let report = corruptibility_census(&small, CensusMode::Exhaustive)?;
    println!("n=5 t=2 exhaustive: {:?}", report.histogram);
    println!("predicted:          {:?}", predict_corruptibility(5, 2, BlockKind::Noncomp)?.histogram);

    let (big, _) = build_noncomplementary(&NonCompSpec::canonical(12, 3))?;
    let sampled = corruptibility_census(&big, CensusMode::Sampled { count: 20_000, seed: DEFAULT_CENSUS_SEED })?;
    print!("{}", sampled.to_csv()?);
    println!("average over sampled wrong keys: {}", sampled.average_wrong);
    println!("predicted: {}", predict_corruptibility(12, 3, BlockKind::Noncomp)?.average_wrong);
    Ok(())
}
