//! Approximate keys from a truncated attack, and the corruptibility profile
//! across seeds as CSV.

use ganti::attacks::*;
use ganti::blockgen::build_complementary;
use ganti::fixtures;
use ganti::netlist::{integrate, synthesize_block, Oracle};
use ganti::CompSpec;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    let (block, _) = build_complementary(&CompSpec::canonical(10, 4))?;
    let host = fixtures::c17();
    let locked = integrate(&host, &synthesize_block(&block)?, fixtures::C17_TARGET, block.correct_output())?;
    let oracle = Oracle::from_host(&host, &locked)?;
    let cfg = AttackConfig::default();

    let approx = approx_key_after(&locked, &oracle, 30, &cfg)?;
    let e = netlist_corruptibility(&locked, &approx.key, &oracle)?;
    println!("after {} DIPs: e = {e} (exact: {})", approx.iterations, approx.exact);

    let points = corruptibility_profile(&locked, &oracle, 16, 128, &[0, 1, 2], &cfg)?;
    print!("{}", profile_to_csv(&points)?);
    Ok(())
}
