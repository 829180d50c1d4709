//! Builds one block of each kind and prints its covers, right keys and
//! predicted corruptibility.
//!
//! `cargo run --example build_blocks -- 8 3`

use ganti::blockgen::*;
use ganti::truthsets::BlockType;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>());
    let n = args.next().transpose()?.unwrap_or(6);
    let t = args.next().transpose()?.unwrap_or(2);

    let blocks = [
        ("anti-sat", build_antisat(n, BlockType::Type0)?),
        ("complementary", build_complementary(&ganti::CompSpec::canonical(n, t))?),
        ("non-complementary", build_noncomplementary(&ganti::NonCompSpec::canonical(n, t))?),
    ];
    for (name, (block, family)) in &blocks {
        println!("{name} n={n}:");
        if let (Some(f), Some(g)) = (block.f_cover(), block.g_cover()) {
            println!("  f = {f}");
            println!("  g = {g}");
        }
        println!("  right keys: {} ({})", family.count(), family.describe());
    }

    for kind in [BlockKind::Comp, BlockKind::Noncomp] {
        if let Ok(p) = predict_corruptibility(n, t, kind) {
            println!("{kind:?} t={t}: {:?}, average over wrong keys {}", p.histogram, p.average_wrong);
        }
    }
    println!("λ lower bound for p=1: {}", lambda_lower_bound(n, 1)?);
    Ok(())
}
