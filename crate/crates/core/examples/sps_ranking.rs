//! Signal probability skew and the ADS gate ranking for two block styles.

use ganti::attacks::{ads_ranking, sps_analyze, SpsMode};
use ganti::blockgen::{build_antisat, build_noncomplementary};
use ganti::netlist::synthesize_block;
use ganti::truthsets::BlockType;
use ganti::NonCompSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let blocks = [
        ("anti-sat n=10", build_antisat(10, BlockType::Type0)?.0),
        ("noncomp n=10 t=2", build_noncomplementary(&NonCompSpec::canonical(10, 2))?.0),
    ];
    for (name, block) in &blocks {
        let net = synthesize_block(block)?;
        let stats = sps_analyze(&net, SpsMode::Propagated)?;
        println!("{name}:");
        for g in ads_ranking(&stats, &net).iter().take(3) {
            println!("  {:<16} {:<5} ADS {:.6}  TFI keys {}", g.name, g.kind, g.ads, g.tfi_keys);
        }
    }
    Ok(())
}
