//! Locks c17 with an Anti-SAT block and recovers a key with the SAT attack.
//!
//! `cargo run --release --example sat_attack -- 8`

use ganti::attacks::{netlist_corruptibility, sat_attack, AttackConfig};
use ganti::blockgen::build_antisat;
use ganti::fixtures;
use ganti::netlist::{integrate, synthesize_block, Oracle};
use ganti::truthsets::BlockType;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: u32 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(8);
    let (block, _) = build_antisat(n, BlockType::Type0)?;
    let host = fixtures::c17();
    let locked = integrate(&host, &synthesize_block(&block)?, fixtures::C17_TARGET, block.correct_output())?;
    let oracle = Oracle::from_host(&host, &locked)?;

    let trace = sat_attack(&locked, &oracle, &AttackConfig::default())?;
    println!("status: {:?}", trace.status);
    println!("λ = {} DIPs in {:.1} ms", trace.iterations, trace.wall_time_ms);
    if let Some(key) = &trace.recovered_key {
        println!("key: {}", ganti::attacks::bits_to_string(key));
        println!("corruptibility under key: {}", netlist_corruptibility(&locked, key, &oracle)?);
    }
    Ok(())
}
