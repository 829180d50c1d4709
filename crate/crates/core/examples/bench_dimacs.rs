//! Bench parsing, simulation, Tseitin encoding, DIMACS export and a miter
//! solve with the embedded solver.

use ganti::blockgen::build_antisat;
use ganti::fixtures;
use ganti::netlist::*;
use ganti::satcore::{format_answer, SatBackend, Solver, SolverConfig};
use ganti::truthsets::BlockType;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    let c17 = parse_bench(fixtures::C17_BENCH)?;
    println!("c17: {} inputs, {} gates", c17.num_inputs(), c17.gates().len());
    println!("eval 10101 -> {:?}", c17.eval(&[true, false, true, false, true], &[])?);

    let cnf = tseitin(&c17);
    println!("{} vars, {} clauses", cnf.num_vars, cnf.clauses.len());
    print!("{}", cnf.to_dimacs().lines().take(4).map(|l| format!("{l}\n")).collect::<String>());

    let (block, _) = build_antisat(4, BlockType::Type0)?;
    let locked = integrate(&c17, &synthesize_block(&block)?, fixtures::C17_TARGET, false)?;
    print!("{}", emit_bench(&locked).lines().filter(|l| l.contains("N22")).map(|l| format!("{l}\n")).collect::<String>());
    let miter = build_miter(&locked)?;
    let mut solver = Solver::from_clauses(miter.cnf.num_vars, &miter.cnf.clauses, SolverConfig::default());
    print!("miter: {}", format_answer(&solver.solve()).lines().next().unwrap_or_default());
    println!();
    Ok(())
}
