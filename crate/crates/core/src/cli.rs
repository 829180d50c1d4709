//! Command-line harness: `gen`, `attack`, `analyze` and a DIMACS `solve`
//! helper.
//!
//! Every report is wrapped in an envelope carrying the tool version, the
//! full parsed configuration, its SHA-256 and the seed in use. Exit codes:
//! 0 success, 2 invalid input, 3 solver timeout or iteration cap, 4 I/O.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::attacks::{
    self, ads_ranking, approx_key_after, bits_from_string, bits_to_string, bypass_cost, cas_unlock_probe,
    corruptibility_census, corruptibility_profile, netlist_corruptibility, sat_attack, AttackConfig, AttackError,
    AttackStatus, CensusMode, SpsMode, DEFAULT_CENSUS_SEED, DEFAULT_SAMPLES, EXHAUSTIVE_CENSUS_MAX_N,
};
use crate::blockgen::{
    build_antisat, build_complementary, build_noncomplementary, predict_corruptibility, BlockKind, BuildError,
    CompSpec, NonCompSpec, RightKeyFamily,
};
use crate::fixtures;
use crate::netlist::{emit_bench, integrate, parse_bench, synthesize_block, Netlist, NetlistError, Oracle};
use crate::satcore::{format_answer, parse_dimacs, DimacsError, SatBackend, Solver, SolverChoice, SolverConfig};
use crate::truthsets::{
    check_constraint1, check_constraint2, right_key_offsets, wrong_key_overlap, BlockType, Key, LockBlock,
    TruthSetError, MAX_OVERLAP_WIDTH,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Timeout(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Timeout(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<NetlistError> for CliError {
    fn from(e: NetlistError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<TruthSetError> for CliError {
    fn from(e: TruthSetError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<AttackError> for CliError {
    fn from(e: AttackError) -> Self {
        match e {
            AttackError::Solver(DimacsError::Io(source)) => CliError::Io {
                path: PathBuf::from("<external solver>"),
                source,
            },
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

// Like `println!` but a closed pipe is not a panic.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "ganti", version, about = "Generalized Anti-SAT locking blocks: generate, attack, analyze")]
pub struct Cli {
    /// Worker threads for data-parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Build a block, its netlist and right-key family.
    Gen(GenArgs),
    /// Run the SAT attack, an approximate-key run or a corruptibility profile.
    Attack(AttackArgs),
    /// Census, SPS/ADS ranking, constraint checks, all-0/all-1 probe, bypass cost.
    Analyze(AnalyzeArgs),
    /// Solve a DIMACS CNF file with the embedded solver.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Noncomp,
    Comp,
    Antisat,
}

impl From<KindArg> for BlockKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Noncomp => BlockKind::Noncomp,
            KindArg::Comp => BlockKind::Comp,
            KindArg::Antisat => BlockKind::Antisat,
        }
    }
}

fn parse_label(s: &str) -> std::result::Result<u32, String> {
    match s.strip_prefix("0b") {
        Some(bits) => u32::from_str_radix(bits, 2),
        None => s.parse(),
    }
    .map_err(|_| format!("`{s}` is not a label (decimal or 0b-prefixed binary)"))
}

fn parse_block_type(s: &str) -> std::result::Result<BlockType, String> {
    match s {
        "0" => Ok(BlockType::Type0),
        "1" => Ok(BlockType::Type1),
        _ => Err(format!("block type must be 0 or 1, got `{s}`")),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(short = 'n', long)]
    pub n: u32,
    /// Literals labelling K-map columns (not used by antisat).
    #[arg(short = 't', long)]
    pub t: Option<u32>,
    /// 0 for an AND final gate, 1 for OR.
    #[arg(long = "type", default_value = "0", value_parser = parse_block_type)]
    pub block_type: BlockType,
    /// noncomp: column forming F^T.
    #[arg(long, value_parser = parse_label)]
    pub f_column: Option<u32>,
    /// noncomp: row of the common cell.
    #[arg(long, value_parser = parse_label)]
    pub common_row: Option<u32>,
    /// noncomp: literal index paired with its complement across K_f, K_g.
    #[arg(long)]
    pub q: Option<u32>,
    /// noncomp: explicit G^T columns, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_label)]
    pub columns: Option<Vec<u32>>,
    /// comp: dividing column.
    #[arg(long, value_parser = parse_label)]
    pub dividing_column: Option<u32>,
    /// comp: row of the dividing-column cell that goes to G^T.
    #[arg(long, value_parser = parse_label)]
    pub g_cell_row: Option<u32>,
    /// Host netlist to lock: a bench file or `c17` for the bundled one.
    #[arg(long)]
    pub host: Option<String>,
    /// Host output the block is XOR-ed into (default: the first output).
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, short = 'o', default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct AttackArgs {
    /// Locked bench netlist.
    #[arg(long)]
    pub locked: PathBuf,
    /// Oracle key as a bit string in key-input order.
    #[arg(long, conflicts_with = "host")]
    pub key: Option<String>,
    /// Oracle from an unlocked host bench (or `c17`).
    #[arg(long)]
    pub host: Option<String>,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    #[arg(long)]
    pub conflict_limit: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// External solver command; the CNF path is appended.
    #[arg(long)]
    pub solver: Option<String>,
    /// Stop after this many DIPs and report an approximate key.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Corruptibility of approximate keys every STEP iterations.
    #[arg(long)]
    pub profile_step: Option<u64>,
    /// Last profile checkpoint (default: the budget, or 2^inputs).
    #[arg(long)]
    pub profile_max: Option<u64>,
    /// Profile seeds, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    #[arg(long, short = 'o', default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Propagated,
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Block JSON (as written by `gen`).
    #[arg(long)]
    pub block: Option<PathBuf>,
    /// Bench netlist for SPS; defaults to the synthesized block.
    #[arg(long)]
    pub netlist: Option<PathBuf>,
    /// Corruptibility histogram over keys.
    #[arg(long)]
    pub census: bool,
    /// Force the exhaustive census (n <= 6).
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Signal probability skew and ADS ranking.
    #[arg(long)]
    pub sps: bool,
    #[arg(long, value_enum, default_value = "propagated")]
    pub mode: ModeArg,
    /// Ranked gates to print.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Corruptibility of the all-0 and all-1 keys.
    #[arg(long)]
    pub cas_probe: bool,
    /// Bypass cost of a key given as `K_f,K_g` bit strings (MSB first).
    #[arg(long)]
    pub bypass: Option<String>,
    #[arg(long, default_value_t = 16)]
    pub cap: usize,
    /// Constraint checks and right-key offsets.
    #[arg(long)]
    pub check: bool,
    #[arg(long, short = 'o', default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    pub cnf: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub conflict_limit: Option<u64>,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a Cli,
    config_hash: String,
    seed: Option<u64>,
    result: R,
}

fn config_hash(cli: &Cli) -> String {
    let bytes = serde_json::to_vec(cli).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_report<R: Serialize>(cli: &Cli, seed: Option<u64>, path: &Path, result: R) -> Result<()> {
    let env = Envelope {
        tool: "ganti",
        version: env!("CARGO_PKG_VERSION"),
        config: cli,
        config_hash: config_hash(cli),
        seed,
        result,
    };
    write(path, &(serde_json::to_string_pretty(&env).expect("report serializes") + "\n"))
}

fn load_host(spec: &str) -> Result<Netlist> {
    if spec == "c17" {
        return Ok(fixtures::c17());
    }
    Ok(parse_bench(&read(Path::new(spec))?)?)
}

fn load_block(path: &Path) -> Result<LockBlock> {
    let block: LockBlock = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: not a block file: {e}", path.display())))?;
    block.validated().map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        // A second call in the same process (tests) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Attack(a) => cmd_attack(cli, a),
        Command::Analyze(a) => cmd_analyze(cli, a),
        Command::Solve(a) => cmd_solve(a),
    }
}

/// Parses `std::env::args`, runs, and maps errors to exit codes.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn build(a: &GenArgs) -> Result<(LockBlock, RightKeyFamily)> {
    let need_t = || {
        a.t.ok_or_else(|| CliError::Invalid(format!("--kind {:?} needs -t", a.kind).to_lowercase()))
    };
    Ok(match a.kind {
        KindArg::Antisat => build_antisat(a.n, a.block_type)?,
        KindArg::Noncomp => {
            let t = need_t()?;
            let canon = NonCompSpec::canonical(a.n, t);
            build_noncomplementary(&NonCompSpec {
                f_column: a.f_column.unwrap_or(canon.f_column),
                common_row: a.common_row.unwrap_or(canon.common_row),
                q: a.q.unwrap_or(canon.q),
                included_columns: a.columns.as_ref().map(|c| c.iter().copied().collect::<BTreeSet<_>>()),
                block_type: a.block_type,
                ..canon
            })?
        }
        KindArg::Comp => {
            let t = need_t()?;
            let canon = CompSpec::canonical(a.n, t);
            build_complementary(&CompSpec {
                dividing_column: a.dividing_column.unwrap_or(canon.dividing_column),
                g_cell_row: a.g_cell_row.unwrap_or(canon.g_cell_row),
                block_type: a.block_type,
                ..canon
            })?
        }
    })
}

#[derive(Serialize)]
struct GenResult<'a> {
    n: u32,
    kind: BlockKind,
    f_true_size: usize,
    g_true_size: usize,
    family: &'a RightKeyFamily,
    family_description: String,
    right_keys: u64,
    representative_key: Option<String>,
    prediction: Option<crate::blockgen::CorruptibilityPrediction>,
    files: Vec<String>,
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> Result<()> {
    let (block, family) = build(a)?;
    let net = synthesize_block(&block)?;
    let mut files = vec!["block.json", "block.bench", "family.json"];
    write(&a.out.join("block.json"), &(serde_json::to_string_pretty(&block).expect("block serializes") + "\n"))?;
    write(&a.out.join("block.bench"), &emit_bench(&net))?;
    write(&a.out.join("family.json"), &(serde_json::to_string_pretty(&family).expect("family serializes") + "\n"))?;

    let rep = family.representative();
    if let Some(host) = &a.host {
        let host = load_host(host)?;
        let target = match &a.target {
            Some(t) => t.clone(),
            None => host
                .output_names()
                .into_iter()
                .next()
                .ok_or_else(|| CliError::Invalid("host has no outputs".into()))?,
        };
        let locked = integrate(&host, &net, &target, block.correct_output())?;
        write(&a.out.join("locked.bench"), &emit_bench(&locked))?;
        files.push("locked.bench");
        if let Some(k) = rep {
            write(&a.out.join("key.txt"), &(bits_to_string(&k.to_bits(a.n)) + "\n"))?;
            files.push("key.txt");
        }
    }

    // Closed forms hold for the default recipes only.
    let custom = a.f_column.is_some()
        || a.common_row.is_some()
        || a.q.is_some()
        || a.columns.is_some()
        || a.dividing_column.is_some()
        || a.g_cell_row.is_some();
    let prediction = if custom {
        None
    } else {
        Some(predict_corruptibility(a.n, a.t.unwrap_or(0), a.kind.into())?)
    };

    say!("block: n={} kind={:?} |F^T|={} |G^T|={}", a.n, a.kind, block.f().true_set().len(), block.g().true_set().len());
    say!("right keys: {} ({})", family.count(), family.describe());
    if let Some(k) = rep {
        say!("representative key: {}", k.display(a.n));
    }
    if let Some(p) = &prediction {
        say!("predicted corruptibility:");
        say!("{:>10}  {:>24}", "e", "keys");
        for (e, c) in p.histogram.iter().rev() {
            say!("{e:>10}  {c:>24}");
        }
        say!("average over wrong keys: {}", p.average_wrong);
    }
    let files: Vec<String> = files.into_iter().map(String::from).collect();
    write_report(
        cli,
        None,
        &a.out.join("gen.json"),
        GenResult {
            n: a.n,
            kind: a.kind.into(),
            f_true_size: block.f().true_set().len(),
            g_true_size: block.g().true_set().len(),
            family: &family,
            family_description: family.describe(),
            right_keys: family.count(),
            representative_key: rep.map(|k| bits_to_string(&k.to_bits(a.n))),
            prediction,
            files,
        },
    )
}

fn cmd_attack(cli: &Cli, a: &AttackArgs) -> Result<()> {
    let locked = parse_bench(&read(&a.locked)?)?;
    let oracle = match (&a.key, &a.host) {
        (Some(k), None) => {
            let bits = bits_from_string(k.trim()).ok_or_else(|| CliError::Invalid(format!("`{k}` is not a bit string")))?;
            Oracle::keyed(&locked, bits)?
        }
        (None, Some(h)) => Oracle::from_host(&load_host(h)?, &locked)?,
        _ => return Err(CliError::Invalid("give exactly one of --key or --host for the oracle".into())),
    };
    let config = AttackConfig {
        max_iterations: a.max_iterations,
        conflict_limit: a.conflict_limit,
        seed: a.seed,
        solver: match &a.solver {
            Some(cmd) => SolverChoice::External(cmd.clone()),
            None => SolverChoice::Embedded,
        },
    };

    if let Some(step) = a.profile_step {
        let max = a
            .profile_max
            .or(a.budget)
            .unwrap_or_else(|| 1u64.checked_shl(locked.num_inputs() as u32).unwrap_or(u64::MAX));
        let points = corruptibility_profile(&locked, &oracle, step, max, &a.seeds, &config)?;
        write(&a.out.join("profile.csv"), &attacks::profile_to_csv(&points).map_err(csv_err)?)?;
        for p in &points {
            say!("seed {} iteration {}: corruptibility {}{}", p.seed, p.iteration, p.corruptibility, if p.exact { " (exact)" } else { "" });
        }
        return write_report(cli, a.seeds.first().copied(), &a.out.join("profile.json"), &points);
    }

    if let Some(budget) = a.budget {
        let approx = approx_key_after(&locked, &oracle, budget, &config)?;
        let e = netlist_corruptibility(&locked, &approx.key, &oracle)?;
        say!(
            "approximate key after {} iterations: {}{} (corruptibility {e})",
            approx.iterations,
            bits_to_string(&approx.key),
            if approx.exact { ", exact" } else { "" }
        );
        #[derive(Serialize)]
        struct Approx<'a> {
            #[serde(flatten)]
            key: &'a attacks::ApproxKey,
            corruptibility: u64,
        }
        return write_report(cli, a.seed, &a.out.join("approx.json"), Approx { key: &approx, corruptibility: e });
    }

    let trace = sat_attack(&locked, &oracle, &config)?;
    write(&a.out.join("trace.csv"), &trace.to_csv().map_err(csv_err)?)?;
    write_report(cli, a.seed, &a.out.join("trace.json"), &trace)?;
    say!("iterations: {}", trace.iterations);
    say!("wall time: {:.1} ms", trace.wall_time_ms);
    match (trace.status, &trace.recovered_key) {
        (AttackStatus::KeyRecovered, Some(k)) => {
            say!("recovered key: {}", bits_to_string(k));
            Ok(())
        }
        (AttackStatus::IterationCap, _) => Err(CliError::Timeout(format!("iteration cap reached after {} DIPs", trace.iterations))),
        _ => Err(CliError::Timeout(format!("solver budget exhausted after {} DIPs", trace.iterations))),
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<csv>"),
        source: std::io::Error::other(e.to_string()),
    }
}

fn parse_key_pair(s: &str, n: u32) -> Result<Key> {
    let bad = || CliError::Invalid(format!("`{s}` is not a key pair `K_f,K_g` of {n}-bit strings"));
    let (kf, kg) = s.split_once(',').ok_or_else(bad)?;
    let parse = |b: &str| -> Result<u32> {
        let b = b.trim();
        if b.len() != n as usize {
            return Err(bad());
        }
        u32::from_str_radix(b, 2).map_err(|_| bad())
    };
    Ok(Key::new(parse(kf)?, parse(kg)?))
}

#[derive(Default, Serialize)]
struct Analysis {
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    census: Option<attacks::CorruptibilityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranking: Option<Vec<attacks::RankedGate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sps_mode: Option<SpsMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cas_probe: Option<attacks::CasProbe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bypass: Option<attacks::BypassCost>,
}

fn cmd_analyze(cli: &Cli, a: &AnalyzeArgs) -> Result<()> {
    if !(a.census || a.sps || a.cas_probe || a.check || a.bypass.is_some()) {
        return Err(CliError::Invalid(
            "nothing to do: pass --census, --sps, --cas-probe, --bypass or --check".into(),
        ));
    }
    let block = a.block.as_deref().map(load_block).transpose()?;
    let need_block = |what: &str| {
        block
            .as_ref()
            .ok_or_else(|| CliError::Invalid(format!("{what} needs --block")))
    };
    let mut out = Analysis::default();
    let mut seed = None;

    if a.check {
        let b = need_block("--check")?;
        let witness = check_constraint1(b)?;
        let offsets = right_key_offsets(b);
        let overlap = if b.n() <= MAX_OVERLAP_WIDTH {
            Some(wrong_key_overlap(b)?)
        } else {
            None
        };
        say!("constraint 1 witness: {witness:?}");
        say!("constraint 2: {}", check_constraint2(b));
        say!("right-key offsets: {:?}", offsets.members());
        if let Some(o) = &overlap {
            say!("distinct elements: {}, pairwise disjoint: {}", o.distinct_elements, o.pairwise_disjoint);
        }
        out.check = Some(serde_json::json!({
            "constraint1_witness": witness,
            "constraint2": check_constraint2(b),
            "right_key_offsets": offsets.members(),
            "complementary": b.is_complementary(),
            "distinct_elements": overlap.as_ref().map(|o| o.distinct_elements),
            "pairwise_disjoint": overlap.as_ref().map(|o| o.pairwise_disjoint),
        }));
    }

    if a.census {
        let b = need_block("--census")?;
        let mode = if a.exhaustive || (a.samples.is_none() && b.n() <= EXHAUSTIVE_CENSUS_MAX_N) {
            CensusMode::Exhaustive
        } else {
            let s = a.seed.unwrap_or(DEFAULT_CENSUS_SEED);
            seed = Some(s);
            CensusMode::Sampled {
                count: a.samples.unwrap_or(DEFAULT_SAMPLES),
                seed: s,
            }
        };
        let report = corruptibility_census(b, mode)?;
        say!("census ({mode:?}), {} keys:", report.keys_examined);
        say!("{:>10}  {:>12}", "e", "keys");
        for (e, c) in report.histogram.iter().rev() {
            say!("{e:>10}  {c:>12}");
        }
        say!("average over wrong keys: {}", report.average_wrong);
        write(&a.out.join("census.csv"), &report.to_csv().map_err(csv_err)?)?;
        out.census = Some(report);
    }

    if a.sps {
        let net = match (&a.netlist, &block) {
            (Some(p), _) => parse_bench(&read(p)?)?,
            (None, Some(b)) => synthesize_block(b)?,
            (None, None) => return Err(CliError::Invalid("--sps needs --netlist or --block".into())),
        };
        let mode = match a.mode {
            ModeArg::Propagated => SpsMode::Propagated,
            ModeArg::Exact => SpsMode::Exact,
        };
        let stats = attacks::sps_analyze(&net, mode)?;
        let ranking = ads_ranking(&stats, &net);
        say!("{:<24} {:<6} {:>12} {:>9}", "gate", "kind", "ADS", "TFI keys");
        for r in ranking.iter().take(a.top) {
            say!("{:<24} {:<6} {:>12.9} {:>9}", r.name, r.kind, r.ads, r.tfi_keys);
        }
        out.ranking = Some(ranking);
        out.sps_mode = Some(mode);
    }

    if a.cas_probe {
        let p = cas_unlock_probe(need_block("--cas-probe")?);
        say!("all-0 key corruptibility: {}", p.all0);
        say!("all-1 key corruptibility: {}", p.all1);
        out.cas_probe = Some(p);
    }

    if let Some(k) = &a.bypass {
        let b = need_block("--bypass")?;
        let key = parse_key_pair(k, b.n())?;
        let c = bypass_cost(b, key, a.cap);
        say!("N_p = {}", c.n_p);
        say!("patterns: {:?}{}", c.patterns, if c.truncated { " ..." } else { "" });
        out.bypass = Some(c);
    }

    write_report(cli, seed, &a.out.join("analysis.json"), out)
}

fn cmd_solve(a: &SolveArgs) -> Result<()> {
    let (num_vars, clauses) = parse_dimacs(&read(&a.cnf)?).map_err(|e| match e {
        DimacsError::Io(source) => CliError::Io {
            path: a.cnf.clone(),
            source,
        },
        other => CliError::Invalid(format!("{}: {other}", a.cnf.display())),
    })?;
    let mut solver = Solver::from_clauses(
        num_vars,
        &clauses,
        SolverConfig {
            seed: a.seed,
            conflict_limit: a.conflict_limit,
            ..Default::default()
        },
    );
    let result = solver.solve();
    say!("{}", format_answer(&result).trim_end());
    match result {
        crate::satcore::SolveResult::Timeout => Err(CliError::Timeout("conflict limit reached".into())),
        _ => Ok(()),
    }
}
