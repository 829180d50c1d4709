//! Output corruptibility: how many input patterns a key gets wrong.
//!
//! For a standalone block the count has a closed form,
//! `e(K_f, K_g) = |(A ^ K_f) ∩ (B ^ K_g)|` over the error sets, which the
//! census uses instead of simulating every input.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AttackError, Result};
use crate::blockgen::Exact;
use crate::netlist::{Netlist, Oracle};
use crate::truthsets::{overlap_profile, BlockType, Key, LockBlock, TruthSet};

/// Exhaustive census covers all `2^(2n)` keys.
pub const EXHAUSTIVE_CENSUS_MAX_N: u32 = 6;
/// Netlist sweeps enumerate `2^inputs` patterns.
pub const MAX_SWEEP_INPUTS: usize = 24;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_CENSUS_SEED: u64 = 0x6a6e_7469;

/// Patterns on which `locked` under `key` disagrees with the oracle.
pub fn netlist_corruptibility(locked: &Netlist, key: &[bool], oracle: &Oracle) -> Result<u64> {
    let m = locked.num_inputs();
    if m > MAX_SWEEP_INPUTS {
        return Err(AttackError::TooWide {
            what: "corruptibility sweep",
            max: MAX_SWEEP_INPUTS,
            got: m,
        });
    }
    let total = 1u64 << m;
    let chunks = total.div_ceil(64);
    let keys: Vec<u64> = key.iter().map(|&b| if b { u64::MAX } else { 0 }).collect();
    (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<u64> {
            let base = c * 64;
            let xs: Vec<u64> = (0..m)
                .map(|i| (0..64u64).fold(0u64, |w, j| w | (((base + j) >> i) & 1) << j))
                .collect();
            let values = locked.simulate_words(&xs, &keys)?;
            let want = oracle.query_words(&xs)?;
            let diff = locked
                .outputs()
                .iter()
                .zip(&want)
                .fold(0u64, |acc, (w, &o)| acc | (values[w.index()] ^ o));
            let live = if total - base >= 64 { u64::MAX } else { (1u64 << (total - base)) - 1 };
            Ok((diff & live).count_ones() as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Error sets of a block prepared for repeated corruptibility lookups.
struct Corruptor {
    small: Vec<u32>,
    big: TruthSet,
    profile: Option<Vec<u64>>,
}

impl Corruptor {
    fn new(block: &LockBlock, tabulate: bool) -> Self {
        let (a, b) = block.error_sets();
        let profile = tabulate.then(|| overlap_profile(&a, &b).expect("same width"));
        let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        Corruptor {
            small: small.members(),
            big,
            profile,
        }
    }

    fn count(&self, offset: u32) -> u64 {
        match &self.profile {
            Some(p) => p[offset as usize],
            None => self.small.iter().filter(|&&m| self.big.contains(m ^ offset)).count() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CensusMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorruptibilityReport {
    pub n: u32,
    pub block_type: BlockType,
    #[serde(flatten)]
    pub mode: CensusMode,
    /// `e -> number of keys`; `e = 0` counts right keys.
    pub histogram: BTreeMap<u64, u64>,
    pub keys_examined: u64,
    pub right_keys: u64,
    pub average_wrong: Exact,
    pub average_all: Exact,
}

impl CorruptibilityReport {
    fn from_histogram(block: &LockBlock, mode: CensusMode, histogram: BTreeMap<u64, u64>) -> Self {
        let keys: u64 = histogram.values().sum();
        let right = histogram.get(&0).copied().unwrap_or(0);
        let weighted: u128 = histogram.iter().map(|(&e, &c)| e as u128 * c as u128).sum();
        let wrong = (keys - right) as u128;
        CorruptibilityReport {
            n: block.n(),
            block_type: block.block_type(),
            mode,
            histogram,
            keys_examined: keys,
            right_keys: right,
            average_wrong: Exact(Ratio::new(weighted, wrong.max(1))),
            average_all: Exact(Ratio::new(weighted, (keys as u128).max(1))),
        }
    }

    pub fn to_csv(&self) -> std::result::Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["e", "keys"])?;
        for (e, c) in &self.histogram {
            w.write_record([e.to_string(), c.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Histogram of corruptibility over keys: every key (`n <= 6`) or a seeded
/// uniform sample.
pub fn corruptibility_census(block: &LockBlock, mode: CensusMode) -> Result<CorruptibilityReport> {
    let n = block.n();
    let histogram = match mode {
        CensusMode::Exhaustive => {
            if n > EXHAUSTIVE_CENSUS_MAX_N {
                return Err(AttackError::TooWide {
                    what: "exhaustive census",
                    max: EXHAUSTIVE_CENSUS_MAX_N as usize,
                    got: n as usize,
                });
            }
            let c = Corruptor::new(block, false);
            (0..1u32 << n)
                .into_par_iter()
                .map(|kf| {
                    let mut h = BTreeMap::new();
                    for kg in 0..1u32 << n {
                        *h.entry(c.count(kf ^ kg)).or_insert(0u64) += 1;
                    }
                    h
                })
                .reduce(BTreeMap::new, merge)
        }
        CensusMode::Sampled { count, seed } => {
            let c = Corruptor::new(block, n <= 20);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = ((1u64 << n) - 1) as u32;
            let keys: Vec<Key> = (0..count)
                .map(|_| Key::new(rng.gen::<u32>() & mask, rng.gen::<u32>() & mask))
                .collect();
            keys.par_iter()
                .map(|k| BTreeMap::from([(c.count(k.offset()), 1u64)]))
                .reduce(BTreeMap::new, merge)
        }
    };
    Ok(CorruptibilityReport::from_histogram(block, mode, histogram))
}

fn merge(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Corruptibility of the all-0 and all-1 keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CasProbe {
    pub all0: u64,
    pub all1: u64,
}

pub fn cas_unlock_probe(block: &LockBlock) -> CasProbe {
    let ones = ((1u64 << block.n()) - 1) as u32;
    CasProbe {
        all0: block.corruptibility(Key::new(0, 0)),
        all1: block.corruptibility(Key::new(ones, ones)),
    }
}

/// Input patterns a bypass circuit would have to patch for `key`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BypassCost {
    pub n_p: u64,
    /// Offending patterns, ascending, at most the requested cap.
    pub patterns: Vec<u32>,
    pub truncated: bool,
}

pub fn bypass_cost(block: &LockBlock, key: Key, cap: usize) -> BypassCost {
    let (a, b) = block.error_sets();
    let k = key.offset();
    // x errs iff x ^ K_f in A and x ^ K_g in B.
    let mut patterns: Vec<u32> = a.iter().filter(|&m| b.contains(m ^ k)).map(|m| m ^ key.kf).collect();
    patterns.sort_unstable();
    let n_p = patterns.len() as u64;
    let truncated = patterns.len() > cap;
    patterns.truncate(cap);
    BypassCost {
        n_p,
        patterns,
        truncated,
    }
}
