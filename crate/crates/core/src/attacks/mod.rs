//! Attacks and analyses on locked circuits: the oracle-guided SAT attack and
//! approximate keys, corruptibility measurement, signal-probability skew, the
//! all-0/all-1 key probe and bypass cost.

mod corruption;
mod sat;
mod sps;

use thiserror::Error;

use crate::netlist::NetlistError;
use crate::satcore::DimacsError;
use crate::truthsets::TruthSetError;

pub use corruption::{
    bypass_cost, cas_unlock_probe, corruptibility_census, netlist_corruptibility, BypassCost, CasProbe, CensusMode,
    CorruptibilityReport, DEFAULT_CENSUS_SEED, DEFAULT_SAMPLES, EXHAUSTIVE_CENSUS_MAX_N, MAX_SWEEP_INPUTS,
};
pub use sat::{
    approx_key_after, corruptibility_profile, profile_to_csv, sat_attack, ApproxKey, AttackConfig, AttackSession, AttackStatus,
    AttackTrace, DipRecord, ProfilePoint, StepOutcome,
};
pub use sps::{ads_ranking, sps_analyze, RankedGate, SignalStats, SpsMode, EXACT_SPS_MAX_INPUTS};

#[derive(Debug, Error)]
pub enum AttackError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Solver(#[from] DimacsError),
    #[error(transparent)]
    TruthSet(#[from] TruthSetError),
    #[error("{what} supports at most {max} inputs, got {got}")]
    TooWide { what: &'static str, max: usize, got: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("recovered key contradicts recorded query {0}")]
    Inconsistent(u64),
}

pub type Result<T> = std::result::Result<T, AttackError>;

/// Bits as a `0`/`1` string, first element first.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_string(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

mod bitstr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::bits_to_string(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        let s = String::deserialize(d)?;
        super::bits_from_string(&s).ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a bit string")))
    }

    pub mod opt {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(bits: &Option<Vec<bool>>, s: S) -> Result<S::Ok, S::Error> {
            match bits {
                Some(b) => s.serialize_some(&super::super::bits_to_string(b)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<bool>>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| {
                super::super::bits_from_string(&s)
                    .ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a bit string")))
            })
            .transpose()
        }
    }
}
