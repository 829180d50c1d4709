//! Signal probability skew (SPS) and absolute difference of skew (ADS).
//!
//! `s_x = Pr[x = 1] - 0.5` with primary and key inputs independent and
//! uniform. Propagated mode pushes probabilities through gates as if every
//! gate's inputs were independent; exact mode counts ones over all input
//! assignments. ADS is `|s_a - s_b|` for a 2-input gate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AttackError, Result};
use crate::netlist::{GateKind, Netlist};

/// Exact mode enumerates `2^(inputs + keys)` assignments.
pub const EXACT_SPS_MAX_INPUTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpsMode {
    Propagated,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalStats {
    pub mode: SpsMode,
    /// Wire names, indexed like the netlist's wires.
    pub wires: Vec<String>,
    /// Skew per wire.
    pub sps: Vec<f64>,
    /// ADS per gate in topological order; `None` unless the gate has two
    /// inputs.
    pub ads: Vec<Option<f64>>,
}

impl SignalStats {
    pub fn sps_of(&self, wire: &str) -> Option<f64> {
        self.wires.iter().position(|w| w == wire).map(|i| self.sps[i])
    }
}

fn probability(kind: GateKind, ps: &[f64]) -> f64 {
    let and = || ps.iter().product::<f64>();
    let or = || 1.0 - ps.iter().map(|p| 1.0 - p).product::<f64>();
    // Pr[parity = 1] = (1 - prod(1 - 2p)) / 2.
    let xor = || 0.5 - 0.5 * ps.iter().map(|p| 1.0 - 2.0 * p).product::<f64>();
    match kind {
        GateKind::And => and(),
        GateKind::Nand => 1.0 - and(),
        GateKind::Or => or(),
        GateKind::Nor => 1.0 - or(),
        GateKind::Xor => xor(),
        GateKind::Xnor => 1.0 - xor(),
        GateKind::Buf => ps[0],
        GateKind::Not => 1.0 - ps[0],
    }
}

fn ads_per_gate(net: &Netlist, sps: &[f64]) -> Vec<Option<f64>> {
    net.gates()
        .iter()
        .map(|g| match g.inputs.as_slice() {
            [a, b] => Some((sps[a.index()] - sps[b.index()]).abs()),
            _ => None,
        })
        .collect()
}

pub fn sps_analyze(net: &Netlist, mode: SpsMode) -> Result<SignalStats> {
    let sps = match mode {
        SpsMode::Propagated => {
            let mut p = vec![0.5f64; net.num_wires()];
            for g in net.gates() {
                let ins: Vec<f64> = g.inputs.iter().map(|w| p[w.index()]).collect();
                p[g.output.index()] = probability(g.kind, &ins);
            }
            p.into_iter().map(|x| x - 0.5).collect()
        }
        SpsMode::Exact => exact_sps(net)?,
    };
    Ok(SignalStats {
        mode,
        wires: (0..net.num_wires())
            .map(|i| net.wire_name(crate::netlist::WireId(i as u32)).to_string())
            .collect(),
        ads: ads_per_gate(net, &sps),
        sps,
    })
}

fn exact_sps(net: &Netlist) -> Result<Vec<f64>> {
    let (m, k) = (net.num_inputs(), net.num_keys());
    let total_bits = m + k;
    if total_bits > EXACT_SPS_MAX_INPUTS {
        return Err(AttackError::TooWide {
            what: "exact SPS",
            max: EXACT_SPS_MAX_INPUTS,
            got: total_bits,
        });
    }
    let total = 1u64 << total_bits;
    let live_last = if total >= 64 { u64::MAX } else { (1u64 << total) - 1 };
    let ones = (0..total.div_ceil(64))
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let base = c * 64;
            let word = |bit: usize| (0..64u64).fold(0u64, |w, j| w | (((base + j) >> bit) & 1) << j);
            let xs: Vec<u64> = (0..m).map(word).collect();
            let ks: Vec<u64> = (m..total_bits).map(word).collect();
            let values = net.simulate_words(&xs, &ks)?;
            Ok(values.iter().map(|v| (v & live_last).count_ones() as u64).collect())
        })
        .try_reduce(
            || vec![0u64; net.num_wires()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(ones.into_iter().map(|c| c as f64 / total as f64 - 0.5).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedGate {
    /// Output wire name.
    pub name: String,
    pub kind: GateKind,
    pub ads: f64,
    pub tfi_keys: usize,
}

/// 2-input gates by ADS descending, then fan-in key count descending, then
/// name.
pub fn ads_ranking(stats: &SignalStats, net: &Netlist) -> Vec<RankedGate> {
    let mut ranked: Vec<RankedGate> = net
        .gates()
        .iter()
        .zip(&stats.ads)
        .filter_map(|(g, ads)| {
            ads.map(|ads| RankedGate {
                name: net.wire_name(g.output).to_string(),
                kind: g.kind,
                ads,
                tfi_keys: net.tfi_key_count(g.output),
            })
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.ads
            .total_cmp(&a.ads)
            .then(b.tfi_keys.cmp(&a.tfi_keys))
            .then_with(|| a.name.cmp(&b.name))
    });
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockgen::build_antisat;
    use crate::netlist::{parse_bench, synthesize_block, G_GATE};
    use crate::truthsets::BlockType;

    #[test]
    fn and_gate_skew() {
        let net = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n").unwrap();
        for mode in [SpsMode::Propagated, SpsMode::Exact] {
            let s = sps_analyze(&net, mode).unwrap();
            assert_eq!(s.sps_of("y"), Some(-0.25));
            assert_eq!(s.ads, vec![Some(0.0)]);
        }
        let r = ads_ranking(&sps_analyze(&net, SpsMode::Propagated).unwrap(), &net);
        assert_eq!(r[0].tfi_keys, 0);
    }

    #[test]
    fn antisat_g_gate_tops_ranking() {
        let (b, _) = build_antisat(8, BlockType::Type0).unwrap();
        let net = synthesize_block(&b).unwrap();
        let s = sps_analyze(&net, SpsMode::Propagated).unwrap();
        let r = ads_ranking(&s, &net);
        assert_eq!(r[0].name, G_GATE);
        assert_eq!(r[0].tfi_keys, 16);
        assert!((r[0].ads - (1.0 - 2.0 / 256.0)).abs() < 1e-12);
    }

    #[test]
    fn exact_matches_propagated_on_blocks() {
        let (b, _) = build_antisat(4, BlockType::Type1).unwrap();
        let net = synthesize_block(&b).unwrap();
        let p = sps_analyze(&net, SpsMode::Propagated).unwrap();
        let e = sps_analyze(&net, SpsMode::Exact).unwrap();
        for (x, y) in p.sps.iter().zip(&e.sps) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
