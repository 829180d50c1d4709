use std::sync::atomic::{AtomicU64, Ordering};

use super::{Netlist, NetlistError, Result};
use crate::truthsets::Key;

/// An activated chip: answers input queries with correct outputs.
///
/// Inputs are always given in the primary-input order of the locked netlist
/// under attack.
#[derive(Debug)]
pub struct Oracle {
    net: Netlist,
    key: Vec<bool>,
    /// For a host oracle, the locked-netlist position of each host input.
    positions: Option<Vec<usize>>,
    arity: usize,
    queries: AtomicU64,
}

impl Clone for Oracle {
    fn clone(&self) -> Self {
        Oracle {
            net: self.net.clone(),
            key: self.key.clone(),
            positions: self.positions.clone(),
            arity: self.arity,
            queries: AtomicU64::new(self.queries.load(Ordering::Relaxed)),
        }
    }
}

impl Oracle {
    /// The locked netlist itself with its keys fixed.
    pub fn keyed(locked: &Netlist, key_bits: Vec<bool>) -> Result<Self> {
        if key_bits.len() != locked.num_keys() {
            return Err(NetlistError::Width {
                expected: locked.num_keys(),
                got: key_bits.len(),
            });
        }
        Ok(Oracle {
            net: locked.clone(),
            key: key_bits,
            positions: None,
            arity: locked.num_inputs(),
            queries: AtomicU64::new(0),
        })
    }

    /// Keyed oracle for a block-derived netlist, with `key` split per block width `n`.
    pub fn with_key(locked: &Netlist, key: Key, n: u32) -> Result<Self> {
        Self::keyed(locked, key.to_bits(n))
    }

    /// The unlocked host. Host inputs are matched to `locked` inputs by name;
    /// extra locked inputs are ignored and outputs must agree by name.
    pub fn from_host(host: &Netlist, locked: &Netlist) -> Result<Self> {
        if host.num_keys() != 0 {
            return Err(NetlistError::Unsupported("host oracle must have no key inputs".into()));
        }
        let names = locked.input_names();
        let positions = host
            .input_names()
            .iter()
            .map(|h| {
                names
                    .iter()
                    .position(|n| n == h)
                    .ok_or_else(|| NetlistError::UnknownWire(format!("{h} (host input missing from locked netlist)")))
            })
            .collect::<Result<Vec<_>>>()?;
        if host.output_names() != locked.output_names() {
            return Err(NetlistError::Unsupported(format!(
                "output mismatch: host {:?} vs locked {:?}",
                host.output_names(),
                locked.output_names()
            )));
        }
        Ok(Oracle {
            net: host.clone(),
            key: Vec::new(),
            positions: Some(positions),
            arity: locked.num_inputs(),
            queries: AtomicU64::new(0),
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.arity
    }

    pub fn num_outputs(&self) -> usize {
        self.net.outputs().len()
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn query(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.arity {
            return Err(NetlistError::Width {
                expected: self.arity,
                got: x.len(),
            });
        }
        self.queries.fetch_add(1, Ordering::Relaxed);
        match &self.positions {
            None => self.net.eval(x, &self.key),
            Some(pos) => {
                let xs: Vec<bool> = pos.iter().map(|&p| x[p]).collect();
                self.net.eval(&xs, &[])
            }
        }
    }

    /// 64 queries at once; returns one word per output. Not counted.
    pub fn query_words(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.arity {
            return Err(NetlistError::Width {
                expected: self.arity,
                got: x.len(),
            });
        }
        let (xs, keys): (Vec<u64>, Vec<u64>) = match &self.positions {
            None => (x.to_vec(), self.key.iter().map(|&b| if b { u64::MAX } else { 0 }).collect()),
            Some(pos) => (pos.iter().map(|&p| x[p]).collect(), Vec::new()),
        };
        let values = self.net.simulate_words(&xs, &keys)?;
        Ok(self.net.outputs().iter().map(|w| values[w.index()]).collect())
    }
}
