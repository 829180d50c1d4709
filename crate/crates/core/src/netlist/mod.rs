//! Gate-level netlists: construction, bench text, simulation, CNF encoding,
//! block synthesis and oracles.

mod bench;
mod cnf;
mod oracle;
mod synth;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bench::{emit_bench, parse_bench};
pub use cnf::{build_miter, encode_circuit, tseitin, CnfFormula, Miter, MiterVars, Signal, VarMap};
pub use oracle::Oracle;
pub use synth::{integrate, synthesize_block, synthesize_covers, G_GATE, KEY_PREFIX};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("wire `{0}` is driven more than once")]
    MultipleDrivers(String),
    #[error("wire `{0}` has no driver")]
    Undriven(String),
    #[error("combinational cycle through `{0}`")]
    Cycle(String),
    #[error("gate `{0}` has the wrong number of inputs for its kind")]
    Arity(String),
    #[error("unknown wire `{0}`")]
    UnknownWire(String),
    #[error("no value assigned to input `{0}`")]
    MissingAssignment(String),
    #[error("expected {expected} values, got {got}")]
    Width { expected: usize, got: usize },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, NetlistError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WireId(pub u32);

impl WireId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        let upper = s.to_ascii_uppercase();
        match upper.as_str() {
            "BUFF" => Some(GateKind::Buf),
            _ => GateKind::ALL.into_iter().find(|k| k.name() == upper),
        }
    }

    pub fn is_unary(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Buf)
    }

    /// Output is the complement of the base function.
    pub fn is_inverting(self) -> bool {
        matches!(self, GateKind::Nand | GateKind::Nor | GateKind::Xnor | GateKind::Not)
    }

    #[inline]
    pub fn eval_words(self, ins: impl Iterator<Item = u64>) -> u64 {
        let base = match self {
            GateKind::And | GateKind::Nand => ins.fold(u64::MAX, |a, b| a & b),
            GateKind::Or | GateKind::Nor => ins.fold(0, |a, b| a | b),
            GateKind::Xor | GateKind::Xnor => ins.fold(0, |a, b| a ^ b),
            GateKind::Not | GateKind::Buf => ins.fold(0, |a, b| a | b),
        };
        if self.is_inverting() {
            !base
        } else {
            base
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<WireId>,
    pub output: WireId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Driver {
    PrimaryInput(usize),
    KeyInput(usize),
    Gate(usize),
}

/// An acyclic combinational netlist. Wire order is creation order; gates are
/// kept in topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    names: Vec<String>,
    index: HashMap<String, WireId>,
    drivers: Vec<Driver>,
    gates: Vec<Gate>,
    primary_inputs: Vec<WireId>,
    key_inputs: Vec<WireId>,
    outputs: Vec<WireId>,
    /// All inputs in declaration order, for faithful re-emission.
    input_order: Vec<WireId>,
}

impl Netlist {
    pub fn num_wires(&self) -> usize {
        self.names.len()
    }

    pub fn wire_name(&self, w: WireId) -> &str {
        &self.names[w.index()]
    }

    pub fn wire(&self, name: &str) -> Option<WireId> {
        self.index.get(name).copied()
    }

    pub fn driver(&self, w: WireId) -> Driver {
        self.drivers[w.index()]
    }

    /// Gates in topological order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_driving(&self, w: WireId) -> Option<&Gate> {
        match self.drivers[w.index()] {
            Driver::Gate(g) => Some(&self.gates[g]),
            _ => None,
        }
    }

    pub fn primary_inputs(&self) -> &[WireId] {
        &self.primary_inputs
    }

    pub fn key_inputs(&self) -> &[WireId] {
        &self.key_inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    pub fn input_order(&self) -> &[WireId] {
        &self.input_order
    }

    pub fn num_inputs(&self) -> usize {
        self.primary_inputs.len()
    }

    pub fn num_keys(&self) -> usize {
        self.key_inputs.len()
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|&w| self.wire_name(w).to_string()).collect()
    }

    pub fn input_names(&self) -> Vec<String> {
        self.primary_inputs.iter().map(|&w| self.wire_name(w).to_string()).collect()
    }

    /// Counts of each gate kind.
    pub fn gate_histogram(&self) -> HashMap<GateKind, usize> {
        let mut h = HashMap::new();
        for g in &self.gates {
            *h.entry(g.kind).or_insert(0) += 1;
        }
        h
    }

    /// Evaluates 64 patterns at once; bit `j` of each word is pattern `j`.
    /// Returns the value of every wire.
    pub fn simulate_words(&self, inputs: &[u64], keys: &[u64]) -> Result<Vec<u64>> {
        self.check_arity(inputs.len(), keys.len())?;
        let mut values = vec![0u64; self.names.len()];
        for (&w, &v) in self.primary_inputs.iter().zip(inputs) {
            values[w.index()] = v;
        }
        for (&w, &v) in self.key_inputs.iter().zip(keys) {
            values[w.index()] = v;
        }
        for g in &self.gates {
            let v = g.kind.eval_words(g.inputs.iter().map(|i| values[i.index()]));
            values[g.output.index()] = v;
        }
        Ok(values)
    }

    fn check_arity(&self, inputs: usize, keys: usize) -> Result<()> {
        if inputs != self.primary_inputs.len() {
            return Err(NetlistError::Width {
                expected: self.primary_inputs.len(),
                got: inputs,
            });
        }
        if keys != self.key_inputs.len() {
            return Err(NetlistError::Width {
                expected: self.key_inputs.len(),
                got: keys,
            });
        }
        Ok(())
    }

    /// Output values for one input/key assignment, in `outputs()` order.
    pub fn eval(&self, inputs: &[bool], keys: &[bool]) -> Result<Vec<bool>> {
        let to_words = |bs: &[bool]| bs.iter().map(|&b| if b { u64::MAX } else { 0 }).collect::<Vec<_>>();
        let values = self.simulate_words(&to_words(inputs), &to_words(keys))?;
        Ok(self.outputs.iter().map(|w| values[w.index()] & 1 == 1).collect())
    }

    /// Named simulation: every primary and key input must be assigned.
    pub fn simulate(&self, assignment: &HashMap<String, bool>) -> Result<HashMap<String, bool>> {
        let pick = |ws: &[WireId]| -> Result<Vec<bool>> {
            ws.iter()
                .map(|&w| {
                    let name = self.wire_name(w);
                    assignment
                        .get(name)
                        .copied()
                        .ok_or_else(|| NetlistError::MissingAssignment(name.to_string()))
                })
                .collect()
        };
        let outs = self.eval(&pick(&self.primary_inputs)?, &pick(&self.key_inputs)?)?;
        Ok(self.output_names().into_iter().zip(outs).collect())
    }

    /// Key inputs in the transitive fan-in of `w`.
    pub fn tfi_key_count(&self, w: WireId) -> usize {
        let mut seen = vec![false; self.names.len()];
        let mut stack = vec![w];
        let mut count = 0;
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x.index()], true) {
                continue;
            }
            match self.drivers[x.index()] {
                Driver::KeyInput(_) => count += 1,
                Driver::PrimaryInput(_) => {}
                Driver::Gate(g) => stack.extend(self.gates[g].inputs.iter().copied()),
            }
        }
        count
    }
}

/// Incremental netlist construction; `finish` checks drivers and cycles and
/// sorts gates topologically.
#[derive(Debug, Default, Clone)]
pub struct NetlistBuilder {
    names: Vec<String>,
    index: HashMap<String, WireId>,
    drivers: Vec<Option<Driver>>,
    gates: Vec<Gate>,
    gate_lines: Vec<usize>,
    primary_inputs: Vec<WireId>,
    key_inputs: Vec<WireId>,
    outputs: Vec<WireId>,
    input_order: Vec<WireId>,
    output_lines: Vec<usize>,
    first_use: Vec<usize>,
    line: usize,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Source line attached to subsequent declarations (for error messages).
    pub fn at_line(&mut self, line: usize) -> &mut Self {
        self.line = line;
        self
    }

    pub fn wire(&mut self, name: &str) -> WireId {
        if let Some(&w) = self.index.get(name) {
            return w;
        }
        let w = WireId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), w);
        self.drivers.push(None);
        self.first_use.push(self.line);
        w
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    fn drive(&mut self, w: WireId, d: Driver) -> Result<()> {
        let slot = &mut self.drivers[w.index()];
        if slot.is_some() {
            return Err(self.located(NetlistError::MultipleDrivers(self.names[w.index()].clone())));
        }
        *slot = Some(d);
        Ok(())
    }

    fn located(&self, e: NetlistError) -> NetlistError {
        if self.line == 0 {
            e
        } else {
            NetlistError::Parse {
                line: self.line,
                msg: e.to_string(),
            }
        }
    }

    pub fn input(&mut self, name: &str) -> Result<WireId> {
        let w = self.wire(name);
        self.drive(w, Driver::PrimaryInput(self.primary_inputs.len()))?;
        self.primary_inputs.push(w);
        self.input_order.push(w);
        Ok(w)
    }

    pub fn key_input(&mut self, name: &str) -> Result<WireId> {
        let w = self.wire(name);
        self.drive(w, Driver::KeyInput(self.key_inputs.len()))?;
        self.key_inputs.push(w);
        self.input_order.push(w);
        Ok(w)
    }

    pub fn output(&mut self, name: &str) -> WireId {
        let w = self.wire(name);
        self.outputs.push(w);
        self.output_lines.push(self.line);
        w
    }

    pub fn gate(&mut self, kind: GateKind, inputs: &[WireId], output: &str) -> Result<WireId> {
        let arity_ok = if kind.is_unary() {
            inputs.len() == 1
        } else {
            !inputs.is_empty()
        };
        if !arity_ok {
            return Err(self.located(NetlistError::Arity(output.to_string())));
        }
        let out = self.wire(output);
        self.drive(out, Driver::Gate(self.gates.len()))?;
        self.gates.push(Gate {
            kind,
            inputs: inputs.to_vec(),
            output: out,
        });
        self.gate_lines.push(self.line);
        Ok(out)
    }

    /// Gate whose inputs are given by name.
    pub fn gate_named(&mut self, kind: GateKind, inputs: &[&str], output: &str) -> Result<WireId> {
        let ins: Vec<WireId> = inputs.iter().map(|n| self.wire(n)).collect();
        self.gate(kind, &ins, output)
    }

    pub fn finish(self) -> Result<Netlist> {
        let at = |line: usize, e: NetlistError| {
            if line == 0 {
                e
            } else {
                NetlistError::Parse {
                    line,
                    msg: e.to_string(),
                }
            }
        };
        let mut drivers = Vec::with_capacity(self.drivers.len());
        for (i, d) in self.drivers.iter().enumerate() {
            match d {
                Some(d) => drivers.push(*d),
                None => return Err(at(self.first_use[i], NetlistError::Undriven(self.names[i].clone()))),
            }
        }
        // Kahn's algorithm over gates.
        let n = self.gates.len();
        let mut pending = vec![0usize; n];
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (gi, g) in self.gates.iter().enumerate() {
            for i in &g.inputs {
                if let Driver::Gate(src) = drivers[i.index()] {
                    pending[gi] += 1;
                    users[src].push(gi);
                }
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&g| pending[g] == 0).rev().collect();
        let mut order = Vec::with_capacity(n);
        while let Some(g) = ready.pop() {
            order.push(g);
            for &u in users[g].iter().rev() {
                pending[u] -= 1;
                if pending[u] == 0 {
                    ready.push(u);
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&g| pending[g] > 0).expect("cycle leaves a pending gate");
            let name = self.names[self.gates[stuck].output.index()].clone();
            return Err(at(self.gate_lines[stuck], NetlistError::Cycle(name)));
        }
        let mut remap = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        for d in drivers.iter_mut() {
            if let Driver::Gate(g) = d {
                *g = remap[*g];
            }
        }
        let mut gates = self.gates;
        let mut sorted: Vec<Gate> = Vec::with_capacity(n);
        let mut slots: Vec<Option<Gate>> = gates.drain(..).map(Some).collect();
        for &old in &order {
            sorted.push(slots[old].take().expect("each gate placed once"));
        }
        Ok(Netlist {
            names: self.names,
            index: self.index,
            drivers,
            gates: sorted,
            primary_inputs: self.primary_inputs,
            key_inputs: self.key_inputs,
            outputs: self.outputs,
            input_order: self.input_order,
        })
    }
}
