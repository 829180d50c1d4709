//! Circuit-to-CNF encodings.
//!
//! [`tseitin`] is the textbook one-variable-per-wire encoding. [`encode_circuit`]
//! writes into any [`ClauseSink`] and folds constants, which keeps the
//! oracle-consistency copies added by the attack loop small.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Driver, GateKind, Netlist, NetlistError, Result};
use crate::satcore::{write_dimacs, ClauseSink, Lit, Var};

/// A clause list with a wire-to-variable map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
    /// Variable of each wire (by wire index), when the formula was built
    /// from a netlist.
    pub wire_vars: Vec<Var>,
}

impl ClauseSink for CnfFormula {
    fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars - 1)
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        self.clauses.push(lits.to_vec());
    }
}

impl CnfFormula {
    pub fn to_dimacs(&self) -> String {
        write_dimacs(self.num_vars, &self.clauses)
    }

    /// Whether a full assignment satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }
}

/// DIMACS variable numbers (1-based) of named wires, for the sidecar file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarMap {
    pub num_vars: u32,
    pub inputs: Vec<String>,
    pub keys: Vec<String>,
    pub outputs: Vec<String>,
    pub wires: BTreeMap<String, i64>,
}

impl VarMap {
    pub fn new(net: &Netlist, cnf: &CnfFormula) -> Self {
        let wires = (0..net.num_wires())
            .map(|i| {
                let w = super::WireId(i as u32);
                (net.wire_name(w).to_string(), cnf.wire_vars[i].to_dimacs())
            })
            .collect();
        VarMap {
            num_vars: cnf.num_vars,
            inputs: net.input_names(),
            keys: net.key_inputs().iter().map(|&w| net.wire_name(w).to_string()).collect(),
            outputs: net.output_names(),
            wires,
        }
    }
}

fn gate_clauses(sink: &mut impl ClauseSink, kind: GateKind, ins: &[Lit], y: Lit) {
    // Inverting kinds encode the base function on !y.
    let out = if kind.is_inverting() { !y } else { y };
    match kind {
        GateKind::And | GateKind::Nand => {
            let mut big: Vec<Lit> = ins.iter().map(|&a| !a).collect();
            big.push(out);
            sink.add_clause(&big);
            for &a in ins {
                sink.add_clause(&[a, !out]);
            }
        }
        GateKind::Or | GateKind::Nor => {
            let mut big: Vec<Lit> = ins.to_vec();
            big.push(!out);
            sink.add_clause(&big);
            for &a in ins {
                sink.add_clause(&[!a, out]);
            }
        }
        GateKind::Not | GateKind::Buf => {
            sink.add_clause(&[!ins[0], out]);
            sink.add_clause(&[ins[0], !out]);
        }
        GateKind::Xor | GateKind::Xnor => {
            let mut acc = ins[0];
            for (i, &b) in ins[1..].iter().enumerate() {
                let last = i + 2 == ins.len();
                let z = if last { out } else { sink.new_var().positive() };
                xor_clauses(sink, acc, b, z);
                acc = z;
            }
            if ins.len() == 1 {
                sink.add_clause(&[!acc, out]);
                sink.add_clause(&[acc, !out]);
            }
        }
    }
}

fn xor_clauses(sink: &mut impl ClauseSink, a: Lit, b: Lit, z: Lit) {
    sink.add_clause(&[!a, !b, !z]);
    sink.add_clause(&[a, b, !z]);
    sink.add_clause(&[a, !b, z]);
    sink.add_clause(&[!a, b, z]);
}

/// One variable per wire (variable `i` is wire `i`), plus auxiliaries for
/// XOR gates with more than two inputs.
pub fn tseitin(net: &Netlist) -> CnfFormula {
    let mut cnf = CnfFormula {
        num_vars: net.num_wires() as u32,
        clauses: Vec::new(),
        wire_vars: (0..net.num_wires() as u32).map(Var).collect(),
    };
    for g in net.gates() {
        let ins: Vec<Lit> = g.inputs.iter().map(|w| Var(w.0).positive()).collect();
        gate_clauses(&mut cnf, g.kind, &ins, Var(g.output.0).positive());
    }
    cnf
}

/// A wire's value in an encoding: a known constant or a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    Const(bool),
    Lit(Lit),
}

impl Signal {
    pub fn negate(self) -> Signal {
        match self {
            Signal::Const(b) => Signal::Const(!b),
            Signal::Lit(l) => Signal::Lit(!l),
        }
    }

    /// Forces the signal to `value` (an empty clause when that is impossible).
    pub fn assert_value(self, sink: &mut (impl ClauseSink + ?Sized), value: bool) {
        match self {
            Signal::Const(b) if b == value => {}
            Signal::Const(_) => sink.add_clause(&[]),
            Signal::Lit(l) => sink.add_clause(&[if value { l } else { !l }]),
        }
    }
}

fn and_signal(sink: &mut (impl ClauseSink + ?Sized), ins: impl Iterator<Item = Signal>) -> Signal {
    let mut lits: Vec<Lit> = Vec::new();
    for s in ins {
        match s {
            Signal::Const(false) => return Signal::Const(false),
            Signal::Const(true) => {}
            Signal::Lit(l) => lits.push(l),
        }
    }
    lits.sort_unstable_by_key(|l| l.code());
    lits.dedup();
    if lits.windows(2).any(|w| w[0] == !w[1]) {
        return Signal::Const(false);
    }
    match lits.len() {
        0 => Signal::Const(true),
        1 => Signal::Lit(lits[0]),
        _ => {
            let y = sink.new_var().positive();
            let mut big: Vec<Lit> = lits.iter().map(|&a| !a).collect();
            big.push(y);
            sink.add_clause(&big);
            for &a in &lits {
                sink.add_clause(&[a, !y]);
            }
            Signal::Lit(y)
        }
    }
}

fn xor_signal(sink: &mut (impl ClauseSink + ?Sized), ins: impl Iterator<Item = Signal>) -> Signal {
    let mut parity = false;
    let mut lits: Vec<Lit> = Vec::new();
    for s in ins {
        match s {
            Signal::Const(b) => parity ^= b,
            Signal::Lit(l) => {
                // Normalise to positive literals, moving signs into the parity.
                parity ^= !l.is_positive();
                lits.push(l.var().positive());
            }
        }
    }
    lits.sort_unstable_by_key(|l| l.code());
    let mut reduced: Vec<Lit> = Vec::new();
    for l in lits {
        if reduced.last() == Some(&l) {
            reduced.pop();
        } else {
            reduced.push(l);
        }
    }
    let mut acc = match reduced.first() {
        None => return Signal::Const(parity),
        Some(&l) => l,
    };
    for &b in &reduced[1..] {
        let z = sink.new_var().positive();
        sink.add_clause(&[!acc, !b, !z]);
        sink.add_clause(&[acc, b, !z]);
        sink.add_clause(&[acc, !b, z]);
        sink.add_clause(&[!acc, b, z]);
        acc = z;
    }
    Signal::Lit(if parity { !acc } else { acc })
}

/// Encodes `net` with the given input and key signals, returning the signal
/// of every wire. Constants are propagated; gates with a single remaining
/// literal input add no clauses.
pub fn encode_circuit(
    net: &Netlist,
    sink: &mut (impl ClauseSink + ?Sized),
    inputs: &[Signal],
    keys: &[Signal],
) -> Result<Vec<Signal>> {
    if inputs.len() != net.num_inputs() {
        return Err(NetlistError::Width {
            expected: net.num_inputs(),
            got: inputs.len(),
        });
    }
    if keys.len() != net.num_keys() {
        return Err(NetlistError::Width {
            expected: net.num_keys(),
            got: keys.len(),
        });
    }
    let mut sig = vec![Signal::Const(false); net.num_wires()];
    for (i, s) in sig.iter_mut().enumerate() {
        match net.driver(super::WireId(i as u32)) {
            Driver::PrimaryInput(k) => *s = inputs[k],
            Driver::KeyInput(k) => *s = keys[k],
            Driver::Gate(_) => {}
        }
    }
    for g in net.gates() {
        let ins = g.inputs.iter().map(|w| sig[w.index()]);
        let s = match g.kind {
            GateKind::And => and_signal(sink, ins),
            GateKind::Nand => and_signal(sink, ins).negate(),
            GateKind::Or => and_signal(sink, ins.map(Signal::negate)).negate(),
            GateKind::Nor => and_signal(sink, ins.map(Signal::negate)),
            GateKind::Xor => xor_signal(sink, ins),
            GateKind::Xnor => xor_signal(sink, ins).negate(),
            GateKind::Buf => sig[g.inputs[0].index()],
            GateKind::Not => sig[g.inputs[0].index()].negate(),
        };
        sig[g.output.index()] = s;
    }
    Ok(sig)
}

/// Two copies of a locked circuit sharing primary inputs, with separate
/// keys and a constraint that some output differs.
#[derive(Debug, Clone)]
pub struct Miter {
    pub cnf: CnfFormula,
    pub x: Vec<Var>,
    pub k1: Vec<Var>,
    pub k2: Vec<Var>,
    pub y1: Vec<Signal>,
    pub y2: Vec<Signal>,
    /// `diff[i] <-> y1[i] != y2[i]`.
    pub diff: Vec<Signal>,
}

impl Miter {
    /// Adds a miter of `net` to `sink`, allocating fresh input and key variables.
    pub fn encode_into(net: &Netlist, sink: &mut (impl ClauseSink + ?Sized)) -> Result<MiterVars> {
        if net.num_keys() == 0 {
            return Err(NetlistError::Unsupported("a miter needs at least one key input".into()));
        }
        let mut fresh = |n: usize| (0..n).map(|_| sink.new_var()).collect::<Vec<Var>>();
        let x = fresh(net.num_inputs());
        let k1 = fresh(net.num_keys());
        let k2 = fresh(net.num_keys());
        let lits = |vs: &[Var]| vs.iter().map(|v| Signal::Lit(v.positive())).collect::<Vec<_>>();
        let s1 = encode_circuit(net, sink, &lits(&x), &lits(&k1))?;
        let s2 = encode_circuit(net, sink, &lits(&x), &lits(&k2))?;
        let y1: Vec<Signal> = net.outputs().iter().map(|w| s1[w.index()]).collect();
        let y2: Vec<Signal> = net.outputs().iter().map(|w| s2[w.index()]).collect();
        let diff: Vec<Signal> = y1
            .iter()
            .zip(&y2)
            .map(|(&a, &b)| xor_signal(sink, [a, b].into_iter()))
            .collect();
        let mut any: Vec<Lit> = Vec::new();
        let mut always = false;
        for d in &diff {
            match d {
                Signal::Const(true) => always = true,
                Signal::Const(false) => {}
                Signal::Lit(l) => any.push(*l),
            }
        }
        if !always {
            sink.add_clause(&any);
        }
        Ok(MiterVars { x, k1, k2, y1, y2, diff })
    }
}

/// Variable groups of a miter encoded into an external sink.
#[derive(Debug, Clone)]
pub struct MiterVars {
    pub x: Vec<Var>,
    pub k1: Vec<Var>,
    pub k2: Vec<Var>,
    pub y1: Vec<Signal>,
    pub y2: Vec<Signal>,
    pub diff: Vec<Signal>,
}

pub fn build_miter(locked: &Netlist) -> Result<Miter> {
    let mut cnf = CnfFormula::default();
    let v = Miter::encode_into(locked, &mut cnf)?;
    Ok(Miter {
        cnf,
        x: v.x,
        k1: v.k1,
        k2: v.k2,
        y1: v.y1,
        y2: v.y2,
        diff: v.diff,
    })
}
