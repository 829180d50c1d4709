//! Block synthesis and host integration.
//!
//! A synthesized block has primary inputs `x0 .. x{n-1}`, key inputs
//! `keyinput0 .. keyinput{2n-1}` (the first `n` feed `f`, the rest `g`), two
//! XOR layers, sum-of-products realisations of `f` and `g` built from
//! balanced 2-input trees, and the final gate [`G_GATE`].

use std::collections::HashMap;

use super::{Driver, GateKind, Netlist, NetlistBuilder, NetlistError, Result, WireId};
use crate::cover::Cover;
use crate::truthsets::{BlockType, BooleanFunction, LockBlock};

pub const KEY_PREFIX: &str = "keyinput";
/// Output wire of the block's final AND/OR gate.
pub const G_GATE: &str = "lock_G";

struct Synth {
    b: NetlistBuilder,
    counter: usize,
}

impl Synth {
    fn fresh(&mut self, side: &str) -> String {
        self.counter += 1;
        format!("lock_{side}_n{}", self.counter)
    }

    /// Balanced tree of `inner` gates with an optional different root kind.
    /// The root output is named `root_name` when given.
    fn tree(
        &mut self,
        side: &str,
        inner: GateKind,
        root: GateKind,
        mut wires: Vec<WireId>,
        root_name: Option<&str>,
    ) -> Result<WireId> {
        while wires.len() > 2 {
            let mut next = Vec::with_capacity(wires.len().div_ceil(2));
            for pair in wires.chunks(2) {
                if pair.len() == 2 {
                    let name = self.fresh(side);
                    next.push(self.b.gate(inner, pair, &name)?);
                } else {
                    next.push(pair[0]);
                }
            }
            wires = next;
        }
        let name = match root_name {
            Some(n) => n.to_string(),
            None if wires.len() == 1 && !root.is_inverting() => return Ok(wires[0]),
            None => self.fresh(side),
        };
        let kind = if wires.len() == 1 {
            if root.is_inverting() {
                GateKind::Not
            } else {
                GateKind::Buf
            }
        } else {
            root
        };
        self.b.gate(kind, &wires, &name)
    }

    fn cover(&mut self, side: &str, cover: &Cover, lits: &[WireId], root_name: &str) -> Result<WireId> {
        let mut negated: HashMap<u32, WireId> = HashMap::new();
        let mut literal = |s: &mut Synth, bit: u32, positive: bool| -> Result<WireId> {
            if positive {
                return Ok(lits[bit as usize]);
            }
            if let Some(&w) = negated.get(&bit) {
                return Ok(w);
            }
            let w = s.b.gate(GateKind::Not, &[lits[bit as usize]], &format!("lock_{side}_nl{bit}"))?;
            negated.insert(bit, w);
            Ok(w)
        };
        let inv = cover.inverted();
        let cubes = cover.cubes();
        if cubes.is_empty() || cubes.iter().any(|c| c.mask == 0) {
            // Constant function: XOR(l0, l0) = 0, XNOR(l0, l0) = 1.
            let one = !cubes.is_empty();
            let kind = if one != inv { GateKind::Xnor } else { GateKind::Xor };
            return self.b.gate(kind, &[lits[0], lits[0]], root_name);
        }
        let mut term_lits = Vec::with_capacity(cubes.len());
        for c in cubes {
            let ws = c
                .literals()
                .map(|(bit, pos)| literal(self, bit, pos))
                .collect::<Result<Vec<_>>>()?;
            term_lits.push(ws);
        }
        if term_lits.len() == 1 {
            let root = if inv { GateKind::Nand } else { GateKind::And };
            let ws = term_lits.pop().expect("one term");
            return self.tree(side, GateKind::And, root, ws, Some(root_name));
        }
        let mut terms = Vec::with_capacity(term_lits.len());
        for ws in term_lits {
            terms.push(self.tree(side, GateKind::And, GateKind::And, ws, None)?);
        }
        let root = if inv { GateKind::Nor } else { GateKind::Or };
        self.tree(side, GateKind::Or, root, terms, Some(root_name))
    }
}

/// Netlist of a block given covers of `f` and `g` (widths up to 31).
pub fn synthesize_covers(f: &Cover, g: &Cover, block_type: BlockType) -> Result<Netlist> {
    let n = f.width();
    if g.width() != n {
        return Err(NetlistError::Unsupported(format!("cover widths differ: {} vs {}", n, g.width())));
    }
    let mut s = Synth {
        b: NetlistBuilder::new(),
        counter: 0,
    };
    let xs: Vec<WireId> = (0..n).map(|i| s.b.input(&format!("x{i}"))).collect::<Result<_>>()?;
    let ks: Vec<WireId> = (0..2 * n)
        .map(|i| s.b.key_input(&format!("{KEY_PREFIX}{i}")))
        .collect::<Result<_>>()?;
    s.b.output(G_GATE);
    let mut lf = Vec::with_capacity(n as usize);
    let mut lg = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        lf.push(s.b.gate(GateKind::Xor, &[xs[i], ks[i]], &format!("lock_f_l{i}"))?);
    }
    for i in 0..n as usize {
        lg.push(s.b.gate(GateKind::Xor, &[xs[i], ks[n as usize + i]], &format!("lock_g_l{i}"))?);
    }
    let fw = s.cover("f", f, &lf, "lock_f")?;
    let gw = s.cover("g", g, &lg, "lock_g")?;
    let kind = match block_type {
        BlockType::Type0 => GateKind::And,
        BlockType::Type1 => GateKind::Or,
    };
    s.b.gate(kind, &[fw, gw], G_GATE)?;
    s.b.finish()
}

fn default_cover(func: &BooleanFunction) -> Cover {
    let t = func.true_set();
    if t.len() as u64 * 2 <= t.universe() {
        Cover::minterms(t)
    } else {
        Cover::minterms(&func.false_set()).complement()
    }
}

/// Uses the block's attached covers, or minterm covers of whichever of the
/// true and false sets is smaller.
pub fn synthesize_block(block: &LockBlock) -> Result<Netlist> {
    let f = block.f_cover().cloned().unwrap_or_else(|| default_cover(block.f()));
    let g = block.g_cover().cloned().unwrap_or_else(|| default_cover(block.g()));
    synthesize_covers(&f, &g, block.block_type())
}

/// Locks `target` of `host` with `block`: the original output is renamed
/// `<target>_unlocked` and `target = XOR(<target>_unlocked, G)`, or XNOR
/// when `correct_output` (the block's output under a right key) is 1.
///
/// Block input `x{i}` is tied to host primary input `i`; when the host has
/// fewer inputs the remainder become new primary inputs.
pub fn integrate(host: &Netlist, block: &Netlist, target: &str, correct_output: bool) -> Result<Netlist> {
    let tw = host
        .wire(target)
        .filter(|w| host.outputs().contains(w))
        .ok_or_else(|| NetlistError::UnknownWire(format!("{target} (not a primary output of the host)")))?;
    if !matches!(host.driver(tw), Driver::Gate(_)) {
        return Err(NetlistError::Unsupported(format!("output `{target}` is an input wire and cannot be locked")));
    }
    let unlocked = format!("{target}_unlocked");
    let host_name = |w: WireId| -> String {
        if w == tw {
            unlocked.clone()
        } else {
            host.wire_name(w).to_string()
        }
    };
    let mut b = NetlistBuilder::new();
    for &w in host.input_order() {
        match host.driver(w) {
            Driver::KeyInput(_) => b.key_input(host.wire_name(w))?,
            _ => b.input(host.wire_name(w))?,
        };
    }
    let mut rename: HashMap<WireId, String> = HashMap::new();
    for (i, &w) in block.primary_inputs().iter().enumerate() {
        let name = match host.primary_inputs().get(i) {
            Some(&hw) => host.wire_name(hw).to_string(),
            None => {
                let name = block.wire_name(w).to_string();
                if host.wire(&name).is_some() || name == unlocked {
                    return Err(NetlistError::Unsupported(format!("block input `{name}` collides with a host wire")));
                }
                b.input(&name)?;
                name
            }
        };
        rename.insert(w, name);
    }
    for &w in block.key_inputs() {
        let name = block.wire_name(w);
        if host.wire(name).is_some() {
            return Err(NetlistError::Unsupported(format!("block key `{name}` collides with a host wire")));
        }
        b.key_input(name)?;
    }
    for &w in host.outputs() {
        b.output(host.wire_name(w));
    }
    for g in host.gates() {
        let ins: Vec<String> = g.inputs.iter().map(|&i| host_name(i)).collect();
        let ins: Vec<&str> = ins.iter().map(String::as_str).collect();
        b.gate_named(g.kind, &ins, &host_name(g.output))?;
    }
    let bname = |w: WireId| rename.get(&w).cloned().unwrap_or_else(|| block.wire_name(w).to_string());
    for g in block.gates() {
        let out = bname(g.output);
        if host.wire(&out).is_some() || out == unlocked {
            return Err(NetlistError::Unsupported(format!("block wire `{out}` collides with a host wire")));
        }
        let ins: Vec<String> = g.inputs.iter().map(|&i| bname(i)).collect();
        let ins: Vec<&str> = ins.iter().map(String::as_str).collect();
        b.gate_named(g.kind, &ins, &out)?;
    }
    let gate_out = block
        .outputs()
        .first()
        .map(|&w| bname(w))
        .ok_or_else(|| NetlistError::Unsupported("block netlist has no output".into()))?;
    let join = if correct_output { GateKind::Xnor } else { GateKind::Xor };
    b.gate_named(join, &[&unlocked, &gate_out], target)?;
    b.finish()
}
