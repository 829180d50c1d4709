//! ISCAS bench text.
//!
//! ```text
//! INPUT(a)
//! INPUT(keyinput0)
//! OUTPUT(y)
//! y = XOR(a, keyinput0)
//! ```
//!
//! Inputs whose names start with `keyinput` are key inputs. `#` starts a
//! comment.

use std::fmt::Write as _;

use super::{Driver, GateKind, Netlist, NetlistBuilder, NetlistError, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Parse { line, msg: msg.into() }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_.[]$".contains(c))
}

/// Splits `HEAD(args)` into head and the argument text.
fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    Some((s[..open].trim(), inner))
}

pub fn parse_bench(text: &str) -> Result<Netlist> {
    let mut b = NetlistBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        b.at_line(line_no);
        if let Some((lhs, rhs)) = line.split_once('=') {
            let out = lhs.trim();
            if !valid_name(out) {
                return Err(parse_err(line_no, format!("bad wire name `{out}`")));
            }
            let (kind_name, args) =
                call(rhs.trim()).ok_or_else(|| parse_err(line_no, "expected `out = KIND(in, ...)`"))?;
            let kind =
                GateKind::from_name(kind_name).ok_or_else(|| parse_err(line_no, format!("unknown gate kind `{kind_name}`")))?;
            let ins: Vec<&str> = args.split(',').map(str::trim).collect();
            if let Some(bad) = ins.iter().find(|s| !valid_name(s)) {
                return Err(parse_err(line_no, format!("bad input name `{bad}`")));
            }
            b.gate_named(kind, &ins, out)?;
            continue;
        }
        let (head, arg) = call(line).ok_or_else(|| parse_err(line_no, format!("unrecognised line `{line}`")))?;
        let arg = arg.trim();
        if !valid_name(arg) {
            return Err(parse_err(line_no, format!("bad wire name `{arg}`")));
        }
        match head.to_ascii_uppercase().as_str() {
            "INPUT" if arg.starts_with(super::KEY_PREFIX) => {
                b.key_input(arg)?;
            }
            "INPUT" => {
                b.input(arg)?;
            }
            "OUTPUT" => {
                b.output(arg);
            }
            _ => return Err(parse_err(line_no, format!("unknown declaration `{head}`"))),
        }
    }
    b.at_line(0);
    b.finish()
}

/// Inputs in declaration order, then outputs, then gates in topological order.
pub fn emit_bench(net: &Netlist) -> String {
    let mut out = String::new();
    for &w in net.input_order() {
        let _ = writeln!(out, "INPUT({})", net.wire_name(w));
    }
    for &w in net.outputs() {
        let _ = writeln!(out, "OUTPUT({})", net.wire_name(w));
    }
    out.push('\n');
    for g in net.gates() {
        let ins: Vec<&str> = g.inputs.iter().map(|&i| net.wire_name(i)).collect();
        let _ = writeln!(out, "{} = {}({})", net.wire_name(g.output), g.kind, ins.join(", "));
    }
    out
}

impl Netlist {
    /// Whether the wire is an input named like a key.
    pub fn is_key_wire(&self, name: &str) -> bool {
        self.wire(name)
            .map(|w| matches!(self.driver(w), Driver::KeyInput(_)))
            .unwrap_or(false)
    }
}
