//! DIMACS CNF text and an external-solver backend that speaks it.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::Command;

use thiserror::Error;

use super::types::{ClauseSink, Lit, Model, SatBackend, SolveResult, SolverStats, Var};

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("external solver `{cmd}`: {msg}")]
    External { cmd: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Renders `p cnf V C` followed by zero-terminated clauses.
pub fn write_dimacs(num_vars: u32, clauses: &[Vec<Lit>]) -> String {
    let mut out = String::with_capacity(clauses.len() * 12 + 32);
    let _ = writeln!(out, "p cnf {} {}", num_vars, clauses.len());
    for c in clauses {
        for l in c {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF. Comment lines (`c ...`) and a trailing `%` are ignored.
pub fn parse_dimacs(text: &str) -> Result<(u32, Vec<Vec<Lit>>), DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if let Some(rest) = line.strip_prefix("p") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(DimacsError::Parse {
                    line: line_no,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let parse = |s: &str| {
                s.parse::<u64>().map_err(|_| DimacsError::Parse {
                    line: line_no,
                    msg: format!("bad number `{s}` in header"),
                })
            };
            header = Some((parse(parts[1])? as u32, parse(parts[2])? as usize));
            continue;
        }
        let (num_vars, _) = header.ok_or_else(|| DimacsError::Parse {
            line: line_no,
            msg: "clause before header".into(),
        })?;
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| DimacsError::Parse {
                line: line_no,
                msg: format!("bad literal `{tok}`"),
            })?;
            match Lit::from_dimacs(v) {
                None => clauses.push(std::mem::take(&mut current)),
                Some(l) => {
                    if l.var().0 >= num_vars {
                        return Err(DimacsError::Parse {
                            line: line_no,
                            msg: format!("variable {} exceeds declared {}", v.abs(), num_vars),
                        });
                    }
                    current.push(l)
                }
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (num_vars, _) = header.ok_or(DimacsError::Parse {
        line: 0,
        msg: "missing `p cnf` header".into(),
    })?;
    Ok((num_vars, clauses))
}

/// Renders a verdict in the competition output format (`s ...` / `v ... 0`).
pub fn format_answer(result: &SolveResult) -> String {
    match result {
        SolveResult::Sat(model) => {
            let mut out = String::from("s SATISFIABLE\nv");
            for (i, &b) in model.0.iter().enumerate() {
                let v = i as i64 + 1;
                let _ = write!(out, " {}", if b { v } else { -v });
            }
            out.push_str(" 0\n");
            out
        }
        SolveResult::Unsat => "s UNSATISFIABLE\n".into(),
        SolveResult::Timeout => "s UNKNOWN\n".into(),
    }
}

/// Parses competition-format solver output into a verdict over `num_vars` variables.
pub fn parse_answer(text: &str, num_vars: u32) -> Result<SolveResult, String> {
    let mut status = None;
    let mut model = vec![false; num_vars as usize];
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(vs) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for tok in vs.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| format!("bad model literal `{tok}`"))?;
                if let Some(l) = Lit::from_dimacs(v) {
                    if let Some(slot) = model.get_mut(l.var().index()) {
                        *slot = l.is_positive();
                    }
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(SolveResult::Sat(Model(model))),
        Some("UNSATISFIABLE") => Ok(SolveResult::Unsat),
        Some("UNKNOWN") => Ok(SolveResult::Timeout),
        Some(other) => Err(format!("unrecognised status `{other}`")),
        None => Err("no `s` line in solver output".into()),
    }
}

/// Runs an external solver binary on an exported DIMACS file for every solve.
///
/// The command receives the CNF path as its final argument. Assumptions are
/// exported as unit clauses.
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    program: String,
    args: Vec<String>,
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    stats: SolverStats,
    last_error: Option<String>,
}

impl ExternalSolver {
    /// `command` is split on whitespace: program followed by fixed arguments.
    pub fn new(command: &str) -> Result<Self, DimacsError> {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next().ok_or_else(|| DimacsError::External {
            cmd: command.into(),
            msg: "empty command".into(),
        })?;
        Ok(ExternalSolver {
            program,
            args: parts.collect(),
            num_vars: 0,
            clauses: Vec::new(),
            stats: SolverStats::default(),
            last_error: None,
        })
    }

    pub fn last_error(&self) -> Option<&str> {
        self.last_error.as_deref()
    }

    fn run(&self, assumptions: &[Lit]) -> Result<SolveResult, DimacsError> {
        let mut clauses = self.clauses.clone();
        clauses.extend(assumptions.iter().map(|&a| vec![a]));
        let text = write_dimacs(self.num_vars, &clauses);
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        file.write_all(text.as_bytes())?;
        file.flush()?;
        let output = Command::new(&self.program)
            .args(&self.args)
            .arg(file.path())
            .output()
            .map_err(|e| DimacsError::External {
                cmd: self.program.clone(),
                msg: e.to_string(),
            })?;
        let stdout = String::from_utf8_lossy(&output.stdout);
        parse_answer(&stdout, self.num_vars).map_err(|msg| DimacsError::External {
            cmd: self.program.clone(),
            msg,
        })
    }
}

impl ClauseSink for ExternalSolver {
    fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars - 1)
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        for l in lits {
            self.num_vars = self.num_vars.max(l.var().0 + 1);
        }
        self.clauses.push(lits.to_vec());
    }
}

impl SatBackend for ExternalSolver {
    fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Failures to run the program surface as `Timeout`, with the reason kept
    /// in [`ExternalSolver::last_error`]; they never produce a verdict.
    fn solve_with(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.stats.solves += 1;
        match self.run(assumptions) {
            Ok(r) => {
                self.last_error = None;
                r
            }
            Err(e) => {
                self.last_error = Some(e.to_string());
                SolveResult::Timeout
            }
        }
    }

    fn stats(&self) -> SolverStats {
        self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_text() {
        let text = "c demo\np cnf 3 2\n1 -2 0\n2 3 -1 0\n";
        let (n, cs) = parse_dimacs(text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(write_dimacs(n, &cs), "p cnf 3 2\n1 -2 0\n2 3 -1 0\n");
    }

    #[test]
    fn clause_may_span_lines() {
        let (_, cs) = parse_dimacs("p cnf 2 1\n1\n-2 0\n").unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 2);
    }

    #[test]
    fn rejects_out_of_range_variable() {
        let err = parse_dimacs("p cnf 1 1\n2 0\n").unwrap_err();
        assert!(matches!(err, DimacsError::Parse { line: 2, .. }));
    }

    #[test]
    fn answer_format_roundtrip() {
        let r = SolveResult::Sat(Model(vec![true, false, true]));
        assert_eq!(parse_answer(&format_answer(&r), 3).unwrap(), r);
        assert_eq!(parse_answer("s UNSATISFIABLE\n", 3).unwrap(), SolveResult::Unsat);
        assert!(parse_answer("garbage", 1).is_err());
    }
}
