//! Oracle-guided SAT attack.
//!
//! A miter of two keyed copies finds a distinguishing input (DIP); the oracle
//! answers it; both copies are then constrained to reproduce that answer. A
//! separate key solver accumulates the same input/output constraints on a
//! single key, so a consistent key can be read off at any point, which is
//! how approximate keys are taken after a fixed iteration budget.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corruption::netlist_corruptibility;
use super::{bitstr, AttackError, Result};
use crate::netlist::{encode_circuit, Miter, MiterVars, Netlist, Oracle, Signal};
use crate::satcore::{ClauseSink, SatBackend, SolveResult, SolverChoice, SolverStats, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Stop after this many DIPs without a verdict.
    pub max_iterations: Option<u64>,
    /// Conflict budget for each solver call.
    pub conflict_limit: Option<u64>,
    /// Seeds the solvers' random phase and decision choices.
    pub seed: Option<u64>,
    pub solver: SolverChoice,
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            max_iterations: None,
            conflict_limit: None,
            seed: None,
            solver: SolverChoice::Embedded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackStatus {
    KeyRecovered,
    /// A solver call ran out of its conflict budget.
    Timeout,
    /// `max_iterations` DIPs were used without the miter becoming UNSAT.
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DipRecord {
    pub iteration: u64,
    #[serde(with = "bitstr")]
    pub x: Vec<bool>,
    #[serde(with = "bitstr")]
    pub y: Vec<bool>,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackTrace {
    /// λ, the number of DIPs.
    pub iterations: u64,
    pub status: AttackStatus,
    /// Key bits in key-input order.
    #[serde(with = "bitstr::opt")]
    pub recovered_key: Option<Vec<bool>>,
    pub dips: Vec<DipRecord>,
    pub wall_time_ms: f64,
    pub solver_stats: SolverStats,
    pub oracle_queries: u64,
    pub num_inputs: usize,
    pub num_keys: usize,
}

impl AttackTrace {
    pub fn to_csv(&self) -> std::result::Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["iteration", "x", "y", "conflicts", "decisions", "propagations", "micros"])?;
        for d in &self.dips {
            w.write_record([
                d.iteration.to_string(),
                super::bits_to_string(&d.x),
                super::bits_to_string(&d.y),
                d.conflicts.to_string(),
                d.decisions.to_string(),
                d.propagations.to_string(),
                d.micros.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Dip,
    /// The miter is UNSAT: every remaining key agrees with the oracle.
    Done,
    Timeout,
}

/// Adds `C(x, K, y)`: the circuit under key variables `key` maps `x` to `y`.
fn constrain_io(net: &Netlist, sink: &mut (impl ClauseSink + ?Sized), x: &[bool], y: &[bool], key: &[Var]) -> Result<()> {
    let xs: Vec<Signal> = x.iter().map(|&b| Signal::Const(b)).collect();
    let ks: Vec<Signal> = key.iter().map(|v| Signal::Lit(v.positive())).collect();
    let sig = encode_circuit(net, sink, &xs, &ks)?;
    for (w, &want) in net.outputs().iter().zip(y) {
        sig[w.index()].assert_value(sink, want);
    }
    Ok(())
}

/// Incremental attack state.
pub struct AttackSession<'a> {
    locked: &'a Netlist,
    oracle: &'a Oracle,
    miter: Box<dyn SatBackend>,
    vars: MiterVars,
    key_solver: Box<dyn SatBackend>,
    key_vars: Vec<Var>,
    dips: Vec<DipRecord>,
    done: bool,
    timed_out: bool,
    started: Instant,
}

impl<'a> AttackSession<'a> {
    pub fn new(locked: &'a Netlist, oracle: &'a Oracle, config: &AttackConfig) -> Result<Self> {
        if locked.num_keys() == 0 {
            return Err(AttackError::Precondition("locked netlist has no key inputs".into()));
        }
        if oracle.num_inputs() != locked.num_inputs() {
            return Err(AttackError::Precondition(format!(
                "oracle takes {} inputs, locked netlist has {}",
                oracle.num_inputs(),
                locked.num_inputs()
            )));
        }
        if oracle.num_outputs() != locked.outputs().len() {
            return Err(AttackError::Precondition(format!(
                "oracle has {} outputs, locked netlist has {}",
                oracle.num_outputs(),
                locked.outputs().len()
            )));
        }
        let mut miter = config.solver.instantiate(config.seed, config.conflict_limit)?;
        let vars = Miter::encode_into(locked, &mut *miter)?;
        let key_seed = config.seed.map(|s| s.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1));
        let mut key_solver = config.solver.instantiate(key_seed, config.conflict_limit)?;
        let key_vars: Vec<Var> = (0..locked.num_keys()).map(|_| key_solver.new_var()).collect();
        Ok(AttackSession {
            locked,
            oracle,
            miter,
            vars,
            key_solver,
            key_vars,
            dips: Vec::new(),
            done: false,
            timed_out: false,
            started: Instant::now(),
        })
    }

    pub fn iterations(&self) -> u64 {
        self.dips.len() as u64
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn dips(&self) -> &[DipRecord] {
        &self.dips
    }

    /// Finds one DIP, queries the oracle and records the constraint.
    pub fn step(&mut self) -> Result<StepOutcome> {
        if self.done {
            return Ok(StepOutcome::Done);
        }
        let before = self.miter.stats();
        let t0 = Instant::now();
        let model = match self.miter.solve() {
            SolveResult::Unsat => {
                self.done = true;
                return Ok(StepOutcome::Done);
            }
            SolveResult::Timeout => {
                self.timed_out = true;
                return Ok(StepOutcome::Timeout);
            }
            SolveResult::Sat(m) => m,
        };
        let x: Vec<bool> = self.vars.x.iter().map(|&v| model.value(v)).collect();
        let y = self.oracle.query(&x)?;
        constrain_io(self.locked, &mut *self.miter, &x, &y, &self.vars.k1)?;
        constrain_io(self.locked, &mut *self.miter, &x, &y, &self.vars.k2)?;
        constrain_io(self.locked, &mut *self.key_solver, &x, &y, &self.key_vars)?;
        let st = self.miter.stats().since(&before);
        self.dips.push(DipRecord {
            iteration: self.dips.len() as u64 + 1,
            x,
            y,
            conflicts: st.conflicts,
            decisions: st.decisions,
            propagations: st.propagations,
            micros: t0.elapsed().as_micros() as u64,
        });
        Ok(StepOutcome::Dip)
    }

    /// Runs until the miter is UNSAT, a timeout, or `limit` total DIPs.
    pub fn run(&mut self, limit: Option<u64>) -> Result<StepOutcome> {
        loop {
            if limit.is_some_and(|l| self.iterations() >= l) && !self.done {
                return Ok(StepOutcome::Dip);
            }
            match self.step()? {
                StepOutcome::Dip => {}
                other => return Ok(other),
            }
        }
    }

    /// Some key consistent with every DIP so far; `None` on a key-solver
    /// timeout.
    pub fn current_key(&mut self) -> Result<Option<Vec<bool>>> {
        match self.key_solver.solve() {
            SolveResult::Sat(m) => {
                let key: Vec<bool> = self.key_vars.iter().map(|&v| m.value(v)).collect();
                self.check_consistent(&key)?;
                Ok(Some(key))
            }
            SolveResult::Timeout => Ok(None),
            SolveResult::Unsat => Err(AttackError::Precondition(
                "no key reproduces the oracle's answers; the oracle does not match the locked netlist".into(),
            )),
        }
    }

    fn check_consistent(&self, key: &[bool]) -> Result<()> {
        for d in &self.dips {
            if self.locked.eval(&d.x, key)? != d.y {
                return Err(AttackError::Inconsistent(d.iteration));
            }
        }
        Ok(())
    }

    pub fn into_trace(mut self) -> Result<AttackTrace> {
        let (status, recovered_key) = if self.done {
            match self.current_key()? {
                Some(k) => (AttackStatus::KeyRecovered, Some(k)),
                None => (AttackStatus::Timeout, None),
            }
        } else if self.timed_out {
            (AttackStatus::Timeout, None)
        } else {
            (AttackStatus::IterationCap, None)
        };
        let mut stats = self.miter.stats();
        let ks = self.key_solver.stats();
        stats.solves += ks.solves;
        stats.decisions += ks.decisions;
        stats.propagations += ks.propagations;
        stats.conflicts += ks.conflicts;
        stats.restarts += ks.restarts;
        stats.learnt_clauses += ks.learnt_clauses;
        Ok(AttackTrace {
            iterations: self.dips.len() as u64,
            status,
            recovered_key,
            dips: self.dips,
            wall_time_ms: self.started.elapsed().as_secs_f64() * 1e3,
            solver_stats: stats,
            oracle_queries: self.oracle.queries(),
            num_inputs: self.locked.num_inputs(),
            num_keys: self.locked.num_keys(),
        })
    }
}

/// The full attack: DIPs until the miter is UNSAT, then a key consistent
/// with every recorded query.
pub fn sat_attack(locked: &Netlist, oracle: &Oracle, config: &AttackConfig) -> Result<AttackTrace> {
    let mut s = AttackSession::new(locked, oracle, config)?;
    s.run(config.max_iterations)?;
    s.into_trace()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxKey {
    #[serde(with = "bitstr")]
    pub key: Vec<bool>,
    pub iterations: u64,
    /// The attack finished within the budget, so the key is exact.
    pub exact: bool,
}

/// Runs at most `budget` DIP iterations and returns any key satisfying the
/// constraints gathered so far.
pub fn approx_key_after(locked: &Netlist, oracle: &Oracle, budget: u64, config: &AttackConfig) -> Result<ApproxKey> {
    let mut s = AttackSession::new(locked, oracle, config)?;
    let outcome = s.run(Some(budget))?;
    if outcome == StepOutcome::Timeout {
        return Err(AttackError::Precondition("solver budget exhausted before the iteration budget".into()));
    }
    // A budget that lands exactly on the last DIP still counts as exact once
    // the miter is shown UNSAT.
    if !s.is_done() && s.iterations() >= budget {
        s.done = matches!(s.miter.solve(), SolveResult::Unsat);
    }
    let key = s
        .current_key()?
        .ok_or_else(|| AttackError::Precondition("key solver ran out of budget".into()))?;
    Ok(ApproxKey {
        key,
        iterations: s.iterations(),
        exact: s.is_done(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub seed: u64,
    pub iteration: u64,
    pub corruptibility: u64,
    pub exact: bool,
}

/// Approximate-key corruptibility every `step` iterations up to
/// `max_iters`, one series per seed. A series ends early once the attack
/// completes.
pub fn corruptibility_profile(
    locked: &Netlist,
    oracle: &Oracle,
    step: u64,
    max_iters: u64,
    seeds: &[u64],
    config: &AttackConfig,
) -> Result<Vec<ProfilePoint>> {
    if step == 0 {
        return Err(AttackError::Precondition("profile step must be at least 1".into()));
    }
    let series: Vec<Result<Vec<ProfilePoint>>> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = AttackConfig {
                seed: Some(seed),
                ..config.clone()
            };
            let mut s = AttackSession::new(locked, oracle, &cfg)?;
            let mut points = Vec::new();
            let mut checkpoint = step;
            while checkpoint <= max_iters.max(step) {
                if s.run(Some(checkpoint))? == StepOutcome::Timeout {
                    break;
                }
                if !s.is_done() && s.iterations() >= checkpoint {
                    s.done = matches!(s.miter.solve(), SolveResult::Unsat);
                }
                let key = match s.current_key()? {
                    Some(k) => k,
                    None => break,
                };
                points.push(ProfilePoint {
                    seed,
                    iteration: s.iterations(),
                    corruptibility: netlist_corruptibility(locked, &key, oracle)?,
                    exact: s.is_done(),
                });
                if s.is_done() || checkpoint >= max_iters {
                    break;
                }
                checkpoint += step;
            }
            Ok(points)
        })
        .collect();
    let mut out = Vec::new();
    for s in series {
        out.extend(s?);
    }
    Ok(out)
}

pub fn profile_to_csv(points: &[ProfilePoint]) -> std::result::Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points {
        w.serialize(p)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
