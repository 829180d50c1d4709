//! Conflict-driven clause learning over two watched literals.
//!
//! The engine follows the MiniSat layout: a trail with decision levels,
//! first-UIP conflict analysis with local minimisation, VSIDS ordering on a
//! binary heap, phase saving, Luby restarts and activity-based learnt-clause
//! reduction. Clauses may be added between `solve` calls; the solver always
//! returns to decision level zero before answering.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::types::{ClauseSink, Lit, Model, SatBackend, SolveResult, SolverStats, Var};

const VAL_FALSE: u8 = 0;
const VAL_TRUE: u8 = 1;
const VAL_UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Seeds the initial phases and random decisions. `None` is fully
    /// deterministic with negative initial phases.
    pub seed: Option<u64>,
    /// Maximum number of conflicts per `solve` call.
    pub conflict_limit: Option<u64>,
    pub random_decision_freq: f64,
    pub restart_base: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: None,
            conflict_limit: None,
            random_decision_freq: 0.02,
            restart_base: 100,
        }
    }
}

impl SolverConfig {
    pub fn seeded(seed: u64) -> Self {
        SolverConfig {
            seed: Some(seed),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

/// Indexed max-heap of variables keyed by activity.
#[derive(Debug, Clone, Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<usize>,
}

impl VarHeap {
    const ABSENT: usize = usize::MAX;

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, Self::ABSENT);
    }

    fn contains(&self, v: u32) -> bool {
        self.pos[v as usize] != Self::ABSENT
    }

    fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn increased(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v as usize], act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap.swap_remove(0);
        self.pos[top as usize] = Self::ABSENT;
        if !self.heap.is_empty() {
            self.pos[self.heap[0] as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if act[pv as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = pv;
            self.pos[pv as usize] = i;
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && act[self.heap[right] as usize] > act[self.heap[left] as usize] {
                right
            } else {
                left
            };
            let cv = self.heap[child];
            if act[cv as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = cv;
            self.pos[cv as usize] = i;
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = i;
    }
}

enum SearchOutcome {
    Sat,
    Unsat,
    Restart,
    Budget,
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

/// Incremental CDCL solver.
#[derive(Debug, Clone)]
pub struct Solver {
    config: SolverConfig,
    clauses: Vec<Clause>,
    learnts: Vec<u32>,
    num_original: usize,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    max_learnts: f64,
    rng: Option<ChaCha8Rng>,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Self::with_config(SolverConfig::default())
    }

    pub fn with_config(config: SolverConfig) -> Self {
        let rng = config.seed.map(ChaCha8Rng::seed_from_u64);
        Solver {
            config,
            clauses: Vec::new(),
            learnts: Vec::new(),
            num_original: 0,
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::default(),
            polarity: Vec::new(),
            seen: Vec::new(),
            ok: true,
            max_learnts: 2000.0,
            rng,
            stats: SolverStats::default(),
        }
    }

    /// Builds a solver holding every clause of `clauses` over `num_vars` variables.
    pub fn from_clauses(num_vars: u32, clauses: &[Vec<Lit>], config: SolverConfig) -> Self {
        let mut s = Self::with_config(config);
        s.reserve_vars(num_vars);
        for c in clauses {
            s.add_clause(c);
        }
        s
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn set_conflict_limit(&mut self, limit: Option<u64>) {
        self.config.conflict_limit = limit;
    }

    /// False once the clause set is known to be unsatisfiable outright.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn num_clauses(&self) -> usize {
        self.num_original
    }

    pub fn num_learnts(&self) -> usize {
        self.learnts.len()
    }

    /// Ensures variables `0..n` exist.
    pub fn reserve_vars(&mut self, n: u32) {
        while (self.assigns.len() as u32) < n {
            self.new_var();
        }
    }

    fn alloc_var(&mut self) -> Var {
        let v = self.assigns.len() as u32;
        self.assigns.push(VAL_UNDEF);
        self.level.push(0);
        self.reason.push(NO_REASON);
        let init_act = match self.rng.as_mut() {
            Some(rng) => rng.gen::<f64>() * 1e-5,
            None => 0.0,
        };
        self.activity.push(init_act);
        let phase = match self.rng.as_mut() {
            Some(rng) => rng.gen::<bool>(),
            None => false,
        };
        self.polarity.push(phase);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        Var(v)
    }

    #[inline]
    fn value(&self, lit: Lit) -> u8 {
        let a = self.assigns[lit.var().index()];
        if a == VAL_UNDEF {
            VAL_UNDEF
        } else {
            a ^ (!lit.is_positive()) as u8
        }
    }

    #[inline]
    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    #[inline]
    fn enqueue(&mut self, lit: Lit, reason: u32) {
        let v = lit.var().index();
        debug_assert_eq!(self.assigns[v], VAL_UNDEF);
        self.assigns[v] = lit.is_positive() as u8;
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize].lits;
        let (a, b) = (c[0], c[1]);
        self.watches[(!a).code()].push(Watcher { cref, blocker: b });
        self.watches[(!b).code()].push(Watcher { cref, blocker: a });
    }

    fn add_clause_inner(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        debug_assert_eq!(self.decision_level(), 0);
        for l in lits {
            self.reserve_vars(l.var().0 + 1);
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        let mut out = Vec::with_capacity(c.len());
        for (i, &l) in c.iter().enumerate() {
            if i + 1 < c.len() && c[i + 1] == !l {
                return true;
            }
            match self.value(l) {
                VAL_TRUE => return true,
                VAL_FALSE => {}
                _ => out.push(l),
            }
        }
        match out.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(out[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let cref = self.clauses.len() as u32;
                self.clauses.push(Clause {
                    lits: out,
                    learnt: false,
                    deleted: false,
                    activity: 0.0,
                });
                self.num_original += 1;
                self.attach(cref);
                true
            }
        }
    }

    /// Unit propagation; returns the conflicting clause if any.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == VAL_TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                if self.clauses[cref as usize].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref as usize].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref as usize].lits[0];
                let watcher = Watcher { cref, blocker: first };
                if first != w.blocker && self.value(first) == VAL_TRUE {
                    ws[j] = watcher;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref as usize].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let lk = self.clauses[cref as usize].lits[k];
                    if self.value(lk) != VAL_FALSE {
                        let lits = &mut self.clauses[cref as usize].lits;
                        lits.swap(1, k);
                        self.watches[(!lk).code()].push(watcher);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = watcher;
                j += 1;
                if self.value(first) == VAL_FALSE {
                    conflict = Some(cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis. Returns the learnt clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, usize) {
        let mut learnt: Vec<Lit> = vec![Lit::new(Var(0), true)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let dl = self.decision_level() as u32;
        loop {
            self.bump_clause(confl);
            let start = if p.is_some() { 1 } else { 0 };
            let n = self.clauses[confl as usize].lits.len();
            for k in start..n {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            confl = self.reason[lit.var().index()];
            self.seen[lit.var().index()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = !p.expect("conflict analysis visits at least one literal");

        // Drop literals implied by the rest of the clause.
        let to_clear: Vec<Lit> = learnt.clone();
        let mut keep = Vec::with_capacity(learnt.len());
        keep.push(learnt[0]);
        for &q in &learnt[1..] {
            let r = self.reason[q.var().index()];
            let redundant = r != NO_REASON
                && self.clauses[r as usize].lits[1..].iter().all(|l| {
                    let v = l.var().index();
                    self.seen[v] || self.level[v] == 0
                });
            if !redundant {
                keep.push(q);
            }
        }
        for l in to_clear {
            self.seen[l.var().index()] = false;
        }
        let mut learnt = keep;

        let bt = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()] as usize
        };
        (learnt, bt)
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level];
        for c in (lim..self.trail.len()).rev() {
            let lit = self.trail[c];
            let v = lit.var().index();
            self.assigns[v] = VAL_UNDEF;
            self.reason[v] = NO_REASON;
            self.polarity[v] = lit.is_positive();
            self.heap.insert(v as u32, &self.activity);
        }
        self.qhead = lim;
        self.trail.truncate(lim);
        self.trail_lim.truncate(level);
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        let mut next: Option<u32> = None;
        if let Some(rng) = self.rng.as_mut() {
            if !self.heap.heap.is_empty() && rng.gen::<f64>() < self.config.random_decision_freq {
                let idx = rng.gen_range(0..self.heap.heap.len());
                let v = self.heap.heap[idx];
                if self.assigns[v as usize] == VAL_UNDEF {
                    next = Some(v);
                }
            }
        }
        while next.is_none() {
            let v = self.heap.pop(&self.activity)?;
            if self.assigns[v as usize] == VAL_UNDEF {
                next = Some(v);
            }
        }
        let v = next?;
        Some(Lit::new(Var(v), self.polarity[v as usize]))
    }

    fn locked(&self, cref: u32) -> bool {
        let first = self.clauses[cref as usize].lits[0];
        self.reason[first.var().index()] == cref && self.value(first) == VAL_TRUE
    }

    fn reduce_db(&mut self) {
        let mut order = std::mem::take(&mut self.learnts);
        order.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .partial_cmp(&self.clauses[b as usize].activity)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let half = order.len() / 2;
        let mut kept = Vec::with_capacity(order.len());
        for (i, cref) in order.into_iter().enumerate() {
            let c = &self.clauses[cref as usize];
            if i < half && c.lits.len() > 2 && !self.locked(cref) {
                let c = &mut self.clauses[cref as usize];
                c.deleted = true;
                c.lits = Vec::new();
            } else {
                kept.push(cref);
            }
        }
        self.learnts = kept;
    }

    fn search(&mut self, nof_conflicts: u64, assumptions: &[Lit], call_conflicts: &mut u64) -> SearchOutcome {
        let mut conflicts_here = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                *call_conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SearchOutcome::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let cref = self.clauses.len() as u32;
                    let first = learnt[0];
                    self.clauses.push(Clause {
                        lits: learnt,
                        learnt: true,
                        deleted: false,
                        activity: 0.0,
                    });
                    self.learnts.push(cref);
                    self.stats.learnt_clauses += 1;
                    self.attach(cref);
                    self.bump_clause(cref);
                    self.enqueue(first, cref);
                }
                self.var_inc /= 0.95;
                self.cla_inc /= 0.999;
            } else {
                if let Some(limit) = self.config.conflict_limit {
                    if *call_conflicts >= limit {
                        return SearchOutcome::Budget;
                    }
                }
                if conflicts_here >= nof_conflicts {
                    return SearchOutcome::Restart;
                }
                if self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                let mut next = None;
                while self.decision_level() < assumptions.len() {
                    let a = assumptions[self.decision_level()];
                    match self.value(a) {
                        VAL_TRUE => self.trail_lim.push(self.trail.len()),
                        VAL_FALSE => return SearchOutcome::Unsat,
                        _ => {
                            next = Some(a);
                            break;
                        }
                    }
                }
                let lit = match next {
                    Some(l) => l,
                    None => {
                        self.stats.decisions += 1;
                        match self.pick_branch() {
                            Some(l) => l,
                            None => return SearchOutcome::Sat,
                        }
                    }
                };
                self.trail_lim.push(self.trail.len());
                self.enqueue(lit, NO_REASON);
            }
        }
    }

    /// Current value of a variable fixed at decision level zero, if any.
    pub fn fixed_value(&self, var: Var) -> Option<bool> {
        match self.assigns.get(var.index()) {
            Some(&VAL_TRUE) => Some(true),
            Some(&VAL_FALSE) => Some(false),
            _ => None,
        }
    }
}

impl ClauseSink for Solver {
    fn new_var(&mut self) -> Var {
        self.alloc_var()
    }

    fn add_clause(&mut self, lits: &[Lit]) {
        self.add_clause_inner(lits);
    }
}

impl SatBackend for Solver {
    fn num_vars(&self) -> u32 {
        self.assigns.len() as u32
    }

    fn solve_with(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.stats.solves += 1;
        if !self.ok {
            return SolveResult::Unsat;
        }
        for a in assumptions {
            self.reserve_vars(a.var().0 + 1);
        }
        self.max_learnts = self.max_learnts.max(self.num_original as f64 / 3.0);
        let mut call_conflicts = 0u64;
        let mut restarts = 0u64;
        loop {
            let budget = (luby(2.0, restarts) * self.config.restart_base as f64) as u64;
            match self.search(budget, assumptions, &mut call_conflicts) {
                SearchOutcome::Sat => {
                    let model = self.assigns.iter().map(|&a| a == VAL_TRUE).collect();
                    self.cancel_until(0);
                    return SolveResult::Sat(Model(model));
                }
                SearchOutcome::Unsat => {
                    self.cancel_until(0);
                    return SolveResult::Unsat;
                }
                SearchOutcome::Budget => {
                    self.cancel_until(0);
                    return SolveResult::Timeout;
                }
                SearchOutcome::Restart => {
                    restarts += 1;
                    self.stats.restarts += 1;
                    self.cancel_until(0);
                }
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

    fn lit(x: i64) -> Lit {
        Lit::from_dimacs(x).unwrap()
    }

    fn clauses(spec: &[&[i64]]) -> Vec<Vec<Lit>> {
        spec.iter().map(|c| c.iter().map(|&x| lit(x)).collect()).collect()
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<f64> = (0..15).map(|i| luby(2.0, i)).collect();
        assert_eq!(seq, vec![1., 1., 2., 1., 1., 2., 4., 1., 1., 2., 1., 1., 2., 4., 8.]);
    }

    #[test]
    fn trivial_unsat() {
        let cs = clauses(&[&[1, 2], &[-1], &[-2]]);
        let mut s = Solver::from_clauses(2, &cs, SolverConfig::default());
        assert!(s.solve().is_unsat());
    }

    #[test]
    fn trivial_sat_model_checks() {
        let cs = clauses(&[&[1, 2]]);
        let mut s = Solver::from_clauses(2, &cs, SolverConfig::default());
        let r = s.solve();
        assert!(r.model().unwrap().satisfies(&cs));
    }

    #[test]
    fn incremental_unit_makes_unsat() {
        let mut s = Solver::new();
        s.add_clause(&[lit(1)]);
        assert!(s.solve().is_sat());
        s.add_clause(&[lit(-1)]);
        assert!(s.solve().is_unsat());
        assert!(!s.is_ok());
    }

    #[test]
    fn assumptions_do_not_stick() {
        let cs = clauses(&[&[1, 2], &[-1, 3]]);
        let mut s = Solver::from_clauses(3, &cs, SolverConfig::default());
        assert!(s.solve_with(&[lit(-2), lit(-3)]).is_unsat());
        assert!(s.is_ok());
        let r = s.solve_with(&[lit(-2)]);
        let m = r.model().unwrap();
        assert!(m.satisfies(&cs));
        assert!(!m.lit(lit(2)));
        assert!(s.solve().is_sat());
    }

    #[test]
    fn tautologies_and_duplicates_are_harmless() {
        let mut s = Solver::new();
        s.add_clause(&[lit(1), lit(-1)]);
        s.add_clause(&[lit(2), lit(2), lit(3)]);
        s.add_clause(&[lit(2), lit(2), lit(3)]);
        let r = s.solve();
        assert!(r.is_sat());
    }

    #[test]
    fn conflict_budget_yields_timeout() {
        // PHP(7,6) needs far more than one conflict.
        let mut s = Solver::with_config(SolverConfig {
            conflict_limit: Some(1),
            ..Default::default()
        });
        let p = |i: i64, j: i64| i * 6 + j + 1;
        for i in 0..7 {
            let c: Vec<Lit> = (0..6).map(|j| lit(p(i, j))).collect();
            s.add_clause(&c);
        }
        for j in 0..6 {
            for a in 0..7 {
                for b in a + 1..7 {
                    s.add_clause(&[lit(-p(a, j)), lit(-p(b, j))]);
                }
            }
        }
        assert_eq!(s.solve(), SolveResult::Timeout);
        s.set_conflict_limit(None);
        assert!(s.solve().is_unsat());
    }
}
