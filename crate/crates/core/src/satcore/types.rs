use std::fmt;
use std::ops::Not;

/// A propositional variable, numbered from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    #[inline]
    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }

    /// One-based DIMACS number.
    pub fn to_dimacs(self) -> i64 {
        self.0 as i64 + 1
    }
}

/// A literal: variable plus polarity, packed as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    /// Literal with the given polarity flipped when `flip` is set.
    #[inline]
    pub fn xor(self, flip: bool) -> Lit {
        Lit(self.0 ^ flip as u32)
    }

    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 {
            return None;
        }
        let var = Var((value.unsigned_abs() - 1) as u32);
        Some(Lit::new(var, value > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().to_dimacs();
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Value of this literal under a total assignment indexed by variable.
    #[inline]
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var().index()] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Anything clauses can be written into: an in-memory formula or a live solver.
pub trait ClauseSink {
    fn new_var(&mut self) -> Var;
    fn add_clause(&mut self, lits: &[Lit]);
}

/// Search statistics, cumulative over the lifetime of a solver.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SolverStats {
    pub solves: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learnt_clauses: u64,
}

impl SolverStats {
    /// Counter-wise difference `self - earlier`.
    pub fn since(&self, earlier: &SolverStats) -> SolverStats {
        SolverStats {
            solves: self.solves - earlier.solves,
            decisions: self.decisions - earlier.decisions,
            propagations: self.propagations - earlier.propagations,
            conflicts: self.conflicts - earlier.conflicts,
            restarts: self.restarts - earlier.restarts,
            learnt_clauses: self.learnt_clauses.saturating_sub(earlier.learnt_clauses),
        }
    }
}

/// Total assignment returned with a SAT verdict, indexed by variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model(pub Vec<bool>);

impl Model {
    pub fn value(&self, var: Var) -> bool {
        self.0[var.index()]
    }

    pub fn lit(&self, lit: Lit) -> bool {
        lit.eval(&self.0)
    }

    pub fn satisfies(&self, clauses: &[Vec<Lit>]) -> bool {
        clauses.iter().all(|c| c.iter().any(|&l| self.lit(l)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
    /// The conflict budget ran out before a verdict was reached.
    Timeout,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveResult::Unsat)
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolveResult::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// A complete decision procedure over a growing clause set.
pub trait SatBackend: ClauseSink {
    fn num_vars(&self) -> u32;
    fn solve_with(&mut self, assumptions: &[Lit]) -> SolveResult;
    fn stats(&self) -> SolverStats;

    fn solve(&mut self) -> SolveResult {
        self.solve_with(&[])
    }
}
