//! Generalized Anti-SAT logic locking.
//!
//! Construct two-function locking blocks `y = f(X ^ K_f) op g(X ^ K_g)` from
//! truth-set constraints and K-map recipes, check their properties
//! exhaustively, compile them to gate-level netlists and CNF, and attack them
//! with an oracle-guided SAT loop, approximate-key extraction, corruptibility
//! census and signal-probability-skew analysis.
//!
//! Module map:
//!
//! - [`truthsets`]: bit vectors, truth sets, distance structures, the two
//!   block constraints, right-key offsets and wrong-key sets.
//! - [`cover`]: sum-of-products covers used to realise block functions.
//! - [`blockgen`]: K-map builders (non-complementary, complementary, Anti-SAT,
//!   consecutive-cell) and closed-form predictors.
//! - [`netlist`]: gate-level IR, bench I/O, simulation, Tseitin encoding and
//!   miters.
//! - [`satcore`]: the embedded CDCL solver and DIMACS interchange.
//! - [`attacks`]: SAT attack, approximate keys, corruptibility, SPS/ADS
//!   removal analysis, CAS-Unlock probe and bypass cost.
//! - [`cli`]: the experiment harness behind the `ganti` binary.

pub mod attacks;
pub mod blockgen;
pub mod cli;
pub mod cover;
pub mod fixtures;
pub mod netlist;
pub mod satcore;
pub mod truthsets;

pub use blockgen::{CompSpec, NonCompSpec, RightKeyFamily};
pub use truthsets::{BitVector, BlockType, BooleanFunction, Key, LockBlock, TruthSet};
