//! K-map construction of locking blocks.
//!
//! The `n` block inputs are laid out as a `2^(n-t) x 2^t` K-map. The top `t`
//! literals `l_{n-1} .. l_{n-t}` label the column and the low `n-t` literals
//! label the row, so `col(L) = L >> (n-t)` and `row(L) = L & (2^(n-t) - 1)`.
//!
//! Non-complementary blocks put one whole column in `F^T`; `G^T` takes the
//! other columns except the one differing from it in literal `q`, plus one
//! common cell of the `f` column. Complementary blocks split a dividing
//! column between the two functions. Each builder checks its result against
//! the exhaustive checkers in [`crate::truthsets`] before returning it.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{Cover, CoverError, Cube, MAX_COVER_WIDTH};
use crate::truthsets::{
    check_constraint1, right_key_offsets, BlockType, BooleanFunction, Key, LockBlock, TruthSet, TruthSetError, MAX_WIDTH,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("block violates the first constraint ({0})")]
    Constraint1(String),
    #[error("block has no right key")]
    NoRightKey,
    #[error("right-key offsets {got:?} differ from the recipe's {want:?}")]
    OffsetMismatch { want: Vec<u32>, got: Vec<u32> },
    #[error(transparent)]
    TruthSet(#[from] TruthSetError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

pub type Result<T> = std::result::Result<T, BuildError>;

fn param(msg: impl Into<String>) -> BuildError {
    BuildError::Param(msg.into())
}

fn fits(value: u32, bits: u32) -> bool {
    bits >= 32 || value >> bits == 0
}

/// Which recipe produced a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Noncomp,
    Comp,
    Antisat,
}

impl std::str::FromStr for BlockKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "noncomp" => Ok(BlockKind::Noncomp),
            "comp" => Ok(BlockKind::Comp),
            "antisat" => Ok(BlockKind::Antisat),
            other => Err(format!("unknown block kind `{other}` (noncomp, comp, antisat)")),
        }
    }
}

/// Non-complementary recipe parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonCompSpec {
    pub n: u32,
    pub t: u32,
    /// `t`-bit label of the column forming `F^T`.
    pub f_column: u32,
    /// `(n-t)`-bit row of the common cell inside the `f` column.
    pub common_row: u32,
    /// Literal index in `n-t ..= n-1`.
    pub q: u32,
    /// Columns put in `G^T`; `None` means every column except the `f`
    /// column and its bit-`q` partner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub included_columns: Option<BTreeSet<u32>>,
    #[serde(default = "default_type")]
    pub block_type: BlockType,
}

fn default_type() -> BlockType {
    BlockType::Type0
}

impl NonCompSpec {
    /// All-zero labels, `q = n - t`.
    pub fn canonical(n: u32, t: u32) -> Self {
        NonCompSpec {
            n,
            t,
            f_column: 0,
            common_row: 0,
            q: n.saturating_sub(t),
            included_columns: None,
            block_type: BlockType::Type0,
        }
    }

    fn rows(&self) -> u32 {
        self.n - self.t
    }

    fn partner(&self) -> u32 {
        self.f_column ^ 1 << (self.q - self.rows())
    }

    fn validate(&self, max_n: u32) -> Result<()> {
        let (n, t) = (self.n, self.t);
        if n < 3 || n > max_n {
            return Err(param(format!("n = {n} must lie in 3..={max_n} for the non-complementary recipe")));
        }
        if t < 2 || t > n - 1 {
            return Err(param(format!("t = {t} must lie in 2..={} (2 <= t <= n-1)", n - 1)));
        }
        if !fits(self.f_column, t) {
            return Err(param(format!("f column label {} does not fit in t = {t} bits", self.f_column)));
        }
        if !fits(self.common_row, n - t) {
            return Err(param(format!("common row {} does not fit in n-t = {} bits", self.common_row, n - t)));
        }
        if self.q < n - t || self.q > n - 1 {
            return Err(param(format!("q = {} must index a column literal ({}..={})", self.q, n - t, n - 1)));
        }
        if let Some(cols) = &self.included_columns {
            for &c in cols {
                if !fits(c, t) {
                    return Err(param(format!("included column {c} does not fit in t = {t} bits")));
                }
                if c == self.f_column || c == self.partner() {
                    return Err(param(format!(
                        "included columns must exclude the f column {} and its bit-q partner {}",
                        self.f_column,
                        self.partner()
                    )));
                }
            }
        }
        Ok(())
    }

    fn included(&self) -> BTreeSet<u32> {
        match &self.included_columns {
            Some(c) => c.clone(),
            None => (0..1u32 << self.t)
                .filter(|&c| c != self.f_column && c != self.partner())
                .collect(),
        }
    }

    /// Covers of `f` and `g` (type-0 polarity) without tabulating them, so
    /// widths up to 31 are allowed.
    pub fn covers(&self) -> Result<(Cover, Cover)> {
        self.validate(MAX_COVER_WIDTH)?;
        let rows = self.rows();
        let col_mask = ((1u64 << self.n) - 1) as u32 & !((1u32 << rows) - 1);
        let row_mask = (1u32 << rows) - 1;
        let fcol = self.f_column << rows;
        let f = Cover::new(self.n, vec![Cube::new(col_mask, fcol)], false)?;

        let qbit = 1u32 << self.q;
        let common = Cube::new(qbit | row_mask, (fcol & qbit) | self.common_row);
        let mut cubes: Vec<Cube> = match &self.included_columns {
            // g1: any column literal other than l_q differing from the f column.
            None => (rows..self.n)
                .rev()
                .filter(|&b| b != self.q)
                .map(|b| Cube::new(1 << b, !fcol & 1 << b))
                .collect(),
            Some(cols) => cols.iter().rev().map(|&c| Cube::new(col_mask, c << rows)).collect(),
        };
        // g2 spans every column agreeing with the f column in bit q; fall back
        // to the single cell when some of those columns are left out.
        let included = self.included();
        let spans_ok = (0..1u32 << self.t)
            .filter(|&c| c != self.f_column && (c ^ self.f_column) >> (self.q - rows) & 1 == 0)
            .all(|c| included.contains(&c));
        cubes.push(if spans_ok {
            common
        } else {
            Cube::minterm(self.n, fcol | self.common_row)
        });
        let g = Cover::new(self.n, cubes, false)?;
        Ok((f, g))
    }

    /// Offsets the recipe predicts: every `K` whose column moves the `f`
    /// column onto a column outside `G^T`.
    fn predicted_offsets(&self) -> BTreeSet<u32> {
        let included = self.included();
        let rows = self.rows();
        (0..1u32 << self.n)
            .filter(|&k| {
                let c = self.f_column ^ (k >> rows);
                c != self.f_column && !included.contains(&c)
            })
            .collect()
    }
}

/// Complementary recipe parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompSpec {
    pub n: u32,
    pub t: u32,
    pub dividing_column: u32,
    /// Row of the one dividing-column cell placed in `G^T`.
    pub g_cell_row: u32,
    #[serde(default = "default_type")]
    pub block_type: BlockType,
}

impl CompSpec {
    pub fn canonical(n: u32, t: u32) -> Self {
        CompSpec {
            n,
            t,
            dividing_column: 0,
            g_cell_row: 0,
            block_type: BlockType::Type0,
        }
    }

    fn validate(&self, max_n: u32) -> Result<()> {
        let (n, t) = (self.n, self.t);
        if n < 2 || n > max_n {
            return Err(param(format!("n = {n} must lie in 2..={max_n} for the complementary recipe")));
        }
        if t < 1 || t > n - 1 {
            return Err(param(format!("t = {t} must lie in 1..={} (1 <= t <= n-1)", n - 1)));
        }
        if !fits(self.dividing_column, t) {
            return Err(param(format!("dividing column {} does not fit in t = {t} bits", self.dividing_column)));
        }
        if !fits(self.g_cell_row, n - t) {
            return Err(param(format!("g cell row {} does not fit in n-t = {} bits", self.g_cell_row, n - t)));
        }
        Ok(())
    }

    /// `g = g1 + g2` and `f = !g`, type-0 polarity.
    pub fn covers(&self) -> Result<(Cover, Cover)> {
        self.validate(MAX_COVER_WIDTH)?;
        let rows = self.n - self.t;
        let dcol = self.dividing_column << rows;
        let row_mask = (1u32 << rows) - 1;
        let mut cubes: Vec<Cube> = (rows..self.n)
            .rev()
            .map(|b| Cube::new(1 << b, !dcol & 1 << b))
            .collect();
        cubes.push(Cube::new(row_mask, self.g_cell_row));
        let g = Cover::new(self.n, cubes, false)?;
        Ok((g.complement(), g))
    }
}

/// Per-bit relation between `K_f` and `K_g` shared by a family of right keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitRelation {
    Equal,
    Complement,
    Free,
}

/// The right keys `{(K_f, K_g) : K_f ^ K_g in offsets}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightKeyFamily {
    pub n: u32,
    pub offsets: TruthSet,
    /// Relations from bit `n-1` down to bit 0.
    pub pattern: Vec<BitRelation>,
    /// Whether `pattern` alone describes the offsets exactly.
    pub pattern_exact: bool,
}

impl RightKeyFamily {
    pub fn from_offsets(offsets: TruthSet) -> Self {
        let n = offsets.width();
        let members = offsets.members();
        let pattern: Vec<BitRelation> = (0..n)
            .rev()
            .map(|b| {
                let ones = members.iter().filter(|&&k| k >> b & 1 == 1).count();
                if ones == 0 {
                    BitRelation::Equal
                } else if ones == members.len() {
                    BitRelation::Complement
                } else {
                    BitRelation::Free
                }
            })
            .collect();
        let free = pattern.iter().filter(|&&r| r == BitRelation::Free).count();
        let pattern_exact = !members.is_empty() && members.len() == 1usize << free;
        RightKeyFamily {
            n,
            offsets,
            pattern,
            pattern_exact,
        }
    }

    pub fn contains(&self, key: &Key) -> bool {
        self.offsets.contains(key.offset())
    }

    pub fn count(&self) -> u64 {
        (self.offsets.len() as u64) << self.n
    }

    /// Every member key, ordered by offset then `K_f`.
    pub fn expand(&self) -> impl Iterator<Item = Key> + '_ {
        self.offsets
            .iter()
            .flat_map(move |k| (0..1u32 << self.n).map(move |kf| Key::new(kf, kf ^ k)))
    }

    /// A representative right key, `K_f = 0`.
    pub fn representative(&self) -> Option<Key> {
        self.offsets.first().map(|k| Key::new(0, k))
    }

    /// E.g. `bit3 equal, bit2 complement, bits 1..0 free`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.pattern.len() {
            let r = self.pattern[i];
            let mut j = i;
            while j + 1 < self.pattern.len() && self.pattern[j + 1] == r {
                j += 1;
            }
            let (hi, lo) = (self.n - 1 - i as u32, self.n - 1 - j as u32);
            let name = match r {
                BitRelation::Equal => "equal",
                BitRelation::Complement => "complement",
                BitRelation::Free => "free",
            };
            parts.push(if hi == lo {
                format!("bit{hi} {name}")
            } else {
                format!("bits {hi}..{lo} {name}")
            });
            i = j + 1;
        }
        let mut s = parts.join(", ");
        if !self.pattern_exact {
            s.push_str(&format!(" (restricted to {} offsets)", self.offsets.len()));
        }
        s
    }
}

fn with_type(f: Cover, g: Cover, block_type: BlockType) -> (Cover, Cover) {
    match block_type {
        BlockType::Type0 => (f, g),
        BlockType::Type1 => (f.complement(), g.complement()),
    }
}

fn assemble(f: Cover, g: Cover, block_type: BlockType) -> Result<LockBlock> {
    let (f, g) = with_type(f, g, block_type);
    let block = LockBlock::new(f.to_function()?, g.to_function()?, block_type)?;
    Ok(block.with_covers(f, g)?)
}

fn require_witness(block: &LockBlock, what: impl FnOnce() -> String) -> Result<()> {
    match check_constraint1(block)? {
        Some(_) => Ok(()),
        None => Err(BuildError::Constraint1(what())),
    }
}

pub fn build_noncomplementary(spec: &NonCompSpec) -> Result<(LockBlock, RightKeyFamily)> {
    spec.validate(MAX_WIDTH)?;
    let (f, g) = spec.covers()?;
    let block = assemble(f, g, spec.block_type)?;
    require_witness(&block, || format!("non-complementary n={} t={}", spec.n, spec.t))?;
    let offsets = right_key_offsets(&block);
    if offsets.is_empty() {
        return Err(BuildError::NoRightKey);
    }
    let want: Vec<u32> = spec.predicted_offsets().into_iter().collect();
    if offsets.members() != want {
        return Err(BuildError::OffsetMismatch {
            want,
            got: offsets.members(),
        });
    }
    Ok((block, RightKeyFamily::from_offsets(offsets)))
}

pub fn build_complementary(spec: &CompSpec) -> Result<(LockBlock, RightKeyFamily)> {
    spec.validate(MAX_WIDTH)?;
    let (f, g) = spec.covers()?;
    let block = assemble(f, g, spec.block_type)?;
    require_witness(&block, || format!("complementary n={} t={}", spec.n, spec.t))?;
    finish_complementary(block)
}

fn finish_complementary(block: LockBlock) -> Result<(LockBlock, RightKeyFamily)> {
    let offsets = right_key_offsets(&block);
    if !offsets.contains(0) {
        return Err(BuildError::NoRightKey);
    }
    Ok((block, RightKeyFamily::from_offsets(offsets)))
}

/// `f` is an `n`-input AND and `g = !f` (negated for type-1).
pub fn build_antisat(n: u32, block_type: BlockType) -> Result<(LockBlock, RightKeyFamily)> {
    if !(2..=MAX_WIDTH).contains(&n) {
        return Err(param(format!("n = {n} must lie in 2..={MAX_WIDTH}")));
    }
    let all = ((1u64 << n) - 1) as u32;
    let f = Cover::new(n, vec![Cube::new(all, all)], false)?;
    let block = assemble(f.clone(), f.complement(), block_type)?;
    finish_complementary(block)
}

/// `F^T = {0, .., p-1}`, `g = !f`.
///
/// Constraint 1 is checked rather than assumed; a violating `p` is an error.
pub fn build_consecutive_complementary(n: u32, p: u32) -> Result<(LockBlock, RightKeyFamily)> {
    let block = consecutive_block(n, p)?;
    require_witness(&block, || format!("consecutive cells, p = {p}"))?;
    finish_complementary(block)
}

/// The consecutive-cell block without the Constraint 1 check.
pub fn consecutive_block(n: u32, p: u32) -> Result<LockBlock> {
    if !(2..=MAX_WIDTH).contains(&n) {
        return Err(param(format!("n = {n} must lie in 2..={MAX_WIDTH}")));
    }
    if p == 0 || p as u64 >= 1u64 << n {
        return Err(param(format!("p = {p} must lie in 1..={}", (1u64 << n) - 1)));
    }
    let f = less_than_cover(n, p)?;
    assemble(f.clone(), f.complement(), BlockType::Type0)
}

/// `x < p`: one cube per set bit of `p`.
fn less_than_cover(n: u32, p: u32) -> Result<Cover> {
    let all = ((1u64 << n) - 1) as u32;
    let cubes = (0..n)
        .rev()
        .filter(|&i| p >> i & 1 == 1)
        .map(|i| {
            let mask = all & !((1u32 << i) - 1);
            Cube::new(mask, p & !((1u32 << (i + 1)) - 1) & all)
        })
        .collect();
    Ok(Cover::new(n, cubes, false)?)
}

/// Exact rational stored as numerator and denominator plus a float view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "ExactRepr")]
pub struct Exact(pub Ratio<u128>);

#[derive(Serialize)]
struct ExactRepr {
    num: u128,
    den: u128,
    value: f64,
}

impl From<Exact> for ExactRepr {
    fn from(e: Exact) -> Self {
        ExactRepr {
            num: *e.0.numer(),
            den: *e.0.denom(),
            value: e.to_f64(),
        }
    }
}

impl Exact {
    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{} (~{:.4})", self.0.numer(), self.0.denom(), self.to_f64())
        }
    }
}

/// Closed-form corruptibility classes of a canonical block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorruptibilityPrediction {
    pub n: u32,
    pub t: Option<u32>,
    pub kind: BlockKind,
    /// `e -> number of keys`, including `e = 0` for right keys.
    pub histogram: BTreeMap<u64, u128>,
    pub right_keys: u128,
    /// Mean over wrong keys, from the histogram.
    pub average_wrong: Exact,
    /// The published closed-form average (an approximation of the above).
    pub table_average: Exact,
}

/// Histogram per kind (`t` is ignored for Anti-SAT).
pub fn predict_corruptibility(n: u32, t: u32, kind: BlockKind) -> Result<CorruptibilityPrediction> {
    if !(2..=40).contains(&n) {
        return Err(param(format!("n = {n} must lie in 2..=40 for prediction")));
    }
    let p2 = |e: u32| 1u128 << e;
    let (mut hist, right, table_avg, t_out) = match kind {
        BlockKind::Antisat => {
            let h = BTreeMap::from([(1u64, p2(2 * n) - p2(n))]);
            (h, p2(n), Ratio::from_integer(1u128), None)
        }
        BlockKind::Comp => {
            if t < 1 || t > n - 1 {
                return Err(param(format!("t = {t} must lie in 1..={}", n - 1)));
            }
            let mut h = BTreeMap::new();
            *h.entry((1u64 << (n - t)) - 1).or_insert(0) += p2(2 * n) - p2(2 * n - t);
            *h.entry(1u64).or_insert(0) += p2(2 * n - t) - p2(n);
            let avg = Ratio::new(p2(n - t) * p2(t) * p2(t) - p2(n) , p2(2 * t));
            (h, p2(n), avg, Some(t))
        }
        BlockKind::Noncomp => {
            if t < 2 || t > n - 1 {
                return Err(param(format!("t = {t} must lie in 2..={}", n - 1)));
            }
            let mut h = BTreeMap::new();
            *h.entry(1u64 << (n - t)).or_insert(0) += p2(2 * n) - p2(2 * n - t + 1);
            *h.entry(1u64).or_insert(0) += p2(2 * n - t);
            let avg = Ratio::new(p2(n - t) * p2(2 * t) - p2(n + 1), p2(2 * t));
            (h, p2(2 * n - t), avg, Some(t))
        }
    };
    hist.retain(|_, c| *c > 0);
    let wrong: u128 = hist.values().sum();
    let weighted: u128 = hist.iter().map(|(&e, &c)| e as u128 * c).sum();
    let average_wrong = Exact(Ratio::new(weighted, wrong.max(1)));
    hist.insert(0, right);
    Ok(CorruptibilityPrediction {
        n,
        t: t_out,
        kind,
        histogram: hist,
        right_keys: right,
        average_wrong,
        table_average: Exact(table_avg),
    })
}

/// `(2^(2n) - 2^n) / (p (2^n - p))` for `|F^T| = p`.
pub fn lambda_lower_bound(n: u32, p: u64) -> Result<Ratio<u128>> {
    if !(1..=40).contains(&n) || p == 0 || p as u128 >= 1u128 << n {
        return Err(param(format!("need 1 <= p < 2^n, got n = {n}, p = {p}")));
    }
    let full = 1u128 << n;
    Ok(Ratio::new(full * full - full, p as u128 * (full - p as u128)))
}

/// Builds a block from a function pair with covers taken from minterms.
pub fn block_from_sets(n: u32, f_true: &[u32], g_true: &[u32], block_type: BlockType) -> Result<LockBlock> {
    let f = BooleanFunction::from_true_set(TruthSet::from_members(n, f_true.iter().copied())?);
    let g = BooleanFunction::from_true_set(TruthSet::from_members(n, g_true.iter().copied())?);
    Ok(LockBlock::new(f, g, block_type)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truthsets::is_right_key;

    #[test]
    fn noncomp_common_row_three() {
        let spec = NonCompSpec {
            common_row: 0b11,
            ..NonCompSpec::canonical(4, 2)
        };
        let (b, fam) = build_noncomplementary(&spec).unwrap();
        assert_eq!(b.f().true_set().members(), vec![0, 1, 2, 3]);
        assert_eq!(b.g().true_set().members(), vec![3, 8, 9, 10, 11, 12, 13, 14, 15]);
        assert_eq!(b.g_cover().unwrap().to_string(), "l3 | !l2 & l1 & l0");
        assert_eq!(b.f_cover().unwrap().to_string(), "!l3 & !l2");
        assert_eq!(
            fam.pattern,
            vec![BitRelation::Equal, BitRelation::Complement, BitRelation::Free, BitRelation::Free]
        );
        assert!(fam.contains(&Key::new(0b0100, 0)));
        assert_eq!(fam.count(), 64);
        assert_eq!(fam.describe(), "bit3 equal, bit2 complement, bits 1..0 free");
    }

    #[test]
    fn noncomp_example1_columns() {
        let spec = NonCompSpec {
            included_columns: Some(BTreeSet::from([0b10])),
            ..NonCompSpec::canonical(4, 2)
        };
        let (b, fam) = build_noncomplementary(&spec).unwrap();
        assert_eq!(b.g().true_set().members(), vec![0, 8, 9, 10, 11]);
        assert_eq!(b.g_cover().unwrap().to_string(), "l3 & !l2 | !l2 & !l1 & !l0");
        assert_eq!(fam.offsets.members(), vec![4, 5, 6, 7, 12, 13, 14, 15]);
        assert!(fam.pattern_exact);
    }

    #[test]
    fn noncomp_partial_columns_fall_back_to_minterm() {
        // Column 10 shares bit q with the f column but is left out.
        let spec = NonCompSpec {
            included_columns: Some(BTreeSet::from([0b11])),
            common_row: 1,
            ..NonCompSpec::canonical(4, 2)
        };
        let (b, _) = build_noncomplementary(&spec).unwrap();
        assert_eq!(b.g().true_set().members(), vec![1, 12, 13, 14, 15]);
    }

    #[test]
    fn noncomp_rejects_partner_column() {
        let spec = NonCompSpec {
            included_columns: Some(BTreeSet::from([0b01])),
            ..NonCompSpec::canonical(4, 2)
        };
        assert!(matches!(build_noncomplementary(&spec), Err(BuildError::Param(_))));
        assert!(matches!(build_noncomplementary(&NonCompSpec::canonical(4, 1)), Err(BuildError::Param(_))));
    }

    #[test]
    fn comp_canonical() {
        let (b, fam) = build_complementary(&CompSpec::canonical(4, 1)).unwrap();
        assert_eq!(b.f().true_set().members(), (1..8).collect::<Vec<_>>());
        assert_eq!(b.g_cover().unwrap().to_string(), "l3 | !l2 & !l1 & !l0");
        assert_eq!(fam.offsets.members(), vec![0]);
        let (_, fam2) = build_complementary(&CompSpec::canonical(4, 2)).unwrap();
        assert_eq!(fam2.offsets.members(), vec![0]);
        assert!(build_complementary(&CompSpec::canonical(4, 5)).is_err());
    }

    #[test]
    fn comp_labels_complement_literals() {
        let spec = CompSpec {
            dividing_column: 0b1,
            g_cell_row: 0b101,
            ..CompSpec::canonical(4, 1)
        };
        let (b, _) = build_complementary(&spec).unwrap();
        assert_eq!(b.g().true_set().members(), vec![0, 1, 2, 3, 4, 5, 6, 7, 13]);
    }

    #[test]
    fn antisat_and_type1() {
        let (b, fam) = build_antisat(4, BlockType::Type0).unwrap();
        assert_eq!(b.f().true_set().members(), vec![15]);
        assert_eq!(fam.count(), 16);
        let (b1, fam1) = build_antisat(4, BlockType::Type1).unwrap();
        assert_eq!(fam1.offsets, fam.offsets);
        assert!(is_right_key(&b1, Key::new(9, 9)));
        assert!(!is_right_key(&b1, Key::new(9, 8)));
    }

    #[test]
    fn consecutive_cells() {
        // {0..5} and {0..7} have no pair with disjoint distance sets.
        assert_eq!(
            build_consecutive_complementary(4, 6).unwrap_err(),
            BuildError::Constraint1("consecutive cells, p = 6".into())
        );
        assert!(matches!(build_consecutive_complementary(4, 8), Err(BuildError::Constraint1(_))));
        let b6 = consecutive_block(4, 6).unwrap();
        assert_eq!(b6.f().true_set().members(), vec![0, 1, 2, 3, 4, 5]);
        let b8 = consecutive_block(4, 8).unwrap();
        assert_eq!(right_key_offsets(&b8).members(), (0..8).collect::<Vec<_>>());
        let (b7, fam7) = build_consecutive_complementary(4, 7).unwrap();
        assert_eq!(b7.f().true_set().members(), (0..7).collect::<Vec<_>>());
        assert_eq!(fam7.offsets.members(), vec![0]);
        let (b1, _) = build_consecutive_complementary(4, 1).unwrap();
        assert_eq!(b1.f().true_set().members(), vec![0]);
        assert!(build_consecutive_complementary(4, 16).is_err());
    }

    #[test]
    fn predictions_match_formulas() {
        let c = predict_corruptibility(4, 1, BlockKind::Comp).unwrap();
        assert_eq!(c.histogram, BTreeMap::from([(0, 16), (1, 112), (7, 128)]));
        assert_eq!(c.table_average.0, Ratio::from_integer(4));
        assert_eq!(c.average_wrong.0, Ratio::new(1008, 240));
        let nc = predict_corruptibility(4, 2, BlockKind::Noncomp).unwrap();
        assert_eq!(nc.histogram, BTreeMap::from([(0, 64), (1, 64), (4, 128)]));
        assert_eq!(nc.table_average.0, Ratio::new(2, 1));
        let big = predict_corruptibility(8, 3, BlockKind::Noncomp).unwrap();
        assert_eq!(big.histogram[&32], 49152);
        assert_eq!(big.histogram[&1], 8192);
        for (n, t) in [(5, 2), (6, 5), (9, 4)] {
            for kind in [BlockKind::Comp, BlockKind::Noncomp] {
                let p = predict_corruptibility(n, t, kind).unwrap();
                assert_eq!(p.histogram.values().sum::<u128>(), 1 << (2 * n));
            }
        }
    }

    #[test]
    fn lambda_bound_values() {
        assert_eq!(lambda_lower_bound(4, 1).unwrap(), Ratio::from_integer(16));
        assert_eq!(lambda_lower_bound(8, 1).unwrap(), Ratio::from_integer(256));
        assert_eq!(lambda_lower_bound(4, 8).unwrap(), Ratio::new(15, 4));
        assert!(lambda_lower_bound(4, 16).is_err());
    }

    #[test]
    fn wide_covers_without_tables() {
        let (f, g) = NonCompSpec::canonical(30, 2).covers().unwrap();
        assert_eq!(f.cubes().len(), 1);
        assert_eq!(g.cubes().len(), 2);
        assert!(build_noncomplementary(&NonCompSpec::canonical(30, 2)).is_err());
    }
}
