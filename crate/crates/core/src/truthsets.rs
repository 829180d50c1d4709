//! Bit-vector and truth-set algebra for two-function locking blocks.
//!
//! A block computes `y = f(X ^ K_f) & g(X ^ K_g)` (type-0) or the OR of the
//! two (type-1). Everything about its behaviour follows from the true sets
//! `F^T = {L | f(L) = 1}` and `G^T`: which keys are wrong for which inputs,
//! whether every input owns a wrong key nobody else excludes, and which key
//! offsets `K_f ^ K_g` unlock it. For type-1 blocks the false sets play the
//! same role.
//!
//! Values are plain `u32` patterns; bit `i` is literal `l_i` and `l_{n-1}` is
//! the most significant bit, so `2` is the vector `[0, 0, 1, 0]` at width 4.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::Cover;

/// Largest width for which truth sets are materialised.
pub const MAX_WIDTH: u32 = 24;

/// Exhaustive wrong-key overlap analysis compares `2^n` sets over `2^(2n)` keys.
pub const MAX_OVERLAP_WIDTH: u32 = 8;

pub type Result<T> = std::result::Result<T, TruthSetError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TruthSetError {
    #[error("width {0} is outside 1..={MAX_WIDTH}")]
    Width(u32),
    #[error("value {value} does not fit in {width} bits")]
    Value { value: u64, width: u32 },
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(u32, u32),
    #[error("{0} is not a member of the set")]
    NotMember(u32),
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("{op} supports widths up to {max}, got {width}")]
    TooWide { op: &'static str, max: u32, width: u32 },
    #[error("cover does not realise the {0} truth table")]
    CoverMismatch(&'static str),
    #[error("`{0}` is not a binary string")]
    Parse(String),
}

fn check_width(width: u32) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        Err(TruthSetError::Width(width))
    } else {
        Ok(())
    }
}

#[inline]
fn low_mask(width: u32) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// An `width`-bit pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BitVector {
    width: u32,
    value: u32,
}

impl BitVector {
    pub fn new(width: u32, value: u32) -> Result<Self> {
        if width == 0 || width > 32 {
            return Err(TruthSetError::Width(width));
        }
        if value & !low_mask(width) != 0 {
            return Err(TruthSetError::Value {
                value: value as u64,
                width,
            });
        }
        Ok(BitVector { width, value })
    }

    /// Builds from literal values listed most significant first, e.g. `[0,1,0,0]` is 4.
    pub fn from_msb_bits(bits: &[u8]) -> Result<Self> {
        let value = bits.iter().fold(0u32, |acc, &b| acc << 1 | (b & 1) as u32);
        BitVector::new(bits.len() as u32, value)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn bit(&self, i: u32) -> bool {
        self.value >> i & 1 == 1
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.width != other.width {
            return Err(TruthSetError::WidthMismatch(self.width, other.width));
        }
        Ok(BitVector {
            width: self.width,
            value: self.value ^ other.value,
        })
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width as usize)
    }
}

impl FromStr for BitVector {
    type Err = TruthSetError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(TruthSetError::Parse(s.into()));
        }
        let bits: Vec<u8> = s.bytes().map(|b| b - b'0').collect();
        BitVector::from_msb_bits(&bits)
    }
}

/// A subset of the `2^width` patterns, stored as a bitmap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthSet {
    width: u32,
    words: Vec<u64>,
    len: usize,
}

impl fmt::Debug for TruthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthSet[{}]", self.width)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

impl TruthSet {
    pub fn empty(width: u32) -> Result<Self> {
        check_width(width)?;
        let words = (1usize << width).div_ceil(64);
        Ok(TruthSet {
            width,
            words: vec![0; words],
            len: 0,
        })
    }

    /// All `2^width` patterns (the set `X_n`).
    pub fn full(width: u32) -> Result<Self> {
        Self::from_predicate(width, |_| true)
    }

    pub fn from_members(width: u32, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::empty(width)?;
        for m in members {
            if m & !low_mask(width) != 0 {
                return Err(TruthSetError::Value { value: m as u64, width });
            }
            s.insert(m);
        }
        Ok(s)
    }

    pub fn from_predicate(width: u32, pred: impl Fn(u32) -> bool) -> Result<Self> {
        let mut s = Self::empty(width)?;
        for v in 0..(1u32 << width) {
            if pred(v) {
                s.insert(v);
            }
        }
        Ok(s)
    }

    fn insert(&mut self, v: u32) {
        let (w, b) = ((v >> 6) as usize, v & 63);
        if self.words[w] >> b & 1 == 0 {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of patterns in the universe, `2^width`.
    pub fn universe(&self) -> u64 {
        1u64 << self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        match self.words.get((v >> 6) as usize) {
            Some(w) if v <= low_mask(self.width) => w >> (v & 63) & 1 == 1,
            _ => false,
        }
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((wi as u32) << 6 | b)
            })
        })
    }

    pub fn members(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn complement(&self) -> TruthSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let universe = 1usize << self.width;
        if universe < 64 {
            words[0] &= (1u64 << universe) - 1;
        }
        TruthSet {
            width: self.width,
            words,
            len: universe - self.len,
        }
    }

    /// `{s ^ k : s in self}`.
    pub fn translate(&self, k: u32) -> TruthSet {
        let mut out = TruthSet {
            width: self.width,
            words: vec![0; self.words.len()],
            len: 0,
        };
        for m in self.iter() {
            out.insert(m ^ k);
        }
        out
    }

    fn same_width(&self, other: &TruthSet) -> Result<()> {
        if self.width != other.width {
            Err(TruthSetError::WidthMismatch(self.width, other.width))
        } else {
            Ok(())
        }
    }

    fn zip_words(&self, other: &TruthSet, op: impl Fn(u64, u64) -> u64) -> Result<TruthSet> {
        self.same_width(other)?;
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(TruthSet {
            width: self.width,
            words,
            len,
        })
    }

    pub fn intersection(&self, other: &TruthSet) -> Result<TruthSet> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn union(&self, other: &TruthSet) -> Result<TruthSet> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &TruthSet) -> Result<TruthSet> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &TruthSet) -> Result<usize> {
        self.same_width(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    pub fn is_disjoint(&self, other: &TruthSet) -> Result<bool> {
        Ok(self.intersection_len(other)? == 0)
    }

    pub fn is_subset(&self, other: &TruthSet) -> Result<bool> {
        self.same_width(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }
}

#[derive(Serialize, Deserialize)]
struct TruthSetRepr {
    n: u32,
    members: Vec<u32>,
}

impl Serialize for TruthSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TruthSetRepr {
            n: self.width,
            members: self.members(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruthSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TruthSetRepr::deserialize(d)?;
        TruthSet::from_members(r.n, r.members).map_err(serde::de::Error::custom)
    }
}

/// A completely specified function of `width` inputs, held as its true set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    true_set: TruthSet,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction{:?}", self.true_set)
    }
}

impl BooleanFunction {
    pub fn from_true_set(true_set: TruthSet) -> Self {
        BooleanFunction { true_set }
    }

    pub fn from_fn(width: u32, f: impl Fn(u32) -> bool) -> Result<Self> {
        Ok(BooleanFunction {
            true_set: TruthSet::from_predicate(width, f)?,
        })
    }

    pub fn width(&self) -> u32 {
        self.true_set.width
    }

    #[inline]
    pub fn eval(&self, l: u32) -> bool {
        self.true_set.contains(l)
    }

    pub fn true_set(&self) -> &TruthSet {
        &self.true_set
    }

    pub fn false_set(&self) -> TruthSet {
        self.true_set.complement()
    }

    pub fn not(&self) -> BooleanFunction {
        BooleanFunction {
            true_set: self.true_set.complement(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionRepr {
    n: u32,
    true_set: Vec<u32>,
}

impl Serialize for BooleanFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionRepr {
            n: self.width(),
            true_set: self.true_set.members(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BooleanFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FunctionRepr::deserialize(d)?;
        TruthSet::from_members(r.n, r.true_set)
            .map(BooleanFunction::from_true_set)
            .map_err(serde::de::Error::custom)
    }
}

/// Multiset of pairwise XOR distances, one entry per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMultiset {
    pub width: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl DistanceMultiset {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Builds from a listing over ordered pairs, where every distance
    /// appears twice; multiplicities are halved.
    pub fn from_ordered_listing(width: u32, listing: &[u32]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &d in listing {
            *counts.entry(d).or_insert(0u64) += 1;
        }
        for (&d, c) in counts.iter_mut() {
            if *c % 2 != 0 {
                return Err(TruthSetError::Value { value: d as u64, width });
            }
            *c /= 2;
        }
        Ok(DistanceMultiset { width, counts })
    }
}

/// `{s ^ s_i : s_i in set, s_i != s}`.
pub fn distance_set(set: &TruthSet, element: u32) -> Result<TruthSet> {
    if !set.contains(element) {
        return Err(TruthSetError::NotMember(element));
    }
    TruthSet::from_predicate(set.width, |d| d != 0 && set.contains(d ^ element))
}

/// XOR distance of every unordered pair of distinct members.
pub fn distance_structure(set: &TruthSet) -> DistanceMultiset {
    let members = set.members();
    let mut counts = BTreeMap::new();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            *counts.entry(a ^ b).or_insert(0u64) += 1;
        }
    }
    DistanceMultiset {
        width: set.width,
        counts,
    }
}

/// In-place Walsh-Hadamard transform.
fn walsh_hadamard(v: &mut [i64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(h * 2) {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// `out[k] = |(a ^ k) ∩ b|` for every offset `k`.
///
/// Sparse sets are handled directly; dense ones go through the
/// Walsh-Hadamard correlation identity.
pub fn overlap_profile(a: &TruthSet, b: &TruthSet) -> Result<Vec<u64>> {
    a.same_width(b)?;
    let width = a.width;
    let size = 1usize << width;
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len() as u64 <= 3 * width as u64 + 8 {
        let small_members = small.members();
        return Ok((0..size as u32)
            .map(|k| small_members.iter().filter(|&&m| big.contains(m ^ k)).count() as u64)
            .collect());
    }
    let indicator = |s: &TruthSet| -> Vec<i64> { (0..size as u32).map(|v| s.contains(v) as i64).collect() };
    let mut ha = indicator(a);
    let mut hb = indicator(b);
    walsh_hadamard(&mut ha);
    walsh_hadamard(&mut hb);
    for (x, y) in ha.iter_mut().zip(&hb) {
        *x *= *y;
    }
    walsh_hadamard(&mut ha);
    Ok(ha.into_iter().map(|v| (v >> width) as u64).collect())
}

/// Final gate of a block: AND (correct output 0) or OR (correct output 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum BlockType {
    Type0,
    Type1,
}

impl From<BlockType> for u8 {
    fn from(t: BlockType) -> u8 {
        match t {
            BlockType::Type0 => 0,
            BlockType::Type1 => 1,
        }
    }
}

impl TryFrom<u8> for BlockType {
    type Error = String;
    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(BlockType::Type0),
            1 => Ok(BlockType::Type1),
            _ => Err(format!("block type must be 0 or 1, got {v}")),
        }
    }
}

impl BlockType {
    /// Output of the block under any right key.
    pub fn correct_output(self) -> bool {
        self == BlockType::Type1
    }
}

/// A key pair. On the netlist, `keyinput{i}` carries bit `i` of `kf` for
/// `i < n` and bit `i - n` of `kg` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Key {
    pub kf: u32,
    pub kg: u32,
}

impl Key {
    pub fn new(kf: u32, kg: u32) -> Self {
        Key { kf, kg }
    }

    pub fn offset(&self) -> u32 {
        self.kf ^ self.kg
    }

    /// Key-input bits in `keyinput` index order.
    pub fn to_bits(&self, n: u32) -> Vec<bool> {
        (0..n)
            .map(|i| self.kf >> i & 1 == 1)
            .chain((0..n).map(|i| self.kg >> i & 1 == 1))
            .collect()
    }

    pub fn from_bits(bits: &[bool], n: u32) -> Option<Self> {
        if bits.len() != 2 * n as usize {
            return None;
        }
        let pack = |s: &[bool]| s.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << i);
        Some(Key {
            kf: pack(&bits[..n as usize]),
            kg: pack(&bits[n as usize..]),
        })
    }

    /// `K_f=0100 K_g=0000` at width `n`.
    pub fn display(&self, n: u32) -> String {
        format!(
            "K_f={:0w$b} K_g={:0w$b}",
            self.kf,
            self.kg,
            w = n as usize
        )
    }
}

/// A set of key pairs for a block of width `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeySet {
    pub n: u32,
    pub members: BTreeSet<Key>,
}

impl KeySet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, key: &Key) -> bool {
        self.members.contains(key)
    }
}

/// Two functions of the same width joined by the block's final gate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockBlock {
    n: u32,
    #[serde(rename = "type")]
    block_type: BlockType,
    f: BooleanFunction,
    g: BooleanFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f_cover: Option<Cover>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g_cover: Option<Cover>,
}

impl LockBlock {
    pub fn new(f: BooleanFunction, g: BooleanFunction, block_type: BlockType) -> Result<Self> {
        if f.width() != g.width() {
            return Err(TruthSetError::WidthMismatch(f.width(), g.width()));
        }
        Ok(LockBlock {
            n: f.width(),
            block_type,
            f,
            g,
            f_cover: None,
            g_cover: None,
        })
    }

    /// Block with `g = !f`.
    pub fn complementary(f: BooleanFunction, block_type: BlockType) -> Self {
        let g = f.not();
        LockBlock {
            n: f.width(),
            block_type,
            f,
            g,
            f_cover: None,
            g_cover: None,
        }
    }

    /// Convenience for type-0 blocks given as true-set member lists.
    pub fn from_true_sets(n: u32, f_true: &[u32], g_true: &[u32]) -> Result<Self> {
        LockBlock::new(
            BooleanFunction::from_true_set(TruthSet::from_members(n, f_true.iter().copied())?),
            BooleanFunction::from_true_set(TruthSet::from_members(n, g_true.iter().copied())?),
            BlockType::Type0,
        )
    }

    /// Attaches gate-level covers after checking they realise `f` and `g`.
    pub fn with_covers(mut self, f_cover: Cover, g_cover: Cover) -> Result<Self> {
        let realises = |c: &Cover, func: &BooleanFunction| {
            c.width() == func.width() && (0..1u32 << func.width()).all(|l| c.eval(l) == func.eval(l))
        };
        if !realises(&f_cover, &self.f) {
            return Err(TruthSetError::CoverMismatch("f"));
        }
        if !realises(&g_cover, &self.g) {
            return Err(TruthSetError::CoverMismatch("g"));
        }
        self.f_cover = Some(f_cover);
        self.g_cover = Some(g_cover);
        Ok(self)
    }

    /// Re-checks a deserialized block: widths agree and covers, if present,
    /// realise the functions.
    pub fn validated(self) -> Result<Self> {
        if self.f.width() != self.n || self.g.width() != self.n {
            return Err(TruthSetError::WidthMismatch(self.f.width(), self.g.width()));
        }
        match (self.f_cover.clone(), self.g_cover.clone()) {
            (None, None) => Ok(self),
            (Some(fc), Some(gc)) => self.with_covers(fc, gc),
            (Some(_), None) => Err(TruthSetError::CoverMismatch("g")),
            (None, Some(_)) => Err(TruthSetError::CoverMismatch("f")),
        }
    }

    /// Exchanges the roles of `f` and `g` (and of `K_f` and `K_g`).
    pub fn swapped(&self) -> LockBlock {
        LockBlock {
            n: self.n,
            block_type: self.block_type,
            f: self.g.clone(),
            g: self.f.clone(),
            f_cover: self.g_cover.clone(),
            g_cover: self.f_cover.clone(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn block_type(&self) -> BlockType {
        self.block_type
    }

    pub fn f(&self) -> &BooleanFunction {
        &self.f
    }

    pub fn g(&self) -> &BooleanFunction {
        &self.g
    }

    pub fn f_cover(&self) -> Option<&Cover> {
        self.f_cover.as_ref()
    }

    pub fn g_cover(&self) -> Option<&Cover> {
        self.g_cover.as_ref()
    }

    pub fn correct_output(&self) -> bool {
        self.block_type.correct_output()
    }

    pub fn is_complementary(&self) -> bool {
        self.g == self.f.not()
    }

    /// The sets whose simultaneous hit makes the output wrong: the true sets
    /// for type-0 and the false sets for type-1.
    pub fn error_sets(&self) -> (TruthSet, TruthSet) {
        match self.block_type {
            BlockType::Type0 => (self.f.true_set().clone(), self.g.true_set().clone()),
            BlockType::Type1 => (self.f.false_set(), self.g.false_set()),
        }
    }

    #[inline]
    pub fn eval(&self, x: u32, key: Key) -> bool {
        let a = self.f.eval(x ^ key.kf);
        let b = self.g.eval(x ^ key.kg);
        match self.block_type {
            BlockType::Type0 => a & b,
            BlockType::Type1 => a | b,
        }
    }

    /// Number of inputs with wrong output, `|(A ^ K_f) ∩ (B ^ K_g)|` over the error sets.
    pub fn corruptibility(&self, key: Key) -> u64 {
        let (a, b) = self.error_sets();
        let k = key.offset();
        let (small, big) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
        small.iter().filter(|&m| big.contains(m ^ k)).count() as u64
    }

    pub fn key_space(&self) -> u64 {
        1u64 << (2 * self.n)
    }
}

/// Whether `(a, b)` satisfies the first block constraint: the distance sets
/// of `a` within `A` and of `b` within `B` are disjoint.
pub fn is_constraint1_witness(block: &LockBlock, a: u32, b: u32) -> Result<bool> {
    let (sa, sb) = block.error_sets();
    let da = distance_set(&sa, a)?;
    let db = distance_set(&sb, b)?;
    da.is_disjoint(&db)
}

/// Lexicographically smallest `(a, b)` with `a` in the first error set, `b`
/// in the second, and disjoint distance sets, or `None`.
///
/// `D_a ∩ D_b = ∅` exactly when `(A ^ a ^ b) ∩ B = {b}`, so each offset
/// `c = a ^ b` with overlap one yields a single witness.
pub fn check_constraint1(block: &LockBlock) -> Result<Option<(u32, u32)>> {
    let (sa, sb) = block.error_sets();
    if sa.is_empty() {
        return Err(TruthSetError::Empty("first error set"));
    }
    if sb.is_empty() {
        return Err(TruthSetError::Empty("second error set"));
    }
    let profile = overlap_profile(&sa, &sb)?;
    let mut best: Option<(u32, u32)> = None;
    for (c, &count) in profile.iter().enumerate() {
        if count != 1 {
            continue;
        }
        let c = c as u32;
        let a = sa.iter().find(|&m| sb.contains(m ^ c)).expect("overlap of one has a member");
        let cand = (a, a ^ c);
        if best.is_none_or(|b| cand < b) {
            best = Some(cand);
        }
    }
    Ok(best)
}

/// Offsets `K = K_f ^ K_g` under which the block never errs. Every key pair
/// with such an offset is right, and no other pair is.
pub fn right_key_offsets(block: &LockBlock) -> TruthSet {
    let (sa, sb) = block.error_sets();
    let profile = overlap_profile(&sa, &sb).expect("error sets share the block width");
    TruthSet::from_members(
        block.n,
        profile.iter().enumerate().filter(|(_, &c)| c == 0).map(|(k, _)| k as u32),
    )
    .expect("offsets fit the block width")
}

/// Second block constraint, decided by searching for a translate of the
/// first error set inside the complement of the second.
pub fn check_constraint2(block: &LockBlock) -> bool {
    !right_key_offsets(block).is_empty()
}

/// Exhaustive sweep over all inputs.
pub fn is_right_key(block: &LockBlock, key: Key) -> bool {
    let want = block.correct_output();
    (0..1u32 << block.n).all(|x| block.eval(x, key) == want)
}

/// Keys that input `x` excludes: `{(x ^ a, x ^ b) : a in A, b in B}`.
pub fn wrong_key_set(block: &LockBlock, x: u32) -> KeySet {
    let (sa, sb) = block.error_sets();
    let members = sa
        .iter()
        .flat_map(|a| sb.iter().map(move |b| Key::new(x ^ a, x ^ b)))
        .collect();
    KeySet { n: block.n, members }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrongKeyOverlap {
    /// Every input's wrong-key set holds a key that no other input excludes.
    pub distinct_elements: bool,
    /// No key is excluded by two different inputs.
    pub pairwise_disjoint: bool,
}

/// Exhaustive comparison of all wrong-key sets (`n <= 8`).
pub fn wrong_key_overlap(block: &LockBlock) -> Result<WrongKeyOverlap> {
    let n = block.n;
    if n > MAX_OVERLAP_WIDTH {
        return Err(TruthSetError::TooWide {
            op: "wrong-key overlap",
            max: MAX_OVERLAP_WIDTH,
            width: n,
        });
    }
    let (sa, sb) = block.error_sets();
    let a: Vec<u32> = sa.members();
    let b: Vec<u32> = sb.members();
    let index = |kf: u32, kg: u32| ((kf as usize) << n) | kg as usize;
    let mut hits = vec![0u16; 1usize << (2 * n)];
    for x in 0..1u32 << n {
        for &fa in &a {
            for &gb in &b {
                let slot = &mut hits[index(x ^ fa, x ^ gb)];
                *slot = slot.saturating_add(1);
            }
        }
    }
    let pairwise_disjoint = hits.iter().all(|&h| h <= 1);
    let distinct_elements = !a.is_empty()
        && !b.is_empty()
        && (0..1u32 << n).all(|x| a.iter().any(|&fa| b.iter().any(|&gb| hits[index(x ^ fa, x ^ gb)] == 1)));
    Ok(WrongKeyOverlap {
        distinct_elements,
        pairwise_disjoint,
    })
}

pub fn has_distinct_elements(block: &LockBlock) -> Result<bool> {
    Ok(wrong_key_overlap(block)?.distinct_elements)
}
