//! Brute-force oracles shared by the integration tests. They work from raw
//! member lists and never call the library's set algebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ganti::truthsets::{BlockType, LockBlock};

pub struct Raw {
    pub n: u32,
    pub f: BTreeSet<u32>,
    pub g: BTreeSet<u32>,
    pub or: bool,
}

impl Raw {
    pub fn of(block: &LockBlock) -> Raw {
        Raw {
            n: block.n(),
            f: block.f().true_set().iter().collect(),
            g: block.g().true_set().iter().collect(),
            or: block.block_type() == BlockType::Type1,
        }
    }

    pub fn eval(&self, x: u32, kf: u32, kg: u32) -> bool {
        let (a, b) = (self.f.contains(&(x ^ kf)), self.g.contains(&(x ^ kg)));
        if self.or {
            a || b
        } else {
            a && b
        }
    }

    pub fn errors(&self, kf: u32, kg: u32) -> u64 {
        (0..1u32 << self.n).filter(|&x| self.eval(x, kf, kg) != self.or).count() as u64
    }

    /// Offsets `K` such that every key with `K_f ^ K_g = K` is right.
    pub fn right_offsets(&self) -> Vec<u32> {
        (0..1u32 << self.n)
            .filter(|&k| (0..1u32 << self.n).all(|kf| self.errors(kf, kf ^ k) == 0))
            .collect()
    }

    fn error_sets(&self) -> (BTreeSet<u32>, BTreeSet<u32>) {
        if self.or {
            let all: BTreeSet<u32> = (0..1u32 << self.n).collect();
            (&all - &self.f, &all - &self.g)
        } else {
            (self.f.clone(), self.g.clone())
        }
    }

    /// Lexicographically smallest `(a, b)` whose distance sets are disjoint.
    pub fn constraint1(&self) -> Option<(u32, u32)> {
        let (a_set, b_set) = self.error_sets();
        let dist = |s: &BTreeSet<u32>, e: u32| -> BTreeSet<u32> { s.iter().filter(|&&m| m != e).map(|&m| m ^ e).collect() };
        for &a in &a_set {
            let da = dist(&a_set, a);
            for &b in &b_set {
                if da.is_disjoint(&dist(&b_set, b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Keys `(K_f, K_g)` giving a wrong output on input `x`.
    pub fn wrong_keys(&self, x: u32) -> BTreeSet<(u32, u32)> {
        let mut out = BTreeSet::new();
        for kf in 0..1u32 << self.n {
            for kg in 0..1u32 << self.n {
                if self.eval(x, kf, kg) != self.or {
                    out.insert((kf, kg));
                }
            }
        }
        out
    }
}
