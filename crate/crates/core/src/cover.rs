//! Sum-of-products covers with an optional output inversion.
//!
//! A cover is how a block function is realised in gates: one AND term per
//! cube, an OR across cubes, and a final inversion for NAND/NOR-rooted
//! functions such as the complemented half of an Anti-SAT block.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::truthsets::{BooleanFunction, TruthSet, TruthSetError};

/// Widths up to 31 are representable; truth tables stop at 24.
pub const MAX_COVER_WIDTH: u32 = 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("cover width {0} is outside 1..={MAX_COVER_WIDTH}")]
    Width(u32),
    #[error("cube `{0}` is not a {1}-character string over 0/1/-")]
    BadCube(String, u32),
    #[error(transparent)]
    TruthSet(#[from] TruthSetError),
}

/// A product term. Bit `i` of `mask` selects literal `l_i`; the same bit of
/// `value` gives its polarity (1 = `l_i`, 0 = `!l_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub mask: u32,
    pub value: u32,
}

impl Cube {
    pub fn new(mask: u32, value: u32) -> Self {
        Cube {
            mask,
            value: value & mask,
        }
    }

    /// The single-point cube for minterm `m`.
    pub fn minterm(width: u32, m: u32) -> Self {
        let mask = if width == 32 { u32::MAX } else { (1u32 << width) - 1 };
        Cube::new(mask, m)
    }

    #[inline]
    pub fn matches(&self, l: u32) -> bool {
        l & self.mask == self.value
    }

    /// `(bit, positive)` for each literal, highest bit first.
    pub fn literals(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        (0..32u32)
            .rev()
            .filter(move |b| self.mask >> b & 1 == 1)
            .map(move |b| (b, self.value >> b & 1 == 1))
    }

    pub fn num_literals(&self) -> u32 {
        self.mask.count_ones()
    }

    fn to_pattern(self, width: u32) -> String {
        (0..width)
            .rev()
            .map(|b| match (self.mask >> b & 1, self.value >> b & 1) {
                (0, _) => '-',
                (_, 1) => '1',
                _ => '0',
            })
            .collect()
    }

    fn from_pattern(s: &str, width: u32) -> Result<Self, CoverError> {
        if s.chars().count() != width as usize {
            return Err(CoverError::BadCube(s.into(), width));
        }
        let mut mask = 0;
        let mut value = 0;
        for (i, ch) in s.chars().enumerate() {
            let bit = width - 1 - i as u32;
            match ch {
                '-' => {}
                '1' => {
                    mask |= 1 << bit;
                    value |= 1 << bit;
                }
                '0' => mask |= 1 << bit,
                _ => return Err(CoverError::BadCube(s.into(), width)),
            }
        }
        Ok(Cube { mask, value })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CoverRepr", into = "CoverRepr")]
pub struct Cover {
    width: u32,
    cubes: Vec<Cube>,
    inverted: bool,
}

#[derive(Serialize, Deserialize)]
struct CoverRepr {
    width: u32,
    cubes: Vec<String>,
    inverted: bool,
}

impl TryFrom<CoverRepr> for Cover {
    type Error = CoverError;
    fn try_from(r: CoverRepr) -> Result<Self, CoverError> {
        let cubes = r
            .cubes
            .iter()
            .map(|s| Cube::from_pattern(s, r.width))
            .collect::<Result<Vec<_>, _>>()?;
        Cover::new(r.width, cubes, r.inverted)
    }
}

impl From<Cover> for CoverRepr {
    fn from(c: Cover) -> Self {
        CoverRepr {
            width: c.width,
            cubes: c.cubes.iter().map(|q| q.to_pattern(c.width)).collect(),
            inverted: c.inverted,
        }
    }
}

impl Cover {
    pub fn new(width: u32, cubes: Vec<Cube>, inverted: bool) -> Result<Self, CoverError> {
        if width == 0 || width > MAX_COVER_WIDTH {
            return Err(CoverError::Width(width));
        }
        let limit = 1u32 << width;
        let cubes = cubes
            .into_iter()
            .map(|c| Cube::new(c.mask & (limit - 1), c.value))
            .collect();
        Ok(Cover { width, cubes, inverted })
    }

    /// One cube per member of `set`; no minimisation.
    pub fn minterms(set: &TruthSet) -> Self {
        let width = set.width();
        Cover {
            width,
            cubes: set.iter().map(|m| Cube::minterm(width, m)).collect(),
            inverted: false,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn inverted(&self) -> bool {
        self.inverted
    }

    /// The same cubes with the output inversion toggled.
    pub fn complement(&self) -> Cover {
        Cover {
            inverted: !self.inverted,
            ..self.clone()
        }
    }

    #[inline]
    pub fn eval(&self, l: u32) -> bool {
        self.cubes.iter().any(|c| c.matches(l)) != self.inverted
    }

    pub fn to_function(&self) -> Result<BooleanFunction, CoverError> {
        Ok(BooleanFunction::from_fn(self.width, |l| self.eval(l))?)
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .cubes
            .iter()
            .map(|c| {
                if c.mask == 0 {
                    return "1".to_string();
                }
                c.literals()
                    .map(|(b, pos)| if pos { format!("l{b}") } else { format!("!l{b}") })
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" | ") };
        if self.inverted {
            write!(f, "!({body})")
        } else {
            write!(f, "{body}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_eval() {
        // l3 | !l2 & l1 & l0
        let c = Cover::new(4, vec![Cube::new(0b1000, 0b1000), Cube::new(0b0111, 0b0011)], false).unwrap();
        assert_eq!(c.to_string(), "l3 | !l2 & l1 & l0");
        let t: Vec<u32> = (0..16).filter(|&l| c.eval(l)).collect();
        assert_eq!(t, vec![3, 8, 9, 10, 11, 12, 13, 14, 15]);
        assert!(!c.complement().eval(3));
    }

    #[test]
    fn json_uses_patterns() {
        let c = Cover::new(4, vec![Cube::new(0b1100, 0b0000)], true).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"width":4,"cubes":["00--"],"inverted":true}"#);
        let back: Cover = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Cover>(r#"{"width":4,"cubes":["0x--"],"inverted":true}"#).is_err());
    }

    #[test]
    fn minterm_cover_matches_set() {
        let s = TruthSet::from_members(4, [0, 5, 9]).unwrap();
        let f = Cover::minterms(&s).to_function().unwrap();
        assert_eq!(f.true_set(), &s);
    }
}
