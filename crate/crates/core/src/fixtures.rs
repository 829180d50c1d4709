//! Bundled inputs: the c17 host netlist and the three worked example blocks.
//!
//! The JSON files under `fixtures/` are the serialized form of the
//! constructors here; a test keeps them in sync.

use std::collections::BTreeSet;

use crate::blockgen::{build_complementary, build_noncomplementary, BuildError, CompSpec, NonCompSpec};
use crate::netlist::{parse_bench, Netlist};
use crate::truthsets::LockBlock;

pub const C17_BENCH: &str = include_str!("../fixtures/c17.bench");
pub const EXAMPLE1_JSON: &str = include_str!("../fixtures/example1.json");
pub const EXAMPLE2_JSON: &str = include_str!("../fixtures/example2.json");
pub const EXAMPLE3_JSON: &str = include_str!("../fixtures/example3.json");

/// Output the lock block is XOR-ed into by default.
pub const C17_TARGET: &str = "N22";

pub fn c17() -> Netlist {
    parse_bench(C17_BENCH).expect("bundled c17 parses")
}

/// `f = !l3 & !l2`, `g = l3 & !l2 | !l2 & !l1 & !l0`:
/// `F^T = {0..3}`, `G^T = {0, 8..11}`.
pub fn example1() -> Result<LockBlock, BuildError> {
    let spec = NonCompSpec {
        included_columns: Some(BTreeSet::from([0b10])),
        ..NonCompSpec::canonical(4, 2)
    };
    Ok(build_noncomplementary(&spec)?.0)
}

/// Complementary, `F^T = {6, 8..15}`, `G^T = {0..5, 7}`.
pub fn example2() -> Result<LockBlock, BuildError> {
    let spec = CompSpec {
        g_cell_row: 0b110,
        ..CompSpec::canonical(4, 1)
    };
    Ok(build_complementary(&spec)?.0.swapped())
}

/// `F^T = {0..3}`, `G^T = {0, 4, 8, 12}`: satisfies the first constraint
/// but has no right key.
pub fn example3() -> Result<LockBlock, BuildError> {
    Ok(LockBlock::from_true_sets(4, &[0, 1, 2, 3], &[0, 4, 8, 12])?)
}

pub fn examples() -> Result<Vec<(&'static str, LockBlock)>, BuildError> {
    Ok(vec![("example1", example1()?), ("example2", example2()?), ("example3", example3()?)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truthsets::BlockType;

    #[test]
    fn json_files_match_constructors() {
        let files = [EXAMPLE1_JSON, EXAMPLE2_JSON, EXAMPLE3_JSON];
        for ((name, block), text) in examples().unwrap().into_iter().zip(files) {
            let parsed: LockBlock = serde_json::from_str(text).unwrap();
            assert_eq!(parsed, block, "{name}");
        }
        assert_eq!(example1().unwrap().g().true_set().members(), vec![0, 8, 9, 10, 11]);
        assert!(example2().unwrap().is_complementary());
        assert_eq!(example2().unwrap().block_type(), BlockType::Type0);
    }

    #[test]
    fn c17_shape() {
        let h = c17();
        assert_eq!(h.num_inputs(), 5);
        assert_eq!(h.gates().len(), 6);
        assert_eq!(h.output_names(), vec!["N22", "N23"]);
    }
}
