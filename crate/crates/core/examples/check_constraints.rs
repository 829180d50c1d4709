//! Runs the structural checks on the three bundled 4-bit examples.

use ganti::fixtures;
use ganti::truthsets::*;

fn main() -> std::result::Result<(), Box<dyn std::error::Error>> {
    for (name, block) in &fixtures::examples()? {
        println!("{name}: F^T={:?} G^T={:?}", block.f().true_set().members(), block.g().true_set().members());
        let (a, _) = block.error_sets();
        if let Some(first) = a.first() {
            println!("  distance set of {first}: {:?}", distance_set(&a, first)?.members());
        }
        println!("  distance structure: {:?}", distance_structure(&a).counts);
        println!("  constraint 1 witness: {:?}", check_constraint1(block)?);
        println!("  constraint 2: {}", check_constraint2(block));
        println!("  right-key offsets: {:?}", right_key_offsets(block).members());
        println!("  distinct elements: {}", has_distinct_elements(block)?);
        println!("  wrong keys for X=0: {}", wrong_key_set(block, 0).len());
    }
    Ok(())
}
