//! All-0/all-1 key probe and bypass patch cost for a wrong key.

use ganti::attacks::{bypass_cost, cas_unlock_probe};
use ganti::blockgen::{build_complementary, build_noncomplementary};
use ganti::truthsets::Key;
use ganti::{CompSpec, NonCompSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (comp, _) = build_complementary(&CompSpec::canonical(8, 3))?;
    let (noncomp, _) = build_noncomplementary(&NonCompSpec::canonical(8, 3))?;
    println!("complementary probe: {:?}", cas_unlock_probe(&comp));
    println!("non-complementary probe: {:?}", cas_unlock_probe(&noncomp));

    let worst = (0..256u32).map(|kg| Key::new(0, kg)).max_by_key(|&k| comp.corruptibility(k)).unwrap();
    let cost = bypass_cost(&comp, worst, 8);
    println!("bypass for {}: N_p = {}, first patterns {:?}", worst.display(8), cost.n_p, cost.patterns);
    Ok(())
}
