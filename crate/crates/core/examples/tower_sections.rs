// Postnikov towers as sections: fibrancy, cofibrancy and a broken tower.

use std::error::Error;

use tower_calculus::complex::{direct_sum, ChainComplex};
use tower_calculus::sections::{is_homotopy_cartesian, is_post_fibrant, is_tow_cofibrant, postnikov_tower, zero_tower_map, TowerSection};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x = direct_sum(&ChainComplex::sphere(1), &ChainComplex::sphere(2));
    let t = postnikov_tower(&x, 3);
    print!("{}", is_post_fibrant(&t)?);
    print!("{}", is_tow_cofibrant(&t));
    assert!(is_post_fibrant(&t)?.passed && is_tow_cofibrant(&t).passed);

    // Replace the map X_2 → X_1 by zero: homology H_1 is dropped.
    let mut maps = t.maps().to_vec();
    maps[1] = zero_tower_map(t.level(2), t.level(1));
    let broken = TowerSection::new(t.levels().to_vec(), maps, t.stable_from())?;
    let fib = is_post_fibrant(&broken)?;
    let cart = is_homotopy_cartesian(&broken);
    print!("{fib}{cart}");
    assert_eq!(fib.witness_level(), Some(1));
    assert_eq!(cart.witness_level(), Some(1));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
