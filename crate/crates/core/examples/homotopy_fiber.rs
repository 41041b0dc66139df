// The homotopy fiber of X → P_k X is the connective cover C_k X.

use std::error::Error;

use tower_calculus::complex::{direct_sum, homology, ChainComplex};
use tower_calculus::hofib::{build_hofib_section, compatibility_check, derived_counit_check};
use tower_calculus::trunc::connective_cover;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x = direct_sum(&ChainComplex::moore(3, 0), &ChainComplex::sphere(2));
    let x = direct_sum(&x, &ChainComplex::disk(1));
    for k in -1..=2 {
        let h = build_hofib_section(&x, k)?;
        let fiber = homology(h.fiber());
        println!("k = {k}: hofib {fiber}, C_k X {}", homology(&connective_cover(&x, k).complex));
        assert_eq!(fiber, homology(&connective_cover(&x, k).complex));
        assert!(derived_counit_check(&x, k)?.passed);
    }
    print!("{}", compatibility_check(1, &[x, ChainComplex::sphere(2), ChainComplex::sphere(0)])?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
