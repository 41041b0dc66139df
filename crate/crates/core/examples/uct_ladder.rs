// The universal coefficient ladder and where truncation fails to commute
// with Hom.

use std::error::Error;

use tower_calculus::complex::{shift, ChainComplex};
use tower_calculus::holimcalc::uct_ladder;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // H_0 M = Z/2 and H_2 N = Z/2: the Ext corner at n = 1 is Z/2.
    let m = ChainComplex::moore(2, 0);
    let n = shift(&ChainComplex::moore(2, 0), 2);
    let ladder = uct_ladder(&m, &n, 1)?;
    for r in &ladder.rows {
        println!("i = {}: Ext {} Hom {} | H {} vs {}", r.i, r.ext, r.hom, r.direct, r.direct_truncated);
    }
    print!("{}", ladder.certificate);
    let (full, truncated) = ladder.discrepancy.clone().expect("the Ext corner is nonzero");
    println!("at n = 1: {full} vs {truncated}");

    let clean = uct_ladder(&ChainComplex::sphere(0), &n, 1)?;
    assert!(clean.discrepancy.is_none());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
