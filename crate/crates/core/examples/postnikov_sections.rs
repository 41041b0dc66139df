// Postnikov sections, connective covers, layers and the fiber sequence.

use std::error::Error;

use tower_calculus::complex::{direct_sum, homology, shift, ChainComplex};
use tower_calculus::trunc::{connective_cover, fiber_sequence_check, is_n_type, layer, postnikov_section};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // H_0 = Z, H_1 = Z/4, H_3 = Z.
    let x = direct_sum(&ChainComplex::sphere(0), &shift(&ChainComplex::moore(4, 0), 1));
    let x = direct_sum(&x, &ChainComplex::sphere(3));
    for n in 0..=3 {
        let p = postnikov_section(&x, n);
        println!("P_{n} X: {}, {}-type: {}", homology(&p.complex), n, is_n_type(&p.complex, n).passed);
    }
    for k in 0..=2 {
        println!("C_{k} X: {}", homology(&connective_cover(&x, k).complex));
        println!("layer {}: {}", k + 1, homology(&layer(&x, k)));
    }
    let cert = fiber_sequence_check(&x, 1);
    print!("{cert}");
    assert!(cert.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
