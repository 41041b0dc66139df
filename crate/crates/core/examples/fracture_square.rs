// Reassembling homology from its localizations at complementary primes.

use std::error::Error;

use tower_calculus::complex::{direct_sum, ChainComplex};
use tower_calculus::fracture::{arithmetic_square_check, localize_homology, reassemble, LocalRing, PrimePartition};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x = direct_sum(&ChainComplex::moore(6, 0), &ChainComplex::sphere(0));
    let x = direct_sum(&x, &ChainComplex::moore(5, 1));
    for ring in [LocalRing::new([2])?, LocalRing::new([3, 5])?, LocalRing::rationals()] {
        for (i, g) in localize_homology(&x, &ring) {
            println!("H_{i} over {ring}: rank {}, torsion {}", g.rank, g.torsion_group());
        }
    }
    for p in PrimePartition::balanced_splits(&[2, 3, 5]) {
        let cert = arithmetic_square_check(&x, &p)?;
        assert!(cert.passed);
        let h0 = tower_calculus::complex::homology_at(&x, 0).group().clone();
        println!("{} / {}: H_0 reassembled as {}", p.j, p.k, reassemble(&h0, &p)?.pullback);
    }
    let small = PrimePartition::new([2], [3])?;
    println!("{}", arithmetic_square_check(&x, &small).unwrap_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
