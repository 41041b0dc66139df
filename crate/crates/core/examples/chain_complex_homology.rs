// Building complexes, computing homology, and a long exact sequence.

use std::error::Error;

use tower_calculus::complex::{homology, mapping_cone, ChainComplex, ChainMap, ShortExactSequence};
use tower_calculus::exactalg::group::group;
use tower_calculus::exactalg::{IntMatrix, Presentation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Z --(2 3)^T--> Z^2 --(3 -2)--> Z in degrees 2, 1, 0.
    let x = ChainComplex::new(
        0,
        vec![Presentation::free(1), Presentation::free(2), Presentation::free(1)],
        vec![IntMatrix::from_rows(&[vec![3, -2]]), IntMatrix::from_rows(&[vec![2], vec![3]])],
    )?;
    for (i, g) in homology(&x).iter() {
        println!("H_{i} = {g}");
    }
    assert!(homology(&x).is_zero());

    let s = ChainComplex::sphere(0);
    let two = ChainMap::new(s.clone(), s.clone(), vec![IntMatrix::from_rows(&[vec![2]])])?;
    let cone = mapping_cone(&two);
    println!("cone of 2 on Z[0]: H_0 = {}", homology(&cone).get(0));

    // 0 → Z --2--> Z → Z/2 → 0 in degree 0.
    let z2 = ChainComplex::concentrated(0, group(0, &[2]).presentation());
    let p = ChainMap::new(s, z2, vec![IntMatrix::identity(1)])?;
    let les = ShortExactSequence::new(two, p)?.long_exact_sequence();
    let cert = les.exactness_check();
    print!("{cert}");
    assert!(cert.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
