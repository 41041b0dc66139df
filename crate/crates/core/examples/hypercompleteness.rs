// X is the limit of its Postnikov tower; Milnor sequences; a tower whose
// images never stabilize.

use std::error::Error;

use tower_calculus::complex::{direct_sum, homology, ChainComplex};
use tower_calculus::exactalg::group::group;
use tower_calculus::exactalg::{mittag_leffler_diagnostic, IntMatrix, MittagLeffler};
use tower_calculus::holimcalc::{generator_commutation_check, hypercomplete_check, milnor_check, tower_limit};
use tower_calculus::sections::postnikov_tower;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let x = direct_sum(&ChainComplex::moore(6, 1), &ChainComplex::sphere(3));
    print!("{}", hypercomplete_check(&x));
    let t = postnikov_tower(&x, 4);
    println!("lim: {}", homology(&tower_limit(&t)?.complex));
    for i in 0..=3 {
        assert!(milnor_check(&t, i)?.passed);
    }
    for n in 0..=3 {
        assert!(generator_commutation_check(1, &x, n)?.passed);
    }

    // Z ← Z ← Z ← … by multiplication by 3.
    let z = group(1, &[]);
    let maps = vec![IntMatrix::from_rows(&[vec![3]]); 5];
    let diag = mittag_leffler_diagnostic(&vec![z; 6], &maps, 5)?;
    println!("×3 tower: {diag:?}");
    assert_eq!(diag, MittagLeffler::NotStabilizedWithin(5));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
