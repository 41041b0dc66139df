// Smith normal form and the group operations built on it.

use std::error::Error;

use tower_calculus::exactalg::group::group;
use tower_calculus::exactalg::{ext_group, group_from_presentation, hom_group, smith_normal_form, tensor_group, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!("invariant factors of {m:?}: {:?}", snf.diag);
    let diag = IntMatrix::diagonal(3, 3, &snf.diag);
    assert_eq!(&(&snf.u * &m) * &snf.v, diag);

    // Rows of m as relations on three generators.
    let a = group_from_presentation(&m);
    println!("coker m = {a}");
    let (z6, z4) = (group(0, &[6]), group(1, &[4]));
    println!("Hom({z6}, {z4}) = {}", hom_group(&z6, &z4));
    println!("Ext({z6}, {z4}) = {}", ext_group(&z6, &z4));
    println!("{z6} ⊗ {z4} = {}", tensor_group(&z6, &z4));
    assert_eq!(ext_group(&z6, &z4), group(0, &[2, 6]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
