//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower_calculus::exactalg::IntMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: u32, bound: i64) -> Vec<Vec<i64>> {
    let (r, c) = (rng.gen_range(1..=max_dim) as usize, rng.gen_range(1..=max_dim) as usize);
    (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

pub fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows_with_cols(rows, cols)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Fraction-free Gaussian elimination.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else { return 0 };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`
/// where `D_k` is the gcd of all `k × k` minors.
pub fn invariant_factors(m: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = gcd(g, det(sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// A finite abelian group `⊕ Z/m_j`, elements as residue vectors.
#[derive(Clone, Debug)]
pub struct Finite {
    pub orders: Vec<i64>,
}

impl Finite {
    pub fn size(&self) -> usize {
        self.orders.iter().product::<i64>() as usize
    }

    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &m in &self.orders {
            out = out.into_iter().flat_map(|v: Vec<i64>| (0..m).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &m) in v.iter_mut().zip(&self.orders) {
            *x = x.rem_euclid(m);
        }
    }

    pub fn library(&self) -> tower_calculus::exactalg::FpAbelianGroup {
        tower_calculus::exactalg::group::group(0, &self.orders)
    }
}

/// `#{x : d·x = 0}` for every `d` up to `max`; determines a finite abelian
/// group up to isomorphism.
pub fn torsion_counts<'a>(elements: impl Iterator<Item = &'a Vec<i64>> + Clone, orders: &[i64], max: i64) -> Vec<usize> {
    (1..=max)
        .map(|d| elements.clone().filter(|v| v.iter().zip(orders.iter().cycle()).all(|(&x, &m)| (d * x).rem_euclid(m) == 0)).count())
        .collect()
}

/// The same counts for `⊕ Z/a_i` given by invariant factors.
pub fn formula_counts(torsion: &[BigInt], max: i64) -> Vec<usize> {
    (1..=max)
        .map(|d| torsion.iter().map(|a| num_integer::Integer::gcd(&BigInt::from(d), a)).map(|g| usize::try_from(g).unwrap()).product())
        .collect()
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn det_big(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols(), "square matrix");
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a = m.to_rows();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != BigInt::from(0)) else { return BigInt::from(0) };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    &a[n - 1][n - 1] * sign
}

pub fn fixture(name: &str) -> String {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture(&format!("golden/{name}"))).expect("golden file")
}

/// `(golden file, command-line arguments)` for every frozen report.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let m = |args: &[&str]| -> Vec<String> {
        let mut v = vec!["--format".to_string(), "machine".to_string()];
        v.extend(args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }));
        v
    };
    vec![
        ("homology_moore_6.json", m(&["homology", "moore_6.json"])),
        ("homology_sphere_2.json", m(&["homology", "sphere_2.json"])),
        ("fracture_moore_6.json", m(&["fracture", "moore_6.json", "--primes-j", "2", "--primes-k", "3"])),
        ("hypercomplete_seed_7.json", m(&["hypercomplete", "--seed", "7", "--count", "50"])),
        ("milnor_times_p.json", m(&["milnor", "times_p_tower.json"])),
        ("hofib_sphere_2.json", m(&["hofib", "sphere_2.json", "--k", "1"])),
        ("homology_bad_d_squared.json", m(&["homology", "bad_d_squared.json"])),
        ("generate_seed_0.json", vec!["generate".into(), "--seed".into(), "0".into()]),
    ]
}
