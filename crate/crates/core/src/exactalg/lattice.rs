//! Sublattices of ℤⁿ in Hermite normal form.
//!
//! Every subgroup, relation module and image in this crate is ultimately a
//! lattice spanned by integer columns. Keeping them in column Hermite form
//! makes equality structural, which is what exactness witnesses compare.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;

/// A sublattice of `ℤ^ambient`, stored as a column Hermite basis.
///
/// Basis column `k` has its leading nonzero entry (the pivot, positive) in
/// row `pivots[k]`, pivot rows strictly increase, and entries to the left of
/// a pivot in its row are reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: IntMatrix::zeros(ambient, 0), pivots: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice { ambient, basis: IntMatrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Lattice spanned by the columns of `gens`.
    pub fn span(gens: &IntMatrix) -> Self {
        let n = gens.rows();
        let mut a = gens.clone();
        let m = a.cols();
        let mut c = 0;
        let mut pivots = Vec::new();
        for i in 0..n {
            if c == m {
                break;
            }
            // Fold every column c+1.. into column c along row i.
            for j in c + 1..m {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if a[(i, c)].is_zero() {
                    a.swap_cols(c, j);
                    continue;
                }
                let (x, y) = (a[(i, c)].clone(), a[(i, j)].clone());
                let e = x.extended_gcd(&y);
                let (xa, ya) = (&x / &e.gcd, &y / &e.gcd);
                a.combine_cols(c, j, [&e.x, &e.y, &-ya, &xa]);
            }
            if a[(i, c)].is_zero() {
                continue;
            }
            if a[(i, c)].is_negative() {
                a.negate_col(c);
            }
            let p = a[(i, c)].clone();
            for j in 0..c {
                let q = a[(i, j)].div_floor(&p);
                if !q.is_zero() {
                    a.add_col_multiple(j, c, &-q);
                }
            }
            pivots.push(i);
            c += 1;
        }
        let basis = a.select_columns(&(0..c).collect::<Vec<_>>());
        Lattice { ambient: n, basis, pivots }
    }

    pub fn span_of(ambient: usize, vectors: &[Vec<BigInt>]) -> Self {
        Self::span(&IntMatrix::from_columns(ambient, vectors))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis columns, `ambient × rank`.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient && (0..self.rank()).all(|k| num_traits::One::is_one(&self.basis[(k, k)]))
    }

    /// Coordinates of `v` in the Hermite basis, or `None` if `v` is not in
    /// the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient rank");
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut next_row = 0;
        for (k, &row) in self.pivots.iter().enumerate() {
            if rest[next_row..row].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let p = &self.basis[(row, k)];
            let (q, r) = rest[row].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, x) in rest.iter_mut().enumerate().take(self.ambient).skip(row) {
                    let b = &self.basis[(i, k)];
                    if !b.is_zero() {
                        *x -= &q * b;
                    }
                }
            }
            coords.push(q);
            next_row = row + 1;
        }
        if rest[next_row..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of every column of `m`, as a `rank × m.cols()` matrix.
    pub fn coordinates_of_columns(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols: Option<Vec<Vec<BigInt>>> = m.columns().iter().map(|c| self.coordinates(c)).collect();
        Some(IntMatrix::from_columns(self.rank(), &cols?))
    }

    pub fn contains_columns(&self, m: &IntMatrix) -> bool {
        m.columns().iter().all(|c| self.contains(c))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.contains_columns(&other.basis)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::span(&self.basis.hconcat(&other.basis))
    }

    /// Image of the lattice under `f`.
    pub fn image_under(&self, f: &IntMatrix) -> Lattice {
        Lattice::span(&(f * &self.basis))
    }
}

/// `{x ∈ ℤⁿ : f·x ∈ target}` for `f: ℤⁿ → ℤᵐ`.
pub fn preimage(f: &IntMatrix, target: &Lattice) -> Lattice {
    let n = f.cols();
    assert_eq!(f.rows(), target.ambient(), "preimage: target lattice has the wrong ambient rank");
    // Kernel of [f | -B] projected onto the first n coordinates.
    let stacked = f.hconcat(&target.basis().neg());
    let s = smith_normal_form(&stacked);
    let r = s.rank();
    let total = stacked.cols();
    let kernel: Vec<Vec<BigInt>> = (r..total).map(|j| s.v.column(j)[..n].to_vec()).collect();
    Lattice::span_of(n, &kernel)
}

/// An integer solution of `m·x = v`, if one exists.
pub fn solve(m: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), v.len(), "solve: right-hand side has the wrong length");
    let s = smith_normal_form(m);
    let uv = s.u.mul_vec(v);
    let r = s.rank();
    if uv[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); m.cols()];
    for j in 0..r {
        let (q, rem) = uv[j].div_rem(&s.diag[j]);
        if !rem.is_zero() {
            return None;
        }
        y[j] = q;
    }
    Some(s.v.mul_vec(&y))
}

/// Kernel of `f` as a sublattice of its domain.
pub fn kernel(f: &IntMatrix) -> Lattice {
    preimage(f, &Lattice::zero(f.rows()))
}
