//! Smith normal form with unimodular transforms.
//!
//! Pivoting picks the entry of smallest nonzero magnitude in the active
//! block, which keeps intermediate coefficients small on the matrices this
//! crate produces (boundary maps with entries of a few bits).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U · M · V = diag(d)` with `U`, `V` unimodular.
///
/// `d` has `min(rows, cols)` entries: the nonzero invariants first, each
/// dividing the next, then zeros. The inverses of both transforms are
/// tracked alongside so callers never invert a matrix.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Number of nonzero invariants.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `U · M · V` with the original shape.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(self.u.rows(), self.v.cols(), &self.diag)
    }
}

struct Reducer {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    // row[dst] += k · row[src]
    fn row_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn col_add(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let x = &self.m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().is_none_or(|(_, b)| a < *b) {
                    let done = a.is_one();
                    best = Some(((i, j), a));
                    if done {
                        return best.map(|(p, _)| p);
                    }
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Clears row and column `t` outside the pivot. Returns false if some
    /// remainder was left behind and the pivot has to be re-chosen.
    fn clear_cross(&mut self, t: usize) -> bool {
        let p = self.m[(t, t)].clone();
        let mut clean = true;
        for i in t + 1..self.m.rows() {
            let x = &self.m[(i, t)];
            if x.is_zero() {
                continue;
            }
            let q = x.div_floor(&p);
            self.row_add(i, t, &-q);
            if !self.m[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.m.cols() {
            let x = &self.m[(t, j)];
            if x.is_zero() {
                continue;
            }
            let q = x.div_floor(&p);
            self.col_add(j, t, &-q);
            if !self.m[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn run(mut self) -> SnfDecomposition {
        let n = self.m.rows().min(self.m.cols());
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.smallest_pivot(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            if !self.clear_cross(t) {
                continue;
            }
            // The pivot must divide the whole remaining block; if not, fold
            // the offending row into row t and reduce again.
            let p = self.m[(t, t)].clone();
            let bad = (t + 1..self.m.rows()).find(|&i| (t + 1..self.m.cols()).any(|j| !self.m[(i, j)].is_multiple_of(&p)));
            if let Some(i) = bad {
                self.row_add(t, i, &BigInt::one());
                continue;
            }
            if self.m[(t, t)].is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
        let diag = (0..n).map(|i| self.m[(i, i)].clone()).collect();
        SnfDecomposition { diag, u: self.u, u_inv: self.u_inv, v: self.v, v_inv: self.v_inv }
    }
}

/// Smith normal form of an arbitrary integer matrix. Total: every matrix,
/// including empty ones, has a decomposition.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (r, c) = (m.rows(), m.cols());
    Reducer {
        m: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    }
    .run()
}

/// Invariant factors only.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m).diag
}

/// Determinant of a square matrix, via fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[(n - 1, n - 1)]
}
