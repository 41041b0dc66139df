//! Free resolution of a complex of presented groups.
//!
//! Each degree `X_n = ℤ^{g_n} / R_n` is resolved by `ℤ^{r_n} --R_n--> ℤ^{g_n}`
//! with `R_n` an injective (Hermite) relation basis, and the resolutions are
//! assembled into one free complex
//!
//! ```text
//! F_n = ℤ^{g_n} ⊕ ℤ^{r_{n−1}},    D = [  d_n   R_{n−1}  ]
//!                                     [ −k_n  −h_{n−1}  ]
//! ```
//!
//! where `d_n R_n = R_{n−1} h_n` and `d_{n−1} d_n = R_{n−2} k_n`. Both
//! identities determine `h`, `k` uniquely because the relation bases are
//! injective, and together they make `D² = 0` exactly. The augmentation
//! `F → X` projects onto the generator summand.

use std::collections::BTreeMap;

use super::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactalg::{IntMatrix, Presentation};

#[derive(Clone, Debug)]
pub struct CofibrantReplacement {
    pub complex: ChainComplex,
    /// The quasi-isomorphism `F → X`, degreewise surjective.
    pub augmentation: ChainMap,
    source: ChainComplex,
    /// Hermite relation basis per degree (`g_n × r_n`).
    rel_bases: BTreeMap<i64, IntMatrix>,
}

impl CofibrantReplacement {
    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    fn rel(&self, n: i64) -> IntMatrix {
        self.rel_bases.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(self.source.gens(n), 0))
    }

    fn rel_count(&self, n: i64) -> usize {
        self.rel_bases.get(&n).map_or(0, IntMatrix::cols)
    }

    /// Lifts `f: X → Y` to `F(X) → F(Y)` over the augmentations.
    pub fn lift(&self, f: &ChainMap, target: &CofibrantReplacement) -> Result<ChainMap> {
        if f.source() != &self.source || f.target() != &target.source {
            return Err(Error::IllFormedMap { reason: "map does not match the replaced complexes".into() });
        }
        let (x, y) = (&self.source, &target.source);
        ChainMap::from_fn(&self.complex, &target.complex, |n| {
            // [[f_n, 0], [e_n, h^f_{n−1}]]
            let (gx, rx) = (x.gens(n), self.rel_count(n - 1));
            let (gy, ry) = (y.gens(n), target.rel_count(n - 1));
            let mut m = IntMatrix::zeros(gy + ry, gx + rx);
            m.set_block(0, 0, &f.component(n));
            let ry_basis = target.rel(n - 1);
            if ry > 0 {
                let fd_df = (&f.component(n - 1) * &x.differential(n)).sub(&(&y.differential(n) * &f.component(n)));
                let e = solve_columns(&ry_basis, &fd_df);
                let hf = solve_columns(&ry_basis, &(&f.component(n - 1) * &self.rel(n - 1)));
                m.set_block(gy, 0, &e);
                m.set_block(gy, gx, &hf);
            }
            m
        })
    }
}

/// Unique solution `C` of `basis · C = rhs` for an injective `basis`.
fn solve_columns(basis: &IntMatrix, rhs: &IntMatrix) -> IntMatrix {
    let lattice = crate::exactalg::Lattice::span(basis);
    let herm = lattice.coordinates_of_columns(rhs).expect("right-hand side lies in the relation lattice");
    // `basis` is itself a Hermite basis of the same lattice (callers pass
    // Hermite bases), so the coordinates are with respect to it.
    debug_assert_eq!(lattice.basis(), basis);
    herm
}

pub fn cofibrant_replacement(x: &ChainComplex) -> CofibrantReplacement {
    let Some((lo, hi)) = x.span() else {
        return CofibrantReplacement {
            complex: ChainComplex::zero(),
            augmentation: ChainMap::identity(&ChainComplex::zero()),
            source: x.clone(),
            rel_bases: BTreeMap::new(),
        };
    };
    if x.is_degreewise_free() {
        return CofibrantReplacement {
            complex: x.clone(),
            augmentation: ChainMap::identity(x),
            source: x.clone(),
            rel_bases: BTreeMap::new(),
        };
    }
    let rel: BTreeMap<i64, IntMatrix> =
        (lo..=hi).map(|n| (n, x.group(n).relation_lattice().basis().clone())).filter(|(_, r)| r.cols() > 0).collect();
    let r = |n: i64| rel.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(x.gens(n), 0));
    // d_n R_n = R_{n−1} h_n
    let h = |n: i64| solve_columns(&r(n - 1), &(&x.differential(n) * &r(n)));
    // d_{n−1} d_n = R_{n−2} k_n
    let k = |n: i64| solve_columns(&r(n - 2), &(&x.differential(n - 1) * &x.differential(n)));

    let top = hi + 1;
    let size = |n: i64| (x.gens(n), r(n - 1).cols());
    let degrees: Vec<Presentation> = (lo..=top)
        .map(|n| {
            let (g, rr) = size(n);
            Presentation::free(g + rr)
        })
        .collect();
    let ds: Vec<IntMatrix> = (lo + 1..=top)
        .map(|n| {
            let (g, rr) = size(n);
            let (g1, rr1) = size(n - 1);
            let mut d = IntMatrix::zeros(g1 + rr1, g + rr);
            d.set_block(0, 0, &x.differential(n));
            d.set_block(0, g, &r(n - 1));
            if rr1 > 0 {
                d.set_block(g1, 0, &k(n).neg());
                d.set_block(g1, g, &h(n - 1).neg());
            }
            d
        })
        .collect();
    let complex = ChainComplex::new_unchecked(lo, degrees, ds);
    let augmentation = ChainMap::from_fn_unchecked(&complex, x, |n| {
        let (g, rr) = size(n);
        IntMatrix::identity(g).hconcat(&IntMatrix::zeros(g, rr))
    });
    CofibrantReplacement { complex, augmentation, source: x.clone(), rel_bases: rel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology::{homology, is_quasi_iso};
    use crate::exactalg::group::group;

    #[test]
    fn free_input_is_returned_unchanged() {
        let x = ChainComplex::moore(3, 2);
        let q = cofibrant_replacement(&x);
        assert_eq!(q.complex, x);
        assert!(q.augmentation.component(2).is_identity());
    }

    #[test]
    fn torsion_in_degree_zero() {
        let x = ChainComplex::concentrated(0, group(0, &[2]).presentation());
        let q = cofibrant_replacement(&x);
        assert_eq!(q.complex, ChainComplex::moore(2, 0));
        assert!(is_quasi_iso(&q.augmentation).passed);
    }

    #[test]
    fn acyclic_with_torsion() {
        // ℤ/4 --1--> ℤ/4 is acyclic.
        let c4 = group(0, &[4]).presentation();
        let x = ChainComplex::new(0, vec![c4.clone(), c4], vec![IntMatrix::identity(1)]).unwrap();
        let q = cofibrant_replacement(&x);
        assert!(q.complex.is_degreewise_free());
        assert!(homology(&q.complex).is_zero());
        assert!(is_quasi_iso(&q.augmentation).passed);
    }

    #[test]
    fn twisted_differential_needed() {
        // ℤ --2--> ℤ --1--> ℤ/2: d∘d = 2 ≡ 0 only modulo the relation.
        let degs = vec![group(0, &[2]).presentation(), Presentation::free(1), Presentation::free(1)];
        let x = ChainComplex::new(0, degs, vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let q = cofibrant_replacement(&x);
        assert!(q.complex.is_degreewise_free());
        assert!(is_quasi_iso(&q.augmentation).passed);
    }

    #[test]
    fn lifting_quotient_maps() {
        let c4 = group(0, &[4]).presentation();
        let c2 = group(0, &[2]).presentation();
        let x = ChainComplex::concentrated(0, c4);
        let y = ChainComplex::concentrated(0, c2);
        let f = ChainMap::from_fn(&x, &y, |_| IntMatrix::identity(1)).unwrap();
        let (qx, qy) = (cofibrant_replacement(&x), cofibrant_replacement(&y));
        let lifted = qx.lift(&f, &qy).unwrap();
        let lhs = lifted.then(&qy.augmentation).unwrap();
        let rhs = qx.augmentation.then(&f).unwrap();
        assert_eq!(lhs.component(0), rhs.component(0));
    }
}
