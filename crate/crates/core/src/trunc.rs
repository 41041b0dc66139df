//! Postnikov sections, connective covers and their layers.
//!
//! `P_n X` is good truncation from above: `X_n` becomes `X_n / im d_{n+1}`
//! and everything above vanishes. `C_k X` is good truncation from below:
//! `X_{k+1}` becomes `ker d_{k+1}` and everything at or below `k` vanishes.

use crate::certificate::{Certificate, Witness};
use crate::complex::{
    degreewise_cokernel, homology, homology_at, is_quasi_iso, ChainComplex, ChainMap, HomologyProfile, ShortExactSequence,
};
use crate::exactalg::lattice::preimage;
use crate::exactalg::map::SubgroupPresentation;
use crate::exactalg::{IntMatrix, Presentation};

/// The cutoff of a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    pub n: i64,
}

impl TruncationSpec {
    pub fn section(&self, x: &ChainComplex) -> Truncation {
        postnikov_section(x, self.n)
    }

    pub fn cover(&self, x: &ChainComplex) -> ConnectiveCover {
        connective_cover(x, self.n)
    }

    pub fn is_local(&self, x: &ChainComplex) -> Certificate {
        is_n_type(x, self.n)
    }
}

/// `P_n X` with the quotient `q: X → P_n X`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub n: i64,
    pub complex: ChainComplex,
    pub quotient: ChainMap,
}

pub fn postnikov_section(x: &ChainComplex, n: i64) -> Truncation {
    let p = truncate_above(x, n);
    let quotient =
        ChainMap::from_fn_unchecked(x, &p, |i| if i <= n { IntMatrix::identity(x.gens(i)) } else { IntMatrix::zeros(0, x.gens(i)) });
    Truncation { n, complex: p, quotient }
}

fn truncate_above(x: &ChainComplex, n: i64) -> ChainComplex {
    let Some((lo, hi)) = x.span() else { return ChainComplex::zero() };
    if n < lo {
        return ChainComplex::zero();
    }
    let top = hi.min(n);
    let degrees: Vec<Presentation> =
        (lo..=top).map(|i| if i == n && n < hi { x.group(i).with_relations(&x.differential(i + 1)) } else { x.group(i).clone() }).collect();
    let ds = (lo + 1..=top).map(|i| x.differential(i)).collect();
    ChainComplex::new_unchecked(lo, degrees, ds)
}

/// The canonical `P_m X → P_n X` for `m ≥ n`, identity on generators up to
/// degree `n`.
pub fn postnikov_projection(x: &ChainComplex, m: i64, n: i64) -> ChainMap {
    assert!(m >= n, "projection goes down the tower");
    let (pm, pn) = (truncate_above(x, m), truncate_above(x, n));
    ChainMap::from_fn_unchecked(
        &pm,
        &pn,
        |i| {
            if i <= n {
                IntMatrix::identity(pm.gens(i))
            } else {
                IntMatrix::zeros(pn.gens(i), pm.gens(i))
            }
        },
    )
}

/// `C_k X` with the inclusion `j: C_k X → X`.
#[derive(Clone, Debug)]
pub struct ConnectiveCover {
    pub k: i64,
    pub complex: ChainComplex,
    pub inclusion: ChainMap,
}

pub fn connective_cover(x: &ChainComplex, k: i64) -> ConnectiveCover {
    let Some((lo, hi)) = x.span() else {
        return ConnectiveCover { k, complex: x.clone(), inclusion: ChainMap::identity(x) };
    };
    if k < lo {
        return ConnectiveCover { k, complex: x.clone(), inclusion: ChainMap::identity(x) };
    }
    if k >= hi {
        let z = ChainComplex::zero();
        return ConnectiveCover { k, inclusion: ChainMap::zero(&z, x), complex: z };
    }
    let b = k + 1;
    let cycles = preimage(&x.differential(b), x.group(k).relation_lattice());
    let sub = SubgroupPresentation::new(&cycles, x.group(b).relation_lattice());
    let degrees: Vec<Presentation> = std::iter::once(sub.presentation.clone()).chain((b + 1..=hi).map(|i| x.group(i).clone())).collect();
    let ds: Vec<IntMatrix> =
        (b + 1..=hi)
            .map(|i| {
                if i == b + 1 {
                    sub.coordinates_of_columns(&x.differential(i)).expect("boundaries are cycles")
                } else {
                    x.differential(i)
                }
            })
            .collect();
    let c = ChainComplex::new_unchecked(b, degrees, ds);
    let inclusion = ChainMap::from_fn_unchecked(&c, x, |i| if i == b { sub.inclusion.clone() } else { IntMatrix::identity(x.gens(i)) });
    ConnectiveCover { k, complex: c, inclusion }
}

/// Passes iff `H_i(X) = 0` for every `i > n`.
pub fn is_n_type(x: &ChainComplex, n: i64) -> Certificate {
    let check = format!("{n}-type");
    match homology(x).truncated_below(n).iter().next() {
        None => Certificate::pass(check),
        Some((i, g)) => Certificate::fail(check, Witness::degree(i, format!("H_{i} = {g}"))),
    }
}

/// Passes iff `H_i(f)` is an isomorphism for every `i ≤ n`.
pub fn is_pn_weq(f: &ChainMap, n: i64) -> Certificate {
    let check = format!("P_{n}-equivalence");
    match crate::complex::first_non_iso_degree(f, |i| i <= n) {
        None => Certificate::pass(check),
        Some((i, why)) => Certificate::fail(check, Witness::degree(i, why)),
    }
}

/// `C_k X → X → P_k X`: the composite vanishes, `X / C_k X ≃ P_k X`, and the
/// long exact sequence of `0 → C_k X → X → X / C_k X → 0` is exact.
pub fn fiber_sequence_check(x: &ChainComplex, k: i64) -> Certificate {
    let cover = connective_cover(x, k);
    let trunc = postnikov_section(x, k);
    let composite = cover.inclusion.then(&trunc.quotient).expect("cover lands in X");
    let zero = if composite.is_zero() {
        Certificate::pass("q ∘ j = 0")
    } else {
        let deg = cover.complex.degrees().find(|&i| !composite.component_map(i).is_zero()).unwrap_or(k);
        Certificate::fail("q ∘ j = 0", Witness::degree(deg, "composite is nonzero"))
    };
    let (quot, proj) = degreewise_cokernel(&cover.inclusion);
    let comparison = ChainMap::from_fn(&quot, &trunc.complex, |i| {
        if i <= k {
            IntMatrix::identity(quot.gens(i))
        } else {
            IntMatrix::zeros(trunc.complex.gens(i), quot.gens(i))
        }
    });
    let quasi = match comparison {
        Ok(c) => {
            let mut cert = is_quasi_iso(&c);
            cert.check = "X / C_k X → P_k X quasi-isomorphism".into();
            cert
        }
        Err(e) => Certificate::fail("X / C_k X → P_k X quasi-isomorphism", Witness::note(e.to_string())),
    };
    let ses = ShortExactSequence::new(cover.inclusion.clone(), proj).expect("cokernel projection is composable");
    let sequence = Certificate::all("short exact sequence", vec![ses.degreewise_check(), ses.long_exact_sequence().exactness_check()]);
    Certificate::all(format!("fiber sequence C_{k} X → X → P_{k} X"), vec![zero, quasi, sequence])
}

/// `C_k P_{k+1} X`, an Eilenberg–Mac Lane complex on `H_{k+1} X`.
pub fn layer(x: &ChainComplex, k: i64) -> ChainComplex {
    connective_cover(&truncate_above(x, k + 1), k).complex
}

/// Checks that [`layer`] has homology `H_{k+1}(X)` in degree `k + 1` only.
pub fn layer_check(x: &ChainComplex, k: i64) -> Certificate {
    let check = format!("layer at {}", k + 1);
    let h = homology(&layer(x, k));
    let expected = HomologyProfile::from_groups([(k + 1, homology_at(x, k + 1).group().clone())]);
    if h == expected {
        return Certificate::pass(check);
    }
    let bad = h.iter().map(|(i, _)| i).chain(expected.iter().map(|(i, _)| i)).find(|&i| h.get(i) != expected.get(i));
    let i = bad.unwrap_or(k + 1);
    Certificate::fail(check, Witness::degree(i, format!("layer has H_{i} = {}, expected {}", h.get(i), expected.get(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::shift;
    use crate::exactalg::group::group;
    use crate::exactalg::FpAbelianGroup;

    #[test]
    fn sections_of_spheres() {
        assert!(postnikov_section(&ChainComplex::sphere(3), 2).complex.is_zero());
        let p = postnikov_section(&ChainComplex::sphere(3), 3);
        assert_eq!(p.complex, ChainComplex::sphere(3));
        assert!(is_quasi_iso(&p.quotient).passed);
    }

    #[test]
    fn section_of_shifted_moore() {
        let x = shift(&ChainComplex::moore(2, 0), 2);
        let p = postnikov_section(&x, 2);
        assert_eq!(homology(&p.complex), HomologyProfile::from_groups([(2, group(0, &[2]))]));
        let p = postnikov_section(&x, 1);
        assert!(p.complex.is_zero());
    }

    #[test]
    fn types_and_equivalences() {
        assert!(!is_n_type(&ChainComplex::sphere(3), 2).passed);
        assert_eq!(is_n_type(&ChainComplex::sphere(3), 2).witness_degree(), Some(3));
        assert!(is_n_type(&ChainComplex::disk(7), 2).passed);
        let x = ChainComplex::sphere(0);
        let y = crate::complex::direct_sum(&x, &ChainComplex::sphere(2));
        let p = postnikov_section(&y, 1);
        assert!(is_pn_weq(&p.quotient, 1).passed);
        assert!(!is_quasi_iso(&p.quotient).passed);
        let z = ChainMap::zero(&ChainComplex::sphere(3), &ChainComplex::zero());
        assert!(is_pn_weq(&z, 2).passed);
    }

    #[test]
    fn covers() {
        assert_eq!(connective_cover(&ChainComplex::sphere(2), 1).complex, ChainComplex::sphere(2));
        assert!(connective_cover(&ChainComplex::sphere(2), 2).complex.is_zero());
        let c = connective_cover(&ChainComplex::moore(2, 0), 0);
        assert!(homology(&c.complex).is_zero());
        // H_1 = ℤ/4 ⊕ ℤ above a cut at 0.
        let x = crate::complex::direct_sum(&ChainComplex::moore(4, 1), &ChainComplex::sphere(1));
        let x = crate::complex::direct_sum(&x, &ChainComplex::moore(3, 0));
        let c = connective_cover(&x, 0);
        assert_eq!(homology(&c.complex), HomologyProfile::from_groups([(1, group(1, &[4]))]));
    }

    #[test]
    fn fiber_sequences() {
        assert!(fiber_sequence_check(&ChainComplex::sphere(2), 1).passed);
        assert!(fiber_sequence_check(&ChainComplex::sphere(2), 2).passed);
        for k in -1..=2 {
            assert!(fiber_sequence_check(&ChainComplex::moore(5, 0), k).passed, "k = {k}");
        }
        let torsion = ChainComplex::new(
            0,
            vec![group(0, &[4]).presentation(), group(0, &[4]).presentation()],
            vec![IntMatrix::from_rows(&[vec![2]])],
        )
        .unwrap();
        assert!(fiber_sequence_check(&torsion, 0).passed);
    }

    #[test]
    fn layers() {
        assert_eq!(homology(&layer(&ChainComplex::sphere(2), 1)), HomologyProfile::from_groups([(2, FpAbelianGroup::free(1))]));
        let x = crate::complex::direct_sum(&ChainComplex::moore(4, 1), &ChainComplex::sphere(1));
        assert!(layer_check(&x, 0).passed);
        assert!(homology(&layer(&x, 2)).is_zero());
    }
}
