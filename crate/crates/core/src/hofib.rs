//! Homotopy fibers of the truncations `X → P_k X`.
//!
//! A map `f: X → Y` factors as `X → X' = X ⊕ ⨁ 𝔻 → Y` with one disk per
//! generator `y` of `Y` (top cell ↦ `y`, bottom cell ↦ `d y`). The first map
//! is a quasi-isomorphism with free cokernel, the second is degreewise
//! surjective, so its degreewise kernel is the homotopy fiber.

use crate::certificate::{Certificate, Witness};
use crate::complex::{degreewise_pullback, direct_sum, homology, is_quasi_iso, ChainComplex, ChainMap, ComplexPullback};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::sections::{is_cofibration, CospanSection, VertexTag};
use crate::trunc::{connective_cover, is_pn_weq, layer_check, postnikov_projection, postnikov_section};

/// `X --i--> X' --p--> Y` with `i` a trivial cofibration and `p` surjective.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub middle: ChainComplex,
    pub cofibration: ChainMap,
    pub fibration: ChainMap,
}

/// `⨁_{y} 𝔻(y) → Y`, one disk per generator: acyclic and degreewise
/// surjective.
fn disk_cover(y: &ChainComplex) -> (ChainComplex, ChainMap) {
    let disks = y
        .degrees()
        .flat_map(|n| (0..y.gens(n)).map(move |_| ChainComplex::disk(n)))
        .fold(ChainComplex::zero(), |acc, d| direct_sum(&acc, &d));
    // Disks are summed in ascending degree, so degree `n` holds the top cells
    // of the disks on `Y_n` followed by the bottom cells of those on `Y_{n+1}`.
    let map = ChainMap::from_fn(&disks, y, |n| {
        let mut m = IntMatrix::zeros(y.gens(n), disks.gens(n));
        m.set_block(0, 0, &IntMatrix::identity(y.gens(n)));
        m.set_block(0, y.gens(n), &y.differential(n + 1));
        m
    })
    .expect("disk cover is a chain map");
    (disks, map)
}

pub fn factor_map(f: &ChainMap) -> Factorization {
    let (x, y) = (f.source(), f.target());
    let (disks, cover) = disk_cover(y);
    let middle = direct_sum(x, &disks);
    let cofibration =
        ChainMap::from_fn(x, &middle, |n| IntMatrix::identity(x.gens(n)).vconcat(&IntMatrix::zeros(disks.gens(n), x.gens(n))))
            .expect("summand inclusion");
    let fibration = ChainMap::from_fn(&middle, y, |n| f.component(n).hconcat(&cover.component(n))).expect("sum of chain maps");
    Factorization { middle, cofibration, fibration }
}

/// The section `* → P_k X ← X'` with the factorization of the truncation.
#[derive(Clone, Debug)]
pub struct HofibSection {
    pub k: i64,
    pub section: CospanSection,
    pub factorization: Factorization,
    fiber: ComplexPullback,
}

impl HofibSection {
    /// `X'`, vertex 2.
    pub fn total(&self) -> &ChainComplex {
        &self.factorization.middle
    }

    /// Degreewise kernel of `X' → P_k X`.
    pub fn fiber(&self) -> &ChainComplex {
        &self.fiber.complex
    }

    /// Inclusion of the fiber into `X'`.
    pub fn fiber_inclusion(&self) -> &ChainMap {
        &self.fiber.to_a
    }

    /// The same cospan with `*` replaced by an acyclic complex that covers
    /// `P_k X`, so both legs are fibrations.
    pub fn fibrant_adjustment(&self) -> CospanSection {
        let p = self.section.x0();
        let (_, cover) = disk_cover(p);
        CospanSection::new(cover, self.section.right.clone(), self.section.tags.clone()).expect("both legs end at P_k X")
    }
}

fn require_free(x: &ChainComplex) -> Result<()> {
    match x.first_relation_degree() {
        Some(degree) => Err(Error::NotCofibrant { degree }),
        None => Ok(()),
    }
}

pub fn build_hofib_section(x: &ChainComplex, k: i64) -> Result<HofibSection> {
    require_free(x)?;
    let trunc = postnikov_section(x, k);
    let factorization = factor_map(&trunc.quotient);
    let star = ChainComplex::zero();
    let left = ChainMap::zero(&star, &trunc.complex);
    let tags = [VertexTag::Truncated(k), VertexTag::Plain, VertexTag::Plain];
    let section = CospanSection::new(left.clone(), factorization.fibration.clone(), tags)?;
    let fiber = degreewise_pullback(&factorization.fibration, &left)?;
    Ok(HofibSection { k, section, factorization, fiber })
}

/// Colocality (`H_i X = 0` for `i ≤ k`) against `* → X` being a
/// `P_k`-equivalence.
pub fn compatibility_sides(x: &ChainComplex, k: i64) -> (Certificate, Certificate) {
    let colocal = match homology(x).iter().find(|&(i, _)| i <= k) {
        None => Certificate::pass(format!("Z[{}]-colocal", k + 1)),
        Some((i, g)) => Certificate::fail(format!("Z[{}]-colocal", k + 1), Witness::degree(i, format!("H_{i} = {g}"))),
    };
    let star = ChainMap::zero(&ChainComplex::zero(), x);
    let mut local = is_pn_weq(&star, k);
    local.check = format!("* → X is a P_{k}-equivalence");
    (colocal, local)
}

pub fn compatibility_check(k: i64, corpus: &[ChainComplex]) -> Result<Certificate> {
    let mut children = Vec::new();
    for (idx, x) in corpus.iter().enumerate() {
        require_free(x)?;
        let (colocal, local) = compatibility_sides(x, k);
        let agree = colocal.passed == local.passed;
        let check = format!("complex {idx}: colocal ⇔ P_{k}-acyclic");
        let cert = if agree {
            Certificate::pass(check).with_note(format!("both sides {}", if colocal.passed { "hold" } else { "fail" }))
        } else {
            Certificate::fail(check, Witness::note(format!("colocal {}, P_{k}-equivalence {}", colocal.passed, local.passed)).at_level(idx))
        };
        children.push(Certificate { children: vec![colocal, local], ..cert });
    }
    Ok(Certificate::all(format!("compatibility of P_{k} and C_{k}"), children))
}

/// `X → X'` is a quasi-isomorphism and `C_k X → fiber(X' → P_k X)` is one.
pub fn derived_counit_check(x: &ChainComplex, k: i64) -> Result<Certificate> {
    let h = build_hofib_section(x, k)?;
    let mut unit = is_quasi_iso(&h.factorization.cofibration);
    unit.check = "X → X' is a quasi-isomorphism".into();
    let cofib = is_cofibration(&h.factorization.cofibration);
    let cover = connective_cover(x, k);
    let into_total = cover.inclusion.then(&h.factorization.cofibration)?;
    let to_star = ChainMap::zero(&cover.complex, h.section.x1());
    let comparison = h.fiber.lift(&into_total, &to_star)?;
    let mut fiber = is_quasi_iso(&comparison);
    fiber.check = format!("C_{k} X → hofib(X' → P_{k} X) is a quasi-isomorphism");
    Ok(Certificate::all(format!("derived counit at k = {k}"), vec![unit, cofib, fiber]))
}

/// The fiber of `P_{k+1} X → P_k X`, computed through the same
/// factorization.
pub fn layer_fiber(x: &ChainComplex, k: i64) -> ChainComplex {
    let f = postnikov_projection(x, k + 1, k);
    let fac = factor_map(&f);
    let star = ChainMap::zero(&ChainComplex::zero(), f.target());
    degreewise_pullback(&fac.fibration, &star).expect("common target").complex
}

/// The fiber of `P_{k+1} X → P_k X` has homology `H_{k+1}(X)` in degree
/// `k + 1` only, and agrees with the layer `C_k P_{k+1} X`.
pub fn layer_equivalence_check(x: &ChainComplex, k: i64) -> Result<Certificate> {
    require_free(x)?;
    let fib = homology(&layer_fiber(x, k));
    let expected = crate::complex::HomologyProfile::from_groups([(k + 1, crate::complex::homology_at(x, k + 1).group().clone())]);
    let check = format!("fiber of P_{} X → P_{k} X is K(H_{}, {})", k + 1, k + 1, k + 1);
    let concentrated = if fib == expected {
        Certificate::pass(check)
    } else {
        let i = fib.iter().map(|(i, _)| i).chain([k + 1]).find(|&i| fib.get(i) != expected.get(i)).unwrap_or(k + 1);
        Certificate::fail(check, Witness::degree(i, format!("fiber has H_{i} = {}, expected {}", fib.get(i), expected.get(i))))
    };
    Ok(Certificate::all(format!("layer equivalence at k = {k}"), vec![concentrated, layer_check(x, k)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{shift, HomologyProfile};
    use crate::exactalg::group::group;
    use crate::sections::cospan_fibrant_check;

    #[test]
    fn factorization_shape() {
        let x = direct_sum(&ChainComplex::moore(3, 1), &ChainComplex::sphere(0));
        let t = postnikov_section(&x, 1);
        let f = factor_map(&t.quotient);
        assert!(is_quasi_iso(&f.cofibration).passed);
        assert!(is_cofibration(&f.cofibration).passed);
        assert!(f.fibration.first_non_surjective_degree(i64::MIN).is_none());
    }

    #[test]
    fn sphere_sections() {
        for k in 0..4 {
            let h = build_hofib_section(&ChainComplex::sphere(2), k).unwrap();
            let expected = homology(&connective_cover(&ChainComplex::sphere(2), k).complex);
            assert_eq!(homology(h.fiber()), expected, "k = {k}");
            assert!(derived_counit_check(&ChainComplex::sphere(2), k).unwrap().passed);
        }
    }

    #[test]
    fn moore_across_the_cut() {
        let x = ChainComplex::moore(2, 1);
        let h = build_hofib_section(&x, 1).unwrap();
        assert!(homology(h.fiber()).is_zero());
        let cert = derived_counit_check(&x, 0).unwrap();
        assert!(cert.passed, "{cert}");
        assert!(cospan_fibrant_check(&h.fibrant_adjustment()).passed);
    }

    #[test]
    fn torsion_input_is_rejected() {
        let x = ChainComplex::concentrated(0, group(0, &[2]).presentation());
        assert!(matches!(build_hofib_section(&x, 0), Err(Error::NotCofibrant { degree: 0 })));
    }

    #[test]
    fn compatibility() {
        let k = 1;
        let (c, l) = compatibility_sides(&ChainComplex::sphere(k + 1), k);
        assert!(c.passed && l.passed);
        let (c, l) = compatibility_sides(&ChainComplex::sphere(k), k);
        assert!(!c.passed && !l.passed);
        let x = direct_sum(&ChainComplex::moore(3, k), &ChainComplex::sphere(k + 2));
        let (c, l) = compatibility_sides(&x, k);
        assert_eq!((c.witness_degree(), l.witness_degree()), (Some(k), Some(k)));
        assert!(compatibility_check(k, &[x, ChainComplex::sphere(0), ChainComplex::zero()]).unwrap().passed);
    }

    #[test]
    fn layers() {
        let k = 1;
        let x = direct_sum(&ChainComplex::sphere(k + 1), &ChainComplex::sphere(k + 3));
        assert_eq!(homology(&layer_fiber(&x, k)), HomologyProfile::from_groups([(k + 1, group(1, &[]))]));
        assert!(layer_equivalence_check(&x, k).unwrap().passed);
        assert!(homology(&layer_fiber(&ChainComplex::sphere(k + 3), k)).is_zero());
        let m = shift(&ChainComplex::moore(4, 0), k + 1);
        assert_eq!(homology(&layer_fiber(&m, k)), HomologyProfile::from_groups([(k + 1, group(0, &[4]))]));
        assert!(layer_equivalence_check(&m, k).unwrap().passed);
    }
}
