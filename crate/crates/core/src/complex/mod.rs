//! Bounded chain complexes of finitely presented abelian groups.
//!
//! Grading is homological: `d_n` goes from degree `n` to degree `n − 1`.
//! The group in degree `n` is `ℤ^{g_n} / R_n`, and `d_n` is a
//! `g_{n−1} × g_n` integer matrix on generators.

mod homology;
mod les;
mod ops;
mod replacement;

use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::exactalg::{GroupMap, IntMatrix, Presentation};

pub(crate) use homology::{first_non_iso_degree, joint_degrees};
pub use homology::{homology, homology_at, induced_map, is_quasi_iso, HomologyGroup, HomologyProfile};
pub use les::{LesArrow, LongExactSequence, ShortExactSequence};
pub use ops::{degreewise_cokernel, degreewise_pullback, direct_sum, hom_complex, mapping_cone, shift, ComplexPullback};
pub use replacement::{cofibrant_replacement, CofibrantReplacement};

static EMPTY: LazyLock<Presentation> = LazyLock::new(|| Presentation::free(0));

#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex {
    min_deg: i64,
    degrees: Vec<Presentation>,
    /// `differentials[k]` is `d` out of degree `min_deg + k`.
    differentials: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Builds and validates a complex. `differentials[k]` is the matrix of
    /// `d_{min_deg + k + 1}` (so there is one fewer than there are degrees).
    ///
    /// Checks shapes, that each `d` sends relations to relations, and that
    /// `d ∘ d = 0` modulo relations. Zero groups at either end are trimmed.
    pub fn new(min_deg: i64, degrees: Vec<Presentation>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if degrees.is_empty() {
            return Ok(Self::zero());
        }
        if differentials.len() + 1 != degrees.len() {
            return Err(Error::Validation {
                location: "chain complex".into(),
                reason: format!("{} degrees need {} differentials, got {}", degrees.len(), degrees.len() - 1, differentials.len()),
            });
        }
        let mut ds = Vec::with_capacity(degrees.len());
        ds.push(IntMatrix::zeros(0, degrees[0].gens()));
        ds.extend(differentials);
        let x = ChainComplex { min_deg, degrees, differentials: ds };
        x.validate()?;
        Ok(x.trimmed())
    }

    /// Skips validation; for constructions that are correct by design and
    /// re-checked in debug builds.
    pub(crate) fn new_unchecked(min_deg: i64, degrees: Vec<Presentation>, differentials: Vec<IntMatrix>) -> Self {
        if degrees.is_empty() {
            return Self::zero();
        }
        let mut ds = Vec::with_capacity(degrees.len());
        ds.push(IntMatrix::zeros(0, degrees[0].gens()));
        ds.extend(differentials);
        let x = ChainComplex { min_deg, degrees, differentials: ds };
        debug_assert!(x.validate().is_ok(), "internal construction produced an invalid complex: {:?}", x.validate());
        x.trimmed()
    }

    fn validate(&self) -> Result<()> {
        for (k, d) in self.differentials.iter().enumerate().skip(1) {
            let deg = self.min_deg + k as i64;
            let (src, tgt) = (&self.degrees[k], &self.degrees[k - 1]);
            if d.rows() != tgt.gens() || d.cols() != src.gens() {
                return Err(Error::ShapeMismatch {
                    context: format!("differential d_{deg}"),
                    expected: (tgt.gens(), src.gens()),
                    found: (d.rows(), d.cols()),
                });
            }
            if !tgt.relation_lattice().contains_columns(&(d * src.relations())) {
                return Err(Error::Validation {
                    location: format!("degree {deg}"),
                    reason: format!("d_{deg} does not send relations to relations"),
                });
            }
            if k >= 2 {
                let dd = &self.differentials[k - 1] * d;
                if !self.degrees[k - 2].relation_lattice().contains_columns(&dd) {
                    return Err(Error::Validation {
                        location: format!("degree {deg}"),
                        reason: format!("d_{} ∘ d_{deg} is not zero", deg - 1),
                    });
                }
            }
        }
        Ok(())
    }

    fn trimmed(mut self) -> Self {
        while self.degrees.last().is_some_and(|p| p.gens() == 0) {
            self.degrees.pop();
            self.differentials.pop();
        }
        let lead = self.degrees.iter().take_while(|p| p.gens() == 0).count();
        if lead == self.degrees.len() {
            return Self::zero();
        }
        if lead > 0 {
            self.degrees.drain(..lead);
            self.differentials.drain(..lead);
            self.differentials[0] = IntMatrix::zeros(0, self.degrees[0].gens());
            self.min_deg += lead as i64;
        }
        self
    }

    pub fn zero() -> Self {
        ChainComplex { min_deg: 0, degrees: vec![], differentials: vec![] }
    }

    /// `ℤ[n]`: a single free generator in degree `n`.
    pub fn sphere(n: i64) -> Self {
        Self::concentrated(n, Presentation::free(1))
    }

    /// `𝔻^n`: `ℤ` in degrees `n` and `n − 1` joined by the identity.
    pub fn disk(n: i64) -> Self {
        Self::new_unchecked(n - 1, vec![Presentation::free(1), Presentation::free(1)], vec![IntMatrix::identity(1)])
    }

    /// `ℤ --·m--> ℤ` in degrees `n + 1`, `n`; homology `ℤ/m` in degree `n`.
    pub fn moore(m: i64, n: i64) -> Self {
        Self::new_unchecked(n, vec![Presentation::free(1), Presentation::free(1)], vec![IntMatrix::from_rows(&[vec![m]])])
    }

    /// A single presented group in degree `n`.
    pub fn concentrated(n: i64, group: Presentation) -> Self {
        Self::new_unchecked(n, vec![group], vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Lowest degree with generators (0 for the zero complex).
    pub fn min_degree(&self) -> i64 {
        self.min_deg
    }

    /// Highest degree with generators (`min_degree − 1` for the zero complex).
    pub fn max_degree(&self) -> i64 {
        self.min_deg + self.degrees.len() as i64 - 1
    }

    /// `(min, max)` degrees carrying generators, `None` for the zero complex.
    pub fn span(&self) -> Option<(i64, i64)> {
        (!self.is_zero()).then(|| (self.min_degree(), self.max_degree()))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.min_deg..=self.max_degree()
    }

    fn index(&self, deg: i64) -> Option<usize> {
        let k = deg - self.min_deg;
        (k >= 0 && (k as usize) < self.degrees.len()).then_some(k as usize)
    }

    pub fn group(&self, deg: i64) -> &Presentation {
        self.index(deg).map_or(&EMPTY, |k| &self.degrees[k])
    }

    pub fn gens(&self, deg: i64) -> usize {
        self.group(deg).gens()
    }

    /// `d_deg` as a `gens(deg − 1) × gens(deg)` matrix (zero-sized outside
    /// the span).
    pub fn differential(&self, deg: i64) -> IntMatrix {
        match self.index(deg) {
            Some(k) if k > 0 => self.differentials[k].clone(),
            _ => IntMatrix::zeros(self.gens(deg - 1), self.gens(deg)),
        }
    }

    pub fn is_degreewise_free(&self) -> bool {
        self.degrees.iter().all(Presentation::is_free)
    }

    /// First degree whose group has relations.
    pub fn first_relation_degree(&self) -> Option<i64> {
        self.degrees().find(|&n| !self.group(n).is_free())
    }

    /// The differential out of `deg` as a group map.
    pub fn differential_map(&self, deg: i64) -> GroupMap {
        GroupMap::new(self.group(deg).clone(), self.group(deg - 1).clone(), self.differential(deg))
            .expect("validated complexes have well-defined differentials")
    }

    /// Document-shaped parts: `(min_deg, groups, [d_{min+1}, …, d_max])`.
    pub fn parts(&self) -> (i64, &[Presentation], &[IntMatrix]) {
        let ds = if self.differentials.is_empty() { &self.differentials[..] } else { &self.differentials[1..] };
        (self.min_deg, &self.degrees, ds)
    }
}

impl std::fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainComplex {{")?;
        for n in self.degrees() {
            write!(f, " [{n}: {:?}, d={}]", self.group(n), self.differential(n))?;
        }
        write!(f, " }}")
    }
}

/// A chain map, one integer matrix per degree of the source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    /// `components[k]` acts on degree `source.min_degree() + k`.
    components: Vec<IntMatrix>,
}

impl ChainMap {
    /// Builds and validates a chain map from components indexed by source
    /// degree, starting at `source.min_degree()`.
    pub fn new(source: ChainComplex, target: ChainComplex, components: Vec<IntMatrix>) -> Result<Self> {
        let f = ChainMap { source, target, components };
        f.validate()?;
        Ok(f)
    }

    /// Builds from a per-degree closure over the source span.
    pub fn from_fn(source: &ChainComplex, target: &ChainComplex, mut comp: impl FnMut(i64) -> IntMatrix) -> Result<Self> {
        let components = source.degrees().map(&mut comp).collect();
        Self::new(source.clone(), target.clone(), components)
    }

    pub(crate) fn from_fn_unchecked(source: &ChainComplex, target: &ChainComplex, comp: impl FnMut(i64) -> IntMatrix) -> Self {
        let f = ChainMap { source: source.clone(), target: target.clone(), components: source.degrees().map(comp).collect() };
        debug_assert!(f.validate().is_ok(), "internal construction produced an invalid chain map: {:?}", f.validate());
        f
    }

    fn validate(&self) -> Result<()> {
        let expected = if self.source.is_zero() { 0 } else { self.source.degrees.len() };
        if self.components.len() != expected {
            return Err(Error::Validation {
                location: "chain map".into(),
                reason: format!("expected {expected} components, got {}", self.components.len()),
            });
        }
        for n in self.source.degrees() {
            let f = self.component(n);
            let (s, t) = (self.source.group(n), self.target.group(n));
            if f.rows() != t.gens() || f.cols() != s.gens() {
                return Err(Error::ShapeMismatch {
                    context: format!("chain map component in degree {n}"),
                    expected: (t.gens(), s.gens()),
                    found: (f.rows(), f.cols()),
                });
            }
            if !t.relation_lattice().contains_columns(&(&f * s.relations())) {
                return Err(Error::IllFormedMap { reason: format!("degree {n} component does not respect relations") });
            }
        }
        for n in self.source.degrees() {
            let lhs = &self.component(n - 1) * &self.source.differential(n);
            let rhs = &self.target.differential(n) * &self.component(n);
            if !self.target.group(n - 1).relation_lattice().contains_columns(&lhs.sub(&rhs)) {
                return Err(Error::IllFormedMap { reason: format!("does not commute with d_{n}") });
            }
        }
        Ok(())
    }

    pub fn identity(x: &ChainComplex) -> Self {
        Self::from_fn_unchecked(x, x, |n| IntMatrix::identity(x.gens(n)))
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        Self::from_fn_unchecked(source, target, |n| IntMatrix::zeros(target.gens(n), source.gens(n)))
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// Component in degree `n` (`gens_target(n) × gens_source(n)`).
    pub fn component(&self, n: i64) -> IntMatrix {
        match self.source.index(n) {
            Some(k) => self.components[k].clone(),
            None => IntMatrix::zeros(self.target.gens(n), self.source.gens(n)),
        }
    }

    pub fn component_map(&self, n: i64) -> GroupMap {
        GroupMap::new(self.source.group(n).clone(), self.target.group(n).clone(), self.component(n))
            .expect("validated chain maps respect relations")
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.target != other.source {
            return Err(Error::IllFormedMap { reason: "composed chain maps are not composable".into() });
        }
        ChainMap::from_fn(&self.source, &other.target, |n| &other.component(n) * &self.component(n))
    }

    /// Zero modulo target relations in every degree.
    pub fn is_zero(&self) -> bool {
        self.source.degrees().all(|n| self.target.group(n).relation_lattice().contains_columns(&self.component(n)))
    }

    /// Degrees (in the source span) where the component is not injective.
    pub fn first_non_injective_degree(&self) -> Option<i64> {
        self.source.degrees().find(|&n| !self.component_map(n).is_injective())
    }

    /// First degree `n ≥ from` where the component is not surjective. Scans
    /// the target span.
    pub fn first_non_surjective_degree(&self, from: i64) -> Option<i64> {
        self.target.degrees().filter(|&n| n >= from).find(|&n| !self.component_map(n).is_surjective())
    }

    /// First degree where `self` and `other` differ modulo target relations.
    pub fn first_disagreement(&self, other: &ChainMap) -> Option<i64> {
        let lo = self.source.min_degree().min(other.source.min_degree());
        let hi = self.source.max_degree().max(other.source.max_degree());
        (lo..=hi).find(|&n| {
            let diff = self.component(n).sub(&other.component(n));
            !self.target.group(n).relation_lattice().contains_columns(&diff)
        })
    }

    /// Degreewise isomorphism of complexes.
    pub fn is_isomorphism(&self) -> bool {
        let lo = self.source.min_degree().min(self.target.min_degree());
        let hi = self.source.max_degree().max(self.target.max_degree());
        (lo..=hi).all(|n| self.component_map(n).is_isomorphism())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::group::group;

    #[test]
    fn d_squared_rejected() {
        let ds = vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![1]])];
        let err = ChainComplex::new(0, vec![Presentation::free(1); 3], ds).unwrap_err();
        match err {
            Error::Validation { location, .. } => assert_eq!(location, "degree 2"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn d_squared_zero_modulo_relations_is_accepted() {
        // ℤ --1--> ℤ --1--> ℤ/1... use ℤ --2--> ℤ --1--> ℤ/2.
        let ds = vec![IntMatrix::from_rows(&[vec![1]]), IntMatrix::from_rows(&[vec![2]])];
        let degs = vec![group(0, &[2]).presentation(), Presentation::free(1), Presentation::free(1)];
        assert!(ChainComplex::new(0, degs, ds).is_ok());
    }

    #[test]
    fn trimming_and_span() {
        let x = ChainComplex::new(
            -1,
            vec![Presentation::free(0), Presentation::free(1), Presentation::free(0)],
            vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 0)],
        )
        .unwrap();
        assert_eq!(x, ChainComplex::sphere(0));
        assert_eq!(x.span(), Some((0, 0)));
    }

    #[test]
    fn non_commuting_map_rejected() {
        let m = ChainComplex::moore(2, 0);
        let err = ChainMap::from_fn(&m, &m, |n| if n == 0 { IntMatrix::identity(1) } else { IntMatrix::zeros(1, 1) });
        assert!(matches!(err, Err(Error::IllFormedMap { .. })));
    }
}
