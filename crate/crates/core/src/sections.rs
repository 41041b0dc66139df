//! Sections over `ℕ^op` (towers) and over `1 ← 0 → 2` (cospans).
//!
//! Every presheaf here has identity underlying functors, so a section is a
//! diagram of complexes whose vertices carry different localized
//! structures. Towers put the `P_i` structure on level `i`; cospans carry an
//! explicit [`VertexTag`] per vertex.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Witness};
use crate::complex::{cofibrant_replacement, degreewise_pullback, is_quasi_iso, ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::fracture::{is_local_equivalence, LocalRing};
use crate::trunc::{is_n_type, is_pn_weq, postnikov_projection, postnikov_section};

/// Lowest degree in which fibrations must be surjective.
pub const FIBRATION_FROM: i64 = 1;

/// A map is a fibration when it is degreewise surjective from
/// [`FIBRATION_FROM`] up.
pub fn is_fibration(f: &ChainMap) -> Certificate {
    match f.first_non_surjective_degree(FIBRATION_FROM) {
        None => Certificate::pass("fibration"),
        Some(n) => Certificate::fail("fibration", Witness::degree(n, "not surjective")),
    }
}

/// The model structure a vertex carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexTag {
    Plain,
    Truncated(i64),
    Local(LocalRing),
}

impl VertexTag {
    /// Whether `f` is a weak equivalence in this structure.
    pub fn weak_equivalence(&self, f: &ChainMap) -> Certificate {
        match self {
            VertexTag::Plain => is_quasi_iso(f),
            VertexTag::Truncated(n) => is_pn_weq(f, *n),
            VertexTag::Local(r) => is_local_equivalence(f, r),
        }
    }
}

impl fmt::Display for VertexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexTag::Plain => write!(f, "plain"),
            VertexTag::Truncated(n) => write!(f, "P_{n}"),
            VertexTag::Local(r) => write!(f, "{r}"),
        }
    }
}

/// A diagram of complexes with labelled vertices.
pub trait Diagram: Clone {
    fn vertices(&self) -> Vec<&ChainComplex>;
    /// `(source vertex, target vertex, map)`.
    fn arrows(&self) -> Vec<(usize, usize, &ChainMap)>;
}

/// `X_0 ← X_1 ← … ← X_m`, where `maps[i]: X_{i+1} → X_i`.
#[derive(Clone, Debug)]
pub struct TowerSection {
    levels: Vec<ChainComplex>,
    maps: Vec<ChainMap>,
    stable_from: usize,
}

impl TowerSection {
    /// Checks that each map runs between the right levels. The stabilization
    /// claim (maps from `stable_from` on are isomorphisms) is recorded, and
    /// verified by [`TowerSection::verify_stabilization`].
    pub fn new(levels: Vec<ChainComplex>, maps: Vec<ChainMap>, stable_from: usize) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Validation { location: "tower".into(), reason: "a tower needs at least one level".into() });
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::Validation {
                location: "tower".into(),
                reason: format!("{} levels need {} maps, got {}", levels.len(), levels.len() - 1, maps.len()),
            });
        }
        for (i, f) in maps.iter().enumerate() {
            if f.source() != &levels[i + 1] || f.target() != &levels[i] {
                return Err(Error::Validation {
                    location: format!("tower map {i}"),
                    reason: format!("must run from level {} to level {i}", i + 1),
                });
            }
        }
        if stable_from > maps.len() {
            return Err(Error::Validation {
                location: "tower".into(),
                reason: format!("stabilization index {stable_from} exceeds the last level {}", maps.len()),
            });
        }
        Ok(TowerSection { levels, maps, stable_from })
    }

    pub fn constant(x: &ChainComplex, length: usize) -> Self {
        let levels = vec![x.clone(); length + 1];
        let maps = vec![ChainMap::identity(x); length];
        TowerSection { levels, maps, stable_from: 0 }
    }

    /// Index of the last level.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn levels(&self) -> &[ChainComplex] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &ChainComplex {
        &self.levels[i]
    }

    pub fn maps(&self) -> &[ChainMap] {
        &self.maps
    }

    /// `X_{i+1} → X_i`.
    pub fn map(&self, i: usize) -> &ChainMap {
        &self.maps[i]
    }

    pub fn stable_from(&self) -> usize {
        self.stable_from
    }

    /// Every map at or above the declared index is an isomorphism.
    pub fn verify_stabilization(&self) -> Result<()> {
        for i in self.stable_from..self.maps.len() {
            if !self.maps[i].is_isomorphism() {
                return Err(Error::StabilizationViolated {
                    index: i,
                    reason: format!("X_{} → X_{i} is not an isomorphism of complexes", i + 1),
                });
            }
        }
        Ok(())
    }

    /// Replaces each level by its free resolution, lifting the maps.
    pub fn cofibrant_replacement(&self) -> TowerSection {
        let reps: Vec<_> = self.levels.iter().map(cofibrant_replacement).collect();
        let maps = self.maps.iter().enumerate().map(|(i, f)| reps[i + 1].lift(f, &reps[i]).expect("lift of a tower map")).collect();
        TowerSection { levels: reps.into_iter().map(|r| r.complex).collect(), maps, stable_from: self.stable_from }
    }
}

impl Diagram for TowerSection {
    fn vertices(&self) -> Vec<&ChainComplex> {
        self.levels.iter().collect()
    }

    fn arrows(&self) -> Vec<(usize, usize, &ChainMap)> {
        self.maps.iter().enumerate().map(|(i, f)| (i + 1, i, f)).collect()
    }
}

/// `X_1 → X_0 ← X_2`. Vertices are numbered 0, 1, 2 as in the name.
#[derive(Clone, Debug)]
pub struct CospanSection {
    pub left: ChainMap,
    pub right: ChainMap,
    /// Tags for vertices 0, 1, 2.
    pub tags: [VertexTag; 3],
}

impl CospanSection {
    pub fn new(left: ChainMap, right: ChainMap, tags: [VertexTag; 3]) -> Result<Self> {
        if left.target() != right.target() {
            return Err(Error::Validation { location: "cospan".into(), reason: "legs have different targets".into() });
        }
        Ok(CospanSection { left, right, tags })
    }

    pub fn zero() -> Self {
        let z = ChainComplex::zero();
        let id = ChainMap::identity(&z);
        CospanSection { left: id.clone(), right: id, tags: [VertexTag::Plain, VertexTag::Plain, VertexTag::Plain] }
    }

    pub fn x0(&self) -> &ChainComplex {
        self.left.target()
    }

    pub fn x1(&self) -> &ChainComplex {
        self.left.source()
    }

    pub fn x2(&self) -> &ChainComplex {
        self.right.source()
    }

    /// The degreewise pullback `X_1 ×_{X_0} X_2`.
    pub fn pullback(&self) -> ChainComplex {
        degreewise_pullback(&self.left, &self.right).expect("legs share a target").complex
    }
}

impl Diagram for CospanSection {
    fn vertices(&self) -> Vec<&ChainComplex> {
        vec![self.x0(), self.x1(), self.x2()]
    }

    fn arrows(&self) -> Vec<(usize, usize, &ChainMap)> {
        vec![(1, 0, &self.left), (2, 0, &self.right)]
    }
}

/// A morphism of sections: one chain map per vertex, commuting with the
/// structure maps.
#[derive(Clone, Debug)]
pub struct SectionMorphism<D: Diagram> {
    pub source: D,
    pub target: D,
    pub components: Vec<ChainMap>,
}

impl<D: Diagram> SectionMorphism<D> {
    pub fn new(source: D, target: D, components: Vec<ChainMap>) -> Result<Self> {
        let (sv, tv) = (source.vertices(), target.vertices());
        if sv.len() != tv.len() || components.len() != sv.len() {
            return Err(Error::Validation { location: "section morphism".into(), reason: "vertex counts differ".into() });
        }
        for (v, c) in components.iter().enumerate() {
            if c.source() != sv[v] || c.target() != tv[v] {
                return Err(Error::Validation {
                    location: format!("section morphism component {v}"),
                    reason: "does not run between the matching vertices".into(),
                });
            }
        }
        for ((a, b, s), (_, _, t)) in source.arrows().into_iter().zip(target.arrows()) {
            let lhs = s.then(&components[b])?;
            let rhs = components[a].then(t)?;
            if let Some(n) = lhs.first_disagreement(&rhs) {
                return Err(Error::Validation {
                    location: format!("section morphism square {a} → {b}"),
                    reason: format!("does not commute in degree {n}"),
                });
            }
        }
        Ok(SectionMorphism { source, target, components })
    }

    pub fn identity(d: &D) -> Self {
        let components = d.vertices().into_iter().map(ChainMap::identity).collect();
        SectionMorphism { source: d.clone(), target: d.clone(), components }
    }

    pub fn then(&self, other: &SectionMorphism<D>) -> Result<Self> {
        let components = self.components.iter().zip(&other.components).map(|(f, g)| f.then(g)).collect::<Result<_>>()?;
        SectionMorphism::new(self.source.clone(), other.target.clone(), components)
    }
}

/// Both verdicts of the injective model structure.
#[derive(Clone, Debug)]
pub struct InjectiveClass {
    pub weak_equivalence: Certificate,
    pub cofibration: Certificate,
}

impl InjectiveClass {
    pub fn certificate(&self) -> Certificate {
        Certificate {
            check: "injective classification".into(),
            passed: self.weak_equivalence.passed && self.cofibration.passed,
            witness: None,
            notes: vec![],
            children: vec![self.weak_equivalence.clone(), self.cofibration.clone()],
        }
    }
}

/// Degreewise injective with free degreewise cokernel.
pub fn is_cofibration(f: &ChainMap) -> Certificate {
    for n in f.source().degrees() {
        if !f.component_map(n).is_injective() {
            return Certificate::fail("cofibration", Witness::degree(n, "not injective"));
        }
    }
    for n in f.target().degrees() {
        let coker = f.component_map(n).decompose().cokernel.group;
        if !coker.is_free() {
            return Certificate::fail("cofibration", Witness::degree(n, format!("cokernel {coker} is not free")));
        }
    }
    Certificate::pass("cofibration")
}

/// Levelwise weak equivalences and cofibrations.
pub fn classify_injective<D: Diagram>(phi: &SectionMorphism<D>) -> InjectiveClass {
    let levelwise = |check: &str, test: &dyn Fn(&ChainMap) -> Certificate| {
        for (v, c) in phi.components.iter().enumerate() {
            let cert = test(c);
            if !cert.passed {
                return cert.with_level(v).renamed(check);
            }
        }
        Certificate::pass(check)
    };
    InjectiveClass {
        weak_equivalence: levelwise("levelwise weak equivalence", &is_quasi_iso),
        cofibration: levelwise("levelwise cofibration", &is_cofibration),
    }
}

/// `φ_0` is a fibration and every `X_{i+1} → Y_{i+1} ×_{Y_i} X_i` is one.
pub fn is_tower_fibration(phi: &SectionMorphism<TowerSection>) -> Certificate {
    let check = "tower fibration";
    let base = is_fibration(&phi.components[0]);
    if !base.passed {
        return base.with_level(0).renamed(check);
    }
    let (x, y) = (&phi.source, &phi.target);
    for i in 0..x.length() {
        let pb = match degreewise_pullback(y.map(i), &phi.components[i]) {
            Ok(pb) => pb,
            Err(e) => return Certificate::fail(check, Witness::level(i + 1, e.to_string())),
        };
        let induced = match pb.lift(&phi.components[i + 1], x.map(i)) {
            Ok(f) => f,
            Err(e) => return Certificate::fail(check, Witness::level(i + 1, e.to_string())),
        };
        let cert = is_fibration(&induced);
        if !cert.passed {
            return cert.with_level(i + 1).renamed(check);
        }
    }
    Certificate::pass(check)
}

/// Fibrancy in the Postnikov structure, evaluated through two
/// characterizations that must agree:
///
/// * (ii) `X_0` is a 0-type and each `X_{n+1} → X_n` is a fibration whose
///   degreewise kernel is an `(n+1)`-type;
/// * (iii) each `X_n` is an `n`-type and each `X_{n+1} → X_n` is a fibration.
pub fn is_post_fibrant(t: &TowerSection) -> Result<Certificate> {
    let ii = post_fibrant_ii(t);
    let iii = post_fibrant_iii(t);
    if ii.passed != iii.passed {
        return Err(Error::CharacterizationMismatch { reason: format!("(ii) {} but (iii) {}", verdict(&ii), verdict(&iii)) });
    }
    Ok(Certificate::all("Postnikov fibrant", vec![ii, iii]))
}

fn verdict(c: &Certificate) -> &'static str {
    if c.passed {
        "passes"
    } else {
        "fails"
    }
}

fn post_fibrant_ii(t: &TowerSection) -> Certificate {
    let check = "fibrant (ii)";
    let base = is_n_type(t.level(0), 0);
    if !base.passed {
        return base.with_level(0).renamed(check);
    }
    for i in 0..t.length() {
        let f = t.map(i);
        let fib = is_fibration(f);
        if !fib.passed {
            return fib.with_level(i).renamed(check);
        }
        let kernel = degreewise_kernel(f);
        let ty = is_n_type(&kernel, i as i64 + 1);
        if !ty.passed {
            return ty.with_level(i).renamed(check);
        }
    }
    Certificate::pass(check)
}

fn post_fibrant_iii(t: &TowerSection) -> Certificate {
    let check = "fibrant (iii)";
    for i in 0..=t.length() {
        let ty = is_n_type(t.level(i), i as i64);
        if !ty.passed {
            return ty.with_level(i).renamed(check);
        }
        if i < t.length() {
            let fib = is_fibration(t.map(i));
            if !fib.passed {
                return fib.with_level(i).renamed(check);
            }
        }
    }
    Certificate::pass(check)
}

fn degreewise_kernel(f: &ChainMap) -> ChainComplex {
    let z = ChainComplex::zero();
    degreewise_pullback(f, &ChainMap::zero(&z, f.target())).expect("common target").complex
}

/// Every structure map, precomposed with a cofibrant replacement of its
/// source, is a weak equivalence in the structure of its target.
pub fn is_homotopy_cartesian(t: &TowerSection) -> Certificate {
    let check = "homotopy cartesian";
    for i in 0..t.length() {
        let f = t.map(i);
        let q = cofibrant_replacement(f.source());
        let g = q.augmentation.then(f).expect("augmentation lands in the source");
        let cert = is_pn_weq(&g, i as i64);
        if !cert.passed {
            return cert.with_level(i).renamed(check);
        }
    }
    Certificate::pass(check).with_note("weak equivalences are tested after cofibrant replacement of each source")
}

/// Levelwise free, and every structure map a `P_i`-equivalence.
pub fn is_tow_cofibrant(t: &TowerSection) -> Certificate {
    let check = "Tow cofibrant";
    for (i, x) in t.levels().iter().enumerate() {
        if let Some(n) = x.first_relation_degree() {
            return Certificate::fail(check, Witness::degree(n, "level is not degreewise free").at_level(i));
        }
    }
    for i in 0..t.length() {
        let cert = is_pn_weq(t.map(i), i as i64);
        if !cert.passed {
            return cert.with_level(i).renamed(check);
        }
    }
    Certificate::pass(check)
}

/// `(P_n X)_{n ≤ m}` with the quotient maps.
pub fn postnikov_tower(x: &ChainComplex, m: usize) -> TowerSection {
    let levels: Vec<ChainComplex> = (0..=m as i64).map(|n| postnikov_section(x, n).complex).collect();
    let maps = (0..m as i64).map(|n| postnikov_projection(x, n + 1, n)).collect();
    let top = x.span().map_or(0, |(_, hi)| hi.max(0) as usize);
    TowerSection { levels, maps, stable_from: top.min(m) }
}

/// Legs are fibrations onto `X_0`.
pub fn cospan_fibrant_check(s: &CospanSection) -> Certificate {
    let children = [(1, &s.left), (2, &s.right)]
        .into_iter()
        .map(|(v, f)| is_fibration(f).with_level(v).renamed(&format!("leg {v} → 0 is a fibration")))
        .collect();
    Certificate::all("fibrant cospan", children)
}

/// Vertices are degreewise free and legs are weak equivalences in the
/// structure of vertex 0.
pub fn cospan_cofibrant_check(s: &CospanSection) -> Certificate {
    let mut children = Vec::new();
    for (v, x) in s.vertices().into_iter().enumerate() {
        let c = match x.first_relation_degree() {
            None => Certificate::pass(format!("vertex {v} is free")),
            Some(n) => Certificate::fail(format!("vertex {v} is free"), Witness::degree(n, "relations present").at_level(v)),
        };
        children.push(c);
    }
    for (v, f) in [(1, &s.left), (2, &s.right)] {
        children.push(s.tags[0].weak_equivalence(f).with_level(v).renamed(&format!("leg {v} → 0 is a {} equivalence", s.tags[0])));
    }
    Certificate::all("cofibrant cospan", children)
}

/// Legs, after cofibrant replacement of their sources, are weak equivalences
/// in the structure of vertex 0.
pub fn is_cospan_homotopy_cartesian(s: &CospanSection) -> Certificate {
    let children = [(1, &s.left), (2, &s.right)]
        .into_iter()
        .map(|(v, f)| {
            let q = cofibrant_replacement(f.source());
            let g = q.augmentation.then(f).expect("augmentation lands in the source");
            s.tags[0].weak_equivalence(&g).with_level(v).renamed(&format!("leg {v} → 0"))
        })
        .collect();
    Certificate::all("homotopy cartesian cospan", children)
}

/// Zero maps of the right shape, for building test diagrams.
pub fn zero_tower_map(x: &ChainComplex, y: &ChainComplex) -> ChainMap {
    ChainMap::from_fn(x, y, |n| IntMatrix::zeros(y.gens(n), x.gens(n))).expect("zero maps are chain maps")
}

trait Renamed {
    fn renamed(self, check: &str) -> Self;
}

impl Renamed for Certificate {
    fn renamed(mut self, check: &str) -> Self {
        self.check = check.to_string();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{direct_sum, homology, shift};
    use crate::exactalg::group::group;

    fn sample() -> ChainComplex {
        let x = direct_sum(&ChainComplex::moore(2, 0), &ChainComplex::sphere(2));
        direct_sum(&x, &shift(&ChainComplex::moore(3, 0), 1))
    }

    fn zero_tower(len: usize) -> TowerSection {
        TowerSection::constant(&ChainComplex::zero(), len)
    }

    #[test]
    fn sphere_tower() {
        let t = postnikov_tower(&ChainComplex::sphere(2), 4);
        let zs: Vec<bool> = t.levels().iter().map(ChainComplex::is_zero).collect();
        assert_eq!(zs, vec![true, true, false, false, false]);
        assert_eq!(t.stable_from(), 2);
        assert!(t.verify_stabilization().is_ok());
    }

    #[test]
    fn moore_tower_levels() {
        let t = postnikov_tower(&ChainComplex::moore(2, 0), 3);
        assert_eq!(homology(t.level(0)).get(0), group(0, &[2]));
        for i in 1..=3 {
            assert_eq!(homology(t.level(i)), homology(&ChainComplex::moore(2, 0)));
        }
    }

    #[test]
    fn postnikov_towers_pass_all_predicates() {
        let t = postnikov_tower(&sample(), 4);
        assert!(is_post_fibrant(&t).unwrap().passed);
        assert!(is_homotopy_cartesian(&t).passed);
        let q = t.cofibrant_replacement();
        assert!(is_tow_cofibrant(&q).passed, "{}", is_tow_cofibrant(&q));
        assert!(is_homotopy_cartesian(&q).passed);
        // The raw tower has torsion in level 0 via truncation.
        assert!(!is_tow_cofibrant(&t).passed);
    }

    #[test]
    fn mutated_tower_fails_fibrancy_at_the_mutated_level() {
        let t = postnikov_tower(&sample(), 4);
        let mut maps = t.maps().to_vec();
        maps[2] = zero_tower_map(t.level(3), t.level(2));
        let bad = TowerSection::new(t.levels().to_vec(), maps, 4).unwrap();
        let cert = is_post_fibrant(&bad).unwrap();
        assert!(!cert.passed);
        assert_eq!(cert.witness_level(), Some(2));
    }

    #[test]
    fn homotopy_cartesian_failure() {
        let x = direct_sum(&ChainComplex::sphere(1), &ChainComplex::moore(3, 1));
        let t = postnikov_tower(&x, 3);
        let mut levels = t.levels().to_vec();
        levels[1] = ChainComplex::zero();
        let mut maps = t.maps().to_vec();
        maps[0] = zero_tower_map(&levels[1], &levels[0]);
        maps[1] = zero_tower_map(&levels[2], &levels[1]);
        let bad = TowerSection::new(levels, maps, 3).unwrap();
        let cert = is_homotopy_cartesian(&bad);
        assert!(!cert.passed);
        assert_eq!(cert.witness_level(), Some(1));
    }

    #[test]
    fn tower_fibrations() {
        let t = postnikov_tower(&sample(), 4);
        let z = zero_tower(4);
        let comps = t.levels().iter().zip(z.levels()).map(|(a, b)| zero_tower_map(a, b)).collect();
        let phi = SectionMorphism::new(t.clone(), z, comps).unwrap();
        assert!(is_tower_fibration(&phi).passed);
        // Identity is a fibration; the inclusion of zero is not.
        assert!(is_tower_fibration(&SectionMorphism::identity(&t)).passed);
        let z = zero_tower(4);
        let comps = z.levels().iter().zip(t.levels()).map(|(a, b)| zero_tower_map(a, b)).collect();
        let psi = SectionMorphism::new(z, t, comps).unwrap();
        let cert = is_tower_fibration(&psi);
        assert!(!cert.passed);
    }

    #[test]
    fn injective_classification() {
        let t = postnikov_tower(&ChainComplex::sphere(1), 2);
        let id = classify_injective(&SectionMorphism::identity(&t));
        assert!(id.weak_equivalence.passed && id.cofibration.passed);
        let z = zero_tower(2);
        let comps = t.levels().iter().zip(z.levels()).map(|(a, b)| zero_tower_map(a, b)).collect();
        let phi = SectionMorphism::new(t, z, comps).unwrap();
        let c = classify_injective(&phi);
        assert!(!c.cofibration.passed);
        assert_eq!(c.cofibration.witness_level(), Some(1));
    }

    #[test]
    fn cospans() {
        assert!(cospan_fibrant_check(&CospanSection::zero()).passed);
        assert!(cospan_cofibrant_check(&CospanSection::zero()).passed);
        // Moore(2) → 0 kills 2-torsion: fine rationally, not over ℤ_(2).
        let m = ChainComplex::moore(2, 0);
        let z = ChainComplex::zero();
        let leg = zero_tower_map(&m, &z);
        let id = ChainMap::identity(&z);
        let tags = |r: LocalRing| [VertexTag::Local(r), VertexTag::Plain, VertexTag::Plain];
        let rational = CospanSection::new(leg.clone(), id.clone(), tags(LocalRing::rationals())).unwrap();
        assert!(cospan_cofibrant_check(&rational).passed);
        let two = CospanSection::new(leg, id, tags(LocalRing::new([2]).unwrap())).unwrap();
        let cert = cospan_cofibrant_check(&two);
        assert!(!cert.passed);
        assert_eq!(cert.witness_degree(), Some(0));
        assert_eq!(cert.witness_level(), Some(1));
    }
}
