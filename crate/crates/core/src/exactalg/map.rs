use num_bigint::BigInt;

use super::group::{FpAbelianGroup, NormalizedSubquotient, Presentation};
use super::lattice::{preimage, Lattice};
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// A homomorphism between presented groups, given on generators.
///
/// `matrix` is `target.gens() × source.gens()`; construction checks that
/// source relations land in the target relation lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    source: Presentation,
    target: Presentation,
    matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(source: Presentation, target: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::ShapeMismatch {
                context: "group map".into(),
                expected: (target.gens(), source.gens()),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        let images = &matrix * source.relations();
        if let Some(j) = images.columns().iter().position(|c| !target.relation_lattice().contains(c)) {
            return Err(Error::IllFormedMap { reason: format!("relation {j} of the source is not sent to a relation") });
        }
        Ok(GroupMap { source, target, matrix })
    }

    /// Map between canonical presentations of normal forms.
    pub fn between_normal_forms(source: &FpAbelianGroup, target: &FpAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        Self::new(source.presentation(), target.presentation(), matrix)
    }

    pub fn identity(p: &Presentation) -> Self {
        GroupMap { source: p.clone(), target: p.clone(), matrix: IntMatrix::identity(p.gens()) }
    }

    pub fn zero(source: &Presentation, target: &Presentation) -> Self {
        GroupMap { source: source.clone(), target: target.clone(), matrix: IntMatrix::zeros(target.gens(), source.gens()) }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupMap) -> Result<GroupMap> {
        GroupMap::new(self.source.clone(), other.target.clone(), other.matrix() * &self.matrix)
    }

    /// Whether the map is zero modulo target relations.
    pub fn is_zero(&self) -> bool {
        self.target.relation_lattice().contains_columns(&self.matrix)
    }

    /// `ker f = f⁻¹(R_B) / R_A` as a sublattice pair of `ℤ^{gens A}`.
    pub fn kernel_lattice(&self) -> Lattice {
        preimage(&self.matrix, self.target.relation_lattice())
    }

    /// `im f + R_B`, a sublattice of `ℤ^{gens B}`.
    pub fn image_lattice(&self) -> Lattice {
        Lattice::span(&self.matrix.hconcat(self.target.relations()))
    }

    pub fn decompose(&self) -> MapDecomposition {
        let ker = NormalizedSubquotient::new(&self.kernel_lattice(), self.source.relation_lattice());
        let img_lat = self.image_lattice();
        let image = NormalizedSubquotient::new(&img_lat, self.target.relation_lattice());
        let coker = NormalizedSubquotient::new(&Lattice::full(self.target.gens()), &img_lat);
        MapDecomposition { kernel: ker, image, cokernel: coker }
    }

    pub fn is_injective(&self) -> bool {
        self.source.relation_lattice().contains_lattice(&self.kernel_lattice())
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lattice().is_full()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Image of a source element, in target generators.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }
}

/// Kernel, image and cokernel of a map with their subquotient witnesses.
#[derive(Clone, Debug)]
pub struct MapDecomposition {
    pub kernel: NormalizedSubquotient,
    pub image: NormalizedSubquotient,
    pub cokernel: NormalizedSubquotient,
}

impl MapDecomposition {
    pub fn groups(&self) -> (FpAbelianGroup, FpAbelianGroup, FpAbelianGroup) {
        (self.kernel.group.clone(), self.image.group.clone(), self.cokernel.group.clone())
    }
}

pub fn kernel_image_cokernel(f: &GroupMap) -> (FpAbelianGroup, FpAbelianGroup, FpAbelianGroup) {
    f.decompose().groups()
}

/// Exactness of `A --f--> B --g--> C` at `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// `g ∘ f ≠ 0`.
    NotAComplex,
    /// `im f ⊊ ker g`; carries the defect `ker g / im f`.
    Defect(FpAbelianGroup),
}

/// Compares `im f + R_B` with `g⁻¹(R_C)` as Hermite lattices.
pub fn exactness_at(f: &GroupMap, g: &GroupMap) -> Exactness {
    assert_eq!(f.target().gens(), g.source().gens(), "maps are not composable");
    let composite = g.matrix() * f.matrix();
    if !g.target().relation_lattice().contains_columns(&composite) {
        return Exactness::NotAComplex;
    }
    let img = f.image_lattice();
    let ker = g.kernel_lattice();
    if img == ker {
        Exactness::Exact
    } else {
        Exactness::Defect(NormalizedSubquotient::new(&ker, &img).group)
    }
}

/// A subgroup `outer / R` of a presented group, re-presented on a basis of
/// `outer`, with the inclusion back into the ambient generators.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    /// `ambient gens × presentation.gens()`
    pub inclusion: IntMatrix,
    pub lattice: Lattice,
}

impl SubgroupPresentation {
    /// `outer` must contain `relations`.
    pub fn new(outer: &Lattice, relations: &Lattice) -> Self {
        let coords = outer.coordinates_of_columns(relations.basis()).expect("relation lattice must lie inside the subgroup lattice");
        SubgroupPresentation {
            presentation: Presentation::new(outer.rank(), coords),
            inclusion: outer.basis().clone(),
            lattice: outer.clone(),
        }
    }

    /// Coordinates in the new generators of ambient vectors lying in the
    /// subgroup lattice.
    pub fn coordinates_of_columns(&self, m: &IntMatrix) -> Option<IntMatrix> {
        self.lattice.coordinates_of_columns(m)
    }
}

/// `A ×_C B` for `f: A → C`, `g: B → C`.
#[derive(Clone, Debug)]
pub struct GroupPullback {
    pub group: FpAbelianGroup,
    pub subgroup: SubgroupPresentation,
    pub to_a: GroupMap,
    pub to_b: GroupMap,
}

/// Pullback as the kernel of `(f, −g): A ⊕ B → C`.
pub fn pullback_group(f: &GroupMap, g: &GroupMap) -> Result<GroupPullback> {
    if f.target() != g.target() {
        return Err(Error::IllFormedMap { reason: "pullback legs have different targets".into() });
    }
    let (a, b) = (f.source().gens(), g.source().gens());
    let sum = f.source().direct_sum(g.source());
    let stacked = f.matrix().hconcat(&g.matrix().neg());
    let outer = preimage(&stacked, f.target().relation_lattice());
    let sub = SubgroupPresentation::new(&outer, sum.relation_lattice());
    let pa = &IntMatrix::identity(a).hconcat(&IntMatrix::zeros(a, b)) * &sub.inclusion;
    let pb = &IntMatrix::zeros(b, a).hconcat(&IntMatrix::identity(b)) * &sub.inclusion;
    let to_a = GroupMap::new(sub.presentation.clone(), f.source().clone(), pa)?;
    let to_b = GroupMap::new(sub.presentation.clone(), g.source().clone(), pb)?;
    Ok(GroupPullback { group: sub.presentation.normal_form(), subgroup: sub, to_a, to_b })
}
