use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;

/// A finitely generated abelian group `ℤ^rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_k` in
/// invariant-factor normal form: every `tᵢ ≥ 2` and `tᵢ | tᵢ₊₁`.
///
/// Equality is structural, so two groups compare equal exactly when they
/// are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FpAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FpAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FpAbelianGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, [order.into()])
    }

    /// Normalizes an arbitrary list of cyclic summand orders. Orders of 0
    /// count as free summands; orders of ±1 vanish.
    pub fn from_cyclic_orders(rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut rank = rank;
        let mut ts: Vec<BigInt> = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                rank += 1;
            } else if !o.is_one() {
                ts.push(o);
            }
        }
        ts.sort();
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                let g = ts[i].gcd(&ts[j]);
                let l = ts[i].lcm(&ts[j]);
                ts[i] = g;
                ts[j] = l;
            }
        }
        ts.retain(|t| !t.is_one());
        FpAbelianGroup { rank, torsion: ts }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn torsion_subgroup(&self) -> FpAbelianGroup {
        FpAbelianGroup { rank: 0, torsion: self.torsion.clone() }
    }

    /// Number of generators of the canonical presentation.
    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.rank
    }

    /// Cyclic summand orders in canonical generator order: torsion
    /// generators first, then free ones (order 0).
    pub fn cyclic_orders(&self) -> Vec<BigInt> {
        self.torsion.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), self.rank)).collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(self.rank + other.rank, self.torsion.iter().chain(&other.torsion).cloned())
    }

    /// Canonical presentation: one generator per summand, diagonal relations.
    pub fn presentation(&self) -> Presentation {
        let g = self.generator_count();
        let rels: Vec<Vec<BigInt>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut col = vec![BigInt::zero(); g];
                col[i] = t.clone();
                col
            })
            .collect();
        Presentation::new(g, IntMatrix::from_columns(g, &rels))
    }

    /// Prime divisors of the torsion orders, ascending.
    pub fn torsion_primes(&self) -> Vec<BigInt> {
        let mut ps = std::collections::BTreeSet::new();
        for t in &self.torsion {
            ps.extend(prime_factors(t));
        }
        ps.into_iter().collect()
    }
}

impl fmt::Display for FpAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FpAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpAbelianGroup({self})")
    }
}

/// Distinct prime factors of `|n|` by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            out.push(p.clone());
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Exponent of the prime `p` in `n ≠ 0`.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// `ℤ^gens / (column span of relations)`.
///
/// Relations are stored column-wise (`gens × r`); documents list them as
/// rows, one relation per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    gens: usize,
    relations: IntMatrix,
    lattice: Lattice,
}

impl Presentation {
    pub fn new(gens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), gens, "relation columns must have one entry per generator");
        let lattice = Lattice::span(&relations);
        Presentation { gens, relations, lattice }
    }

    pub fn free(gens: usize) -> Self {
        Self::new(gens, IntMatrix::zeros(gens, 0))
    }

    /// Relations given one per row, the document convention.
    pub fn from_relation_rows(gens: usize, rows: &IntMatrix) -> Self {
        assert_eq!(rows.cols(), gens, "relation rows must have one entry per generator");
        Self::new(gens, rows.transpose())
    }

    /// Presentation with the same generators and relation lattice, but with
    /// the Hermite basis as relation columns.
    pub fn reduced(&self) -> Self {
        Presentation { gens: self.gens, relations: self.lattice.basis().clone(), lattice: self.lattice.clone() }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn relation_lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_free(&self) -> bool {
        self.lattice.is_zero()
    }

    /// Adds relations; the result carries a Hermite relation basis.
    pub fn with_relations(&self, extra: &IntMatrix) -> Self {
        Self::new(self.gens, self.relations.hconcat(extra)).reduced()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.gens + other.gens, self.relations.block_diag(&other.relations))
    }

    pub fn normal_form(&self) -> FpAbelianGroup {
        group_from_presentation(&self.relations.transpose())
    }

    /// Normal form together with explicit generators and coordinates.
    pub fn normalize(&self) -> NormalizedSubquotient {
        NormalizedSubquotient::new(&Lattice::full(self.gens), &self.lattice)
    }

    /// Whether `v ≡ 0` in the group.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        self.lattice.contains(v)
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation(gens={}, relations={})", self.gens, self.relations.transpose())
    }
}

/// Abelian group from relation rows on `relations.cols()` generators.
pub fn group_from_presentation(relations: &IntMatrix) -> FpAbelianGroup {
    let g = relations.cols();
    let s = smith_normal_form(relations);
    let nonzero: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_zero()).cloned().collect();
    let rank = g - nonzero.len();
    FpAbelianGroup::from_cyclic_orders(rank, nonzero)
}

/// A subquotient `outer / inner` of some `ℤⁿ` in normal form, with the
/// witnesses needed to move elements in and out of normal coordinates.
///
/// Normal generators are ordered like [`FpAbelianGroup::cyclic_orders`]:
/// torsion summands first, then free ones.
#[derive(Clone, Debug)]
pub struct NormalizedSubquotient {
    pub group: FpAbelianGroup,
    pub outer: Lattice,
    pub inner: Lattice,
    /// Ambient vectors of the normal generators, `n × k`.
    pub generators: IntMatrix,
    /// Outer-lattice coordinates to normal coordinates, `k × rank(outer)`.
    coord_map: IntMatrix,
}

impl NormalizedSubquotient {
    pub fn new(outer: &Lattice, inner: &Lattice) -> Self {
        let inner_coords = outer.coordinates_of_columns(inner.basis()).expect("inner lattice must lie in the outer lattice");
        let s = smith_normal_form(&inner_coords);
        let r = outer.rank();
        let d: Vec<BigInt> = (0..r).map(|j| s.diag.get(j).cloned().unwrap_or_default()).collect();
        // After the base change y ↦ U·y the relations are diagonal.
        let keep: Vec<usize> = (0..r).filter(|&j| !d[j].is_one()).collect();
        let mut torsion_idx: Vec<usize> = keep.iter().copied().filter(|&j| !d[j].is_zero()).collect();
        torsion_idx.sort_by(|&a, &b| d[a].cmp(&d[b]));
        let free_idx: Vec<usize> = keep.iter().copied().filter(|&j| d[j].is_zero()).collect();
        let order: Vec<usize> = torsion_idx.iter().chain(&free_idx).copied().collect();

        let new_basis = outer.basis() * &s.u_inv;
        let generators = new_basis.select_columns(&order);
        let coord_map = s.u.select_rows(&order);
        let group = FpAbelianGroup::from_cyclic_orders(free_idx.len(), torsion_idx.iter().map(|&j| d[j].clone()));
        debug_assert_eq!(group.generator_count(), order.len());
        NormalizedSubquotient { group, outer: outer.clone(), inner: inner.clone(), generators, coord_map }
    }

    /// Normal coordinates of an ambient vector in `outer`, torsion
    /// coordinates reduced into `[0, t)`.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.outer.coordinates(v)?;
        let mut c = self.coord_map.mul_vec(&y);
        for (x, t) in c.iter_mut().zip(self.group.torsion()) {
            *x = x.mod_floor(t);
        }
        Some(c)
    }

    /// Normal coordinates of each column of `m`.
    pub fn coordinates_of_columns(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols: Option<Vec<Vec<BigInt>>> = m.columns().iter().map(|c| self.coordinates(c)).collect();
        Some(IntMatrix::from_columns(self.group.generator_count(), &cols?))
    }

    pub fn presentation(&self) -> Presentation {
        self.group.presentation()
    }
}

/// Closed-form `Hom(A, B)`.
pub fn hom_group(a: &FpAbelianGroup, b: &FpAbelianGroup) -> FpAbelianGroup {
    let mut rank = 0;
    let mut orders = Vec::new();
    for x in a.cyclic_orders() {
        for y in b.cyclic_orders() {
            match (x.is_zero(), y.is_zero()) {
                (true, true) => rank += 1,
                (true, false) => orders.push(y.clone()),
                (false, true) => {}
                (false, false) => orders.push(x.gcd(&y)),
            }
        }
    }
    FpAbelianGroup::from_cyclic_orders(rank, orders)
}

/// Closed-form `Ext¹(A, B)`.
pub fn ext_group(a: &FpAbelianGroup, b: &FpAbelianGroup) -> FpAbelianGroup {
    let mut orders = Vec::new();
    for x in a.torsion() {
        for y in b.cyclic_orders() {
            orders.push(if y.is_zero() { x.clone() } else { x.gcd(&y) });
        }
    }
    FpAbelianGroup::from_cyclic_orders(0, orders)
}

/// Closed-form `A ⊗ B`.
pub fn tensor_group(a: &FpAbelianGroup, b: &FpAbelianGroup) -> FpAbelianGroup {
    let mut rank = 0;
    let mut orders = Vec::new();
    for x in a.cyclic_orders() {
        for y in b.cyclic_orders() {
            match (x.is_zero(), y.is_zero()) {
                (true, true) => rank += 1,
                (true, false) => orders.push(y.clone()),
                (false, true) => orders.push(x.clone()),
                (false, false) => orders.push(x.gcd(&y)),
            }
        }
    }
    FpAbelianGroup::from_cyclic_orders(rank, orders)
}

/// Small helper for tests and fixtures: `ℤ^rank ⊕ ⨁ ℤ/tᵢ` from machine ints.
pub fn group(rank: usize, torsion: &[i64]) -> FpAbelianGroup {
    FpAbelianGroup::from_cyclic_orders(rank, torsion.iter().map(|&t| BigInt::from(t)))
}
