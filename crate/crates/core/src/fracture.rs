//! Localization of homology at sets of primes and the arithmetic square.
//!
//! `ℤ_J` inverts every prime outside `J`; `ℤ_∅ = ℚ`. Localization is exact,
//! so a complex is localized by localizing its homology.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Witness};
use crate::complex::{homology, induced_map, ChainComplex};
use crate::error::{Error, Result};
use crate::exactalg::group::{prime_factors, valuation};
use crate::exactalg::{pullback_group, FpAbelianGroup, GroupMap};
use crate::sections::{CospanSection, VertexTag};

/// `ℤ_J`, or `ℚ` when `J` is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalRing {
    primes: BTreeSet<u64>,
}

impl LocalRing {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let primes: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidPartition { reason: format!("{p} is not prime") });
        }
        Ok(LocalRing { primes })
    }

    pub fn rationals() -> Self {
        LocalRing::default()
    }

    pub fn primes(&self) -> &BTreeSet<u64> {
        &self.primes
    }

    pub fn is_rational(&self) -> bool {
        self.primes.is_empty()
    }

    /// `A ⊗ ℤ_J`: same rank, torsion restricted to the primes of `J`.
    pub fn localize(&self, a: &FpAbelianGroup) -> LocalizedGroup {
        let torsion: Vec<BigInt> = a
            .torsion()
            .iter()
            .map(|t| {
                self.primes.iter().fold(BigInt::one(), |acc, &p| {
                    let p = BigInt::from(p);
                    let e = valuation(t, &p);
                    acc * num_traits::pow(p, e as usize)
                })
            })
            .collect();
        let normal = FpAbelianGroup::from_cyclic_orders(a.rank(), torsion);
        LocalizedGroup { ring: self.clone(), rank: normal.rank(), torsion: normal.torsion().to_vec() }
    }

    /// Whether `A ⊗ ℤ_J = 0`.
    pub fn kills(&self, a: &FpAbelianGroup) -> bool {
        self.localize(a).is_zero()
    }
}

impl fmt::Display for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primes.is_empty() {
            return write!(f, "Q");
        }
        let ps: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(f, "Z_({})", ps.join(","))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A finitely generated `ℤ_J`-module in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedGroup {
    pub ring: LocalRing,
    pub rank: usize,
    /// Invariant factors, supported on the primes of the ring.
    pub torsion: Vec<BigInt>,
}

impl LocalizedGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// The torsion part as an integral group (a finite group is its own
    /// localization at its support).
    pub fn torsion_group(&self) -> FpAbelianGroup {
        FpAbelianGroup::from_cyclic_orders(0, self.torsion.iter().cloned())
    }
}

impl fmt::Display for LocalizedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = FpAbelianGroup::from_cyclic_orders(self.rank, self.torsion.iter().cloned());
        write!(f, "{base} over {}", self.ring)
    }
}

/// Disjoint prime sets `J`, `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePartition {
    pub j: LocalRing,
    pub k: LocalRing,
}

impl PrimePartition {
    pub fn new(j: impl IntoIterator<Item = u64>, k: impl IntoIterator<Item = u64>) -> Result<Self> {
        let (j, k) = (LocalRing::new(j)?, LocalRing::new(k)?);
        if let Some(p) = j.primes.intersection(&k.primes).next() {
            return Err(Error::InvalidPartition { reason: format!("{p} lies in both J and K") });
        }
        Ok(PrimePartition { j, k })
    }

    /// Every prime of `scope` lies in `J ∪ K`.
    pub fn covers(&self, scope: &[BigInt]) -> Result<()> {
        for p in scope {
            let small = u64::try_from(p).ok();
            if !small.is_some_and(|q| self.j.primes.contains(&q) || self.k.primes.contains(&q)) {
                return Err(Error::PartitionTooSmall { prime: p.to_string() });
            }
        }
        Ok(())
    }

    /// All splittings `J ⊔ K` of a set of primes with both sides nonempty.
    pub fn balanced_splits(primes: &[u64]) -> Vec<PrimePartition> {
        let n = primes.len();
        (1..(1u32 << n).saturating_sub(1))
            .map(|mask| {
                let (j, k): (Vec<u64>, Vec<u64>) = primes.iter().enumerate().fold((vec![], vec![]), |(mut j, mut k), (i, &p)| {
                    if mask & (1 << i) != 0 {
                        j.push(p)
                    } else {
                        k.push(p)
                    }
                    (j, k)
                });
                PrimePartition::new(j, k).expect("splits of distinct primes are partitions")
            })
            .collect()
    }
}

pub fn localize_homology(x: &ChainComplex, ring: &LocalRing) -> Vec<(i64, LocalizedGroup)> {
    homology(x).iter().map(|(i, g)| (i, ring.localize(g))).filter(|(_, g)| !g.is_zero()).collect()
}

/// Result of reassembling `A` from `A_J → A_ℚ ← A_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reassembly {
    pub local_j: LocalizedGroup,
    pub local_k: LocalizedGroup,
    pub rational: LocalizedGroup,
    pub pullback: FpAbelianGroup,
}

/// `A_J ×_{A_ℚ} A_K`: free ranks combine as `r_J + r_K − r_ℚ`, torsion is the
/// pullback of `T_J → 0 ← T_K`.
pub fn reassemble(a: &FpAbelianGroup, p: &PrimePartition) -> Result<Reassembly> {
    p.covers(&a.torsion_primes())?;
    let (lj, lk, lq) = (p.j.localize(a), p.k.localize(a), LocalRing::rationals().localize(a));
    let zero = FpAbelianGroup::zero().presentation();
    let tj = GroupMap::zero(&lj.torsion_group().presentation(), &zero);
    let tk = GroupMap::zero(&lk.torsion_group().presentation(), &zero);
    let torsion = pullback_group(&tj, &tk)?.group;
    let rank = lj.rank + lk.rank - lq.rank;
    let pullback = FpAbelianGroup::free(rank).direct_sum(&torsion);
    Ok(Reassembly { local_j: lj, local_k: lk, rational: lq, pullback })
}

/// Exactness of `0 → A → A_J ⊕ A_K → A_ℚ → 0`.
pub fn algebraic_fracture_check(a: &FpAbelianGroup, p: &PrimePartition) -> Result<Certificate> {
    let r = reassemble(a, p)?;
    let ranks = if [r.local_j.rank, r.local_k.rank, r.rational.rank].iter().all(|&k| k == a.rank()) {
        Certificate::pass("ranks agree")
    } else {
        Certificate::fail(
            "ranks agree",
            Witness::note(format!(
                "rk A = {}, rk A_J = {}, rk A_K = {}, rk A_Q = {}",
                a.rank(),
                r.local_j.rank,
                r.local_k.rank,
                r.rational.rank
            )),
        )
    };
    let glue = if &r.pullback == a {
        Certificate::pass("pullback reassembles A")
    } else {
        Certificate::fail("pullback reassembles A", Witness::note(format!("pullback {} differs from {a}", r.pullback)))
    };
    let check = format!("fracture square for {a} over {} / {}", p.j, p.k);
    Ok(Certificate::all(check, vec![ranks, glue]))
}

/// Degreewise fracture squares on homology; a passing certificate means the
/// Mayer–Vietoris sequence splits into short exact pieces.
pub fn arithmetic_square_check(x: &ChainComplex, p: &PrimePartition) -> Result<Certificate> {
    let h = homology(x);
    for (_, g) in h.iter() {
        p.covers(&g.torsion_primes())?;
    }
    let mut children = Vec::new();
    for (i, g) in h.iter() {
        let mut c = algebraic_fracture_check(g, p)?;
        if let Some(w) = c.witness.as_mut() {
            w.degree = Some(i);
        }
        let pb = reassemble(g, p)?.pullback;
        children.push(c.with_note(format!("H_{i} reassembled as {pb}")));
    }
    Ok(Certificate::all("arithmetic square", children))
}

/// Whether `H_*(f)` becomes an isomorphism after tensoring with `ring`.
pub fn is_local_equivalence(f: &crate::complex::ChainMap, ring: &LocalRing) -> Certificate {
    let check = format!("{ring}-equivalence");
    for n in crate::complex::joint_degrees(f) {
        let (ker, _, coker) = induced_map(f, n).decompose().groups();
        if !ring.kills(&ker) {
            return Certificate::fail(check, Witness::degree(n, format!("kernel {ker} survives over {ring}")));
        }
        if !ring.kills(&coker) {
            return Certificate::fail(check, Witness::degree(n, format!("cokernel {coker} survives over {ring}")));
        }
    }
    Certificate::pass(check)
}

/// Fibrant-object and cofibrancy conditions for a cospan of localized
/// vertices. Legs are tested as equivalences in the structure of vertex 0.
pub fn cospan_model_check(s: &CospanSection) -> Certificate {
    let fibrant = crate::sections::cospan_fibrant_check(s);
    let cofibrant = crate::sections::cospan_cofibrant_check(s);
    Certificate::all("cospan model conditions", vec![fibrant, cofibrant])
}

/// The cospan `X → X ← X` tagged `(ℤ_J, ℚ, ℤ_K)` with identity legs.
pub fn fracture_cospan(x: &ChainComplex, p: &PrimePartition) -> CospanSection {
    let id = crate::complex::ChainMap::identity(x);
    CospanSection::new(
        id.clone(),
        id,
        [VertexTag::Local(LocalRing::rationals()), VertexTag::Local(p.j.clone()), VertexTag::Local(p.k.clone())],
    )
    .expect("identity legs share a target")
}

/// Primes dividing any torsion coefficient of the homology of `x`.
pub fn homology_torsion_primes(x: &ChainComplex) -> Vec<u64> {
    let mut ps = BTreeSet::new();
    for (_, g) in homology(x).iter() {
        for t in g.torsion() {
            ps.extend(prime_factors(t).iter().filter_map(|p| u64::try_from(p).ok()));
        }
    }
    ps.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::group::group;

    #[test]
    fn localization() {
        let r2 = LocalRing::new([2]).unwrap();
        let l = r2.localize(&group(0, &[6]));
        assert_eq!((l.rank, l.torsion.clone()), (0, vec![BigInt::from(2)]));
        let l = r2.localize(&group(3, &[]));
        assert_eq!(l.rank, 3);
        let q = LocalRing::rationals().localize(&group(2, &[4, 12]));
        assert_eq!((q.rank, q.torsion.len()), (2, 0));
        assert!(LocalRing::new([4]).is_err());
    }

    #[test]
    fn cyclic_six_reassembles() {
        let p = PrimePartition::new([2], [3]).unwrap();
        let a = group(0, &[6]);
        assert_eq!(reassemble(&a, &p).unwrap().pullback, a);
        assert!(algebraic_fracture_check(&a, &p).unwrap().passed);
        assert!(algebraic_fracture_check(&group(1, &[]), &p).unwrap().passed);
        assert!(algebraic_fracture_check(&FpAbelianGroup::zero(), &p).unwrap().passed);
    }

    #[test]
    fn partitions() {
        assert!(matches!(PrimePartition::new([2], [2]), Err(Error::InvalidPartition { .. })));
        let p = PrimePartition::new([2], [3]).unwrap();
        assert!(matches!(algebraic_fracture_check(&group(0, &[5]), &p), Err(Error::PartitionTooSmall { .. })));
        assert_eq!(PrimePartition::balanced_splits(&[2, 3, 5]).len(), 6);
    }

    #[test]
    fn moore_square() {
        let x = ChainComplex::moore(6, 0);
        let cert = arithmetic_square_check(&x, &PrimePartition::new([2], [3]).unwrap()).unwrap();
        assert!(cert.passed);
        assert!(cert.children[0].notes[0].contains("Z/6"));
    }

    #[test]
    fn local_equivalences() {
        // ℤ[0] → Moore(2): cokernel 0, kernel 2ℤ ≅ ℤ; not rational.
        let m = ChainComplex::moore(2, 0);
        let q = crate::complex::ChainMap::from_fn(&m, &ChainComplex::zero(), |n| crate::exactalg::IntMatrix::zeros(0, m.gens(n))).unwrap();
        assert!(is_local_equivalence(&q, &LocalRing::rationals()).passed);
        assert!(!is_local_equivalence(&q, &LocalRing::new([2]).unwrap()).passed);
        assert!(is_local_equivalence(&q, &LocalRing::new([3]).unwrap()).passed);
    }
}
