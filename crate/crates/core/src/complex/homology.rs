use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ChainComplex, ChainMap};
use crate::certificate::{Certificate, Witness};
use crate::exactalg::lattice::preimage;
use crate::exactalg::{FpAbelianGroup, GroupMap, IntMatrix, Lattice, NormalizedSubquotient};

/// `H_n = Z_n / B_n` with `Z_n = d_n⁻¹(R_{n−1})` and `B_n = im d_{n+1} + R_n`,
/// both as lattices in the generators of degree `n`.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: i64,
    pub normal: NormalizedSubquotient,
}

impl HomologyGroup {
    pub fn group(&self) -> &FpAbelianGroup {
        &self.normal.group
    }

    pub fn cycles(&self) -> &Lattice {
        &self.normal.outer
    }

    pub fn boundaries(&self) -> &Lattice {
        &self.normal.inner
    }
}

pub fn homology_at(x: &ChainComplex, n: i64) -> HomologyGroup {
    let cycles = preimage(&x.differential(n), x.group(n - 1).relation_lattice());
    let boundaries = Lattice::span(&x.differential(n + 1).hconcat(x.group(n).relations()));
    HomologyGroup { degree: n, normal: NormalizedSubquotient::new(&cycles, &boundaries) }
}

/// Homology groups by degree; zero groups are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile(BTreeMap<i64, FpAbelianGroup>);

impl HomologyProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_groups(groups: impl IntoIterator<Item = (i64, FpAbelianGroup)>) -> Self {
        HomologyProfile(groups.into_iter().filter(|(_, g)| !g.is_zero()).collect())
    }

    pub fn get(&self, n: i64) -> FpAbelianGroup {
        self.0.get(&n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FpAbelianGroup)> {
        self.0.iter().map(|(&n, g)| (n, g))
    }

    /// Degrees with nonzero homology.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.0.keys().next()?, *self.0.keys().next_back()?))
    }

    /// Keeps only degrees `≤ n`.
    pub fn truncated_above(&self, n: i64) -> Self {
        HomologyProfile(self.0.range(..=n).map(|(&k, g)| (k, g.clone())).collect())
    }

    /// Keeps only degrees `> k`.
    pub fn truncated_below(&self, k: i64) -> Self {
        HomologyProfile(self.0.range(k + 1..).map(|(&k, g)| (k, g.clone())).collect())
    }

    /// Reindexes so that degree `n` moves to `n + by`.
    pub fn shifted(&self, by: i64) -> Self {
        HomologyProfile(self.0.iter().map(|(&k, g)| (k + by, g.clone())).collect())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (&k, g) in &other.0 {
            let e = out.entry(k).or_default();
            *e = e.direct_sum(g);
        }
        HomologyProfile(out)
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "acyclic");
        }
        let parts: Vec<String> = self.0.iter().map(|(n, g)| format!("H_{n} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

pub fn homology(x: &ChainComplex) -> HomologyProfile {
    HomologyProfile::from_groups(x.degrees().map(|n| (n, homology_at(x, n).group().clone())))
}

/// `H_n(f)` as a map between the normal forms of `H_n(source)` and
/// `H_n(target)`.
pub fn induced_map(f: &ChainMap, n: i64) -> GroupMap {
    let hs = homology_at(f.source(), n);
    let ht = homology_at(f.target(), n);
    induced_between(f, &hs, &ht)
}

pub(crate) fn induced_between(f: &ChainMap, hs: &HomologyGroup, ht: &HomologyGroup) -> GroupMap {
    let images = &f.component(hs.degree) * &hs.normal.generators;
    let m = ht
        .normal
        .coordinates_of_columns(&images)
        .unwrap_or_else(|| panic!("chain map sends a cycle outside the cycles in degree {}", hs.degree));
    let m = if m.rows() == 0 { IntMatrix::zeros(0, hs.group().generator_count()) } else { m };
    GroupMap::between_normal_forms(hs.group(), ht.group(), m).expect("induced maps are well defined")
}

/// Degrees where either side of `f` can carry homology.
pub(crate) fn joint_degrees(f: &ChainMap) -> Vec<i64> {
    let mut ds: Vec<i64> = f.source().degrees().chain(f.target().degrees()).collect();
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// First degree `n` (ascending, restricted by `filter`) where `H_n(f)` is not
/// an isomorphism.
pub(crate) fn first_non_iso_degree(f: &ChainMap, filter: impl Fn(i64) -> bool) -> Option<(i64, String)> {
    joint_degrees(f).into_iter().filter(|&n| filter(n)).find_map(|n| {
        let h = induced_map(f, n);
        (!h.is_isomorphism())
            .then(|| (n, format!("H_{n}(f): {} -> {} is not an isomorphism", h.source().normal_form(), h.target().normal_form())))
    })
}

pub fn is_quasi_iso(f: &ChainMap) -> Certificate {
    match first_non_iso_degree(f, |_| true) {
        None => Certificate::pass("quasi-isomorphism"),
        Some((n, why)) => Certificate::fail("quasi-isomorphism", Witness::degree(n, why)),
    }
}
