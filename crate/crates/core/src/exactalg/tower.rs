//! Finite prefixes of towers `A₀ ← A₁ ← A₂ ← …` of finitely generated
//! groups, with `lim`/`lim¹` for towers that are certified to stabilize.

use serde::{Deserialize, Serialize};

use super::group::FpAbelianGroup;
use super::lattice::Lattice;
use super::map::GroupMap;
use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// A tower prefix whose maps `A_{i+1} → A_i` are isomorphisms from
/// `stabilization_index` on. The claim is checked at construction.
///
/// Maps are matrices between the canonical presentations of the groups.
#[derive(Clone, Debug)]
pub struct GroupTower {
    groups: Vec<FpAbelianGroup>,
    maps: Vec<GroupMap>,
    stabilization_index: usize,
}

impl GroupTower {
    pub fn new(groups: Vec<FpAbelianGroup>, maps: Vec<IntMatrix>, stabilization_index: usize) -> Result<Self> {
        let maps = tower_maps(&groups, maps)?;
        if stabilization_index >= groups.len() {
            return Err(Error::StabilizationViolated {
                index: stabilization_index,
                reason: format!("declared index is beyond the {} given levels", groups.len()),
            });
        }
        for (i, f) in maps.iter().enumerate().skip(stabilization_index) {
            if !f.is_isomorphism() {
                return Err(Error::StabilizationViolated { index: i, reason: format!("A_{} -> A_{} is not an isomorphism", i + 1, i) });
            }
        }
        Ok(GroupTower { groups, maps, stabilization_index })
    }

    /// Constant tower with identity maps.
    pub fn constant(group: FpAbelianGroup, length: usize) -> Self {
        let n = group.generator_count();
        let groups = vec![group; length + 1];
        let maps = vec![IntMatrix::identity(n); length];
        Self::new(groups, maps, 0).expect("identity maps are isomorphisms")
    }

    pub fn groups(&self) -> &[FpAbelianGroup] {
        &self.groups
    }

    pub fn maps(&self) -> &[GroupMap] {
        &self.maps
    }

    pub fn stabilization_index(&self) -> usize {
        self.stabilization_index
    }
}

fn tower_maps(groups: &[FpAbelianGroup], maps: Vec<IntMatrix>) -> Result<Vec<GroupMap>> {
    if groups.is_empty() || maps.len() + 1 != groups.len() {
        return Err(Error::Validation {
            location: "group tower".into(),
            reason: format!("{} groups need {} maps, got {}", groups.len(), groups.len().saturating_sub(1), maps.len()),
        });
    }
    maps.into_iter().enumerate().map(|(i, m)| GroupMap::between_normal_forms(&groups[i + 1], &groups[i], m)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lim1Status {
    /// `lim¹ = 0` because the maps are isomorphisms from this index on.
    VanishesByStabilization { from: usize },
}

/// `(lim, lim¹)` of a stabilized tower. The limit is the stable value.
pub fn tower_lim_lim1(t: &GroupTower) -> (FpAbelianGroup, Lim1Status) {
    let s = t.stabilization_index;
    (t.groups[s].clone(), Lim1Status::VanishesByStabilization { from: s })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MittagLeffler {
    /// For every checked level `i`, `im(A_{i+k} → A_i)` is constant for
    /// `k ≥ index` (up to the horizon).
    ImagesStabilizeBy(usize),
    NotStabilizedWithin(usize),
}

/// Tracks the image chains `im(A_{i+k} → A_i)`, `k ≤ horizon`, at every
/// level `i` with `i + horizon` inside the prefix.
pub fn mittag_leffler_diagnostic(groups: &[FpAbelianGroup], maps: &[IntMatrix], horizon: usize) -> Result<MittagLeffler> {
    let maps = tower_maps(groups, maps.to_vec())?;
    if horizon == 0 || groups.len() <= horizon {
        return Err(Error::Validation {
            location: "mittag-leffler diagnostic".into(),
            reason: format!("prefix of {} groups is too short for horizon {horizon}", groups.len()),
        });
    }
    let mut worst = 0;
    for i in 0..groups.len() - horizon {
        let rels = groups[i].presentation().relation_lattice().clone();
        let mut composite = IntMatrix::identity(groups[i].generator_count());
        let mut images = vec![Lattice::full(groups[i].generator_count())];
        for k in 1..=horizon {
            composite = &composite * maps[i + k - 1].matrix();
            images.push(Lattice::span(&composite.hconcat(rels.basis())));
        }
        // Least s with images[s] = images[s + 1] = … = images[horizon].
        let mut s = horizon;
        while s > 0 && images[s - 1] == images[horizon] {
            s -= 1;
        }
        if s == horizon {
            return Ok(MittagLeffler::NotStabilizedWithin(horizon));
        }
        worst = worst.max(s);
    }
    Ok(MittagLeffler::ImagesStabilizeBy(worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::group::group;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn constant_tower() {
        let t = GroupTower::constant(FpAbelianGroup::free(1), 3);
        assert_eq!(tower_lim_lim1(&t), (FpAbelianGroup::free(1), Lim1Status::VanishesByStabilization { from: 0 }));
    }

    #[test]
    fn eventually_constant_z4() {
        // ℤ/2 ← ℤ/4 ← ℤ/4 ← ℤ/4 with the reduction first.
        let gs = vec![group(0, &[2]), group(0, &[4]), group(0, &[4]), group(0, &[4])];
        let maps = vec![m(&[vec![1]]), m(&[vec![1]]), m(&[vec![3]])];
        let t = GroupTower::new(gs, maps, 1).unwrap();
        assert_eq!(tower_lim_lim1(&t).0, group(0, &[4]));
    }

    #[test]
    fn times_p_tower_rejected() {
        let gs = vec![FpAbelianGroup::free(1); 4];
        let maps = vec![m(&[vec![3]]); 3];
        match GroupTower::new(gs, maps, 0) {
            Err(Error::StabilizationViolated { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected StabilizationViolated, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics() {
        let gs = vec![FpAbelianGroup::free(1); 7];
        assert_eq!(mittag_leffler_diagnostic(&gs, &vec![m(&[vec![1]]); 6], 3).unwrap(), MittagLeffler::ImagesStabilizeBy(0));
        assert_eq!(mittag_leffler_diagnostic(&gs, &vec![m(&[vec![2]]); 6], 5).unwrap(), MittagLeffler::NotStabilizedWithin(5));
    }

    #[test]
    fn projection_tower_stabilizes_by_one() {
        // ℤ/8 ← ℤ/8⊕ℤ/2 ← ℤ/8⊕ℤ/2 ← …, first map the projection, the rest
        // (x, y) ↦ (x, 0). Canonical generator order is (ℤ/2, ℤ/8).
        let a = group(0, &[2, 8]);
        let gs = vec![group(0, &[8]), a.clone(), a.clone(), a.clone(), a];
        let proj = m(&[vec![0, 1]]);
        let kill = m(&[vec![0, 0], vec![0, 1]]);
        let maps = vec![proj, kill.clone(), kill.clone(), kill];
        assert_eq!(mittag_leffler_diagnostic(&gs, &maps, 3).unwrap(), MittagLeffler::ImagesStabilizeBy(1));
    }
}
