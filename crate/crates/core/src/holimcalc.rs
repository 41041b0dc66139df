//! Limits of stabilized towers, the Milnor sequence, hypercompleteness and
//! the universal-coefficient ladder.

use serde::Serialize;

use crate::certificate::{Certificate, Witness};
use crate::complex::{hom_complex, homology, induced_map, is_quasi_iso, ChainComplex, ChainMap, HomologyProfile};
use crate::error::Result;
use crate::exactalg::group::{ext_group, hom_group};
use crate::exactalg::{tower_lim_lim1, FpAbelianGroup, GroupTower, Lim1Status};
use crate::sections::{postnikov_tower, TowerSection};
use crate::trunc::postnikov_section;

/// The stable complex of a tower with its projections to every level.
#[derive(Clone, Debug)]
pub struct TowerLimit {
    pub complex: ChainComplex,
    /// `projections[i]: lim → X_i`.
    pub projections: Vec<ChainMap>,
}

pub fn tower_limit(t: &TowerSection) -> Result<TowerLimit> {
    t.verify_stabilization()?;
    let top = t.length();
    let complex = t.level(top).clone();
    let mut projections = vec![ChainMap::identity(&complex)];
    for i in (0..top).rev() {
        let next = projections.last().expect("nonempty").then(t.map(i))?;
        projections.push(next);
    }
    projections.reverse();
    Ok(TowerLimit { complex, projections })
}

/// `H_i` of every level as a group tower, with the tower's stabilization
/// index.
pub fn homology_tower(t: &TowerSection, i: i64) -> Result<GroupTower> {
    let groups = t.levels().iter().map(|x| crate::complex::homology_at(x, i).group().clone()).collect();
    let maps = t.maps().iter().map(|f| induced_map(f, i).matrix().clone()).collect();
    GroupTower::new(groups, maps, t.stable_from())
}

/// `0 → lim¹ H_{i+1} → H_i(lim) → lim H_i → 0` with `lim¹ = 0` certified
/// by stabilization and the right map an isomorphism.
pub fn milnor_check(t: &TowerSection, i: i64) -> Result<Certificate> {
    let limit = tower_limit(t)?;
    let upper = homology_tower(t, i + 1)?;
    let lower = homology_tower(t, i)?;
    let (_, lim1) = tower_lim_lim1(&upper);
    let Lim1Status::VanishesByStabilization { from } = lim1;
    let lim1_cert = Certificate::pass(format!("lim¹ H_{} = 0", i + 1)).with_note(format!("images stabilize from level {from}"));
    let (lim, _) = tower_lim_lim1(&lower);
    let s = lower.stabilization_index();
    let comparison = induced_map(&limit.projections[s], i);
    let iso = if comparison.is_isomorphism() {
        Certificate::pass(format!("H_{i}(lim) → lim H_{i}")).with_note(format!("both are {lim}"))
    } else {
        let hl = comparison.source().normal_form();
        Certificate::fail(format!("H_{i}(lim) → lim H_{i}"), Witness::degree(i, format!("{hl} → {lim} is not an isomorphism")))
    };
    Ok(Certificate::all(format!("Milnor sequence in degree {i}"), vec![lim1_cert, iso]))
}

/// `X → lim_n P_n X` is a quasi-isomorphism.
pub fn hypercomplete_check(x: &ChainComplex) -> Certificate {
    let m = x.span().map_or(0, |(_, hi)| hi.max(0)) + 1;
    let tower = postnikov_tower(x, m as usize);
    let limit = match tower_limit(&tower) {
        Ok(l) => l,
        Err(e) => return Certificate::fail("hypercomplete", Witness::note(e.to_string())),
    };
    let unit = postnikov_section(x, m).quotient;
    debug_assert_eq!(unit.target(), &limit.complex);
    let mut cert = is_quasi_iso(&unit);
    cert.check = "X → holim P_n X is a quasi-isomorphism".into();
    cert
}

/// `H_*(Hom(ℤ[i], P_n X))` against `H_*(Hom(ℤ[i], X))` truncated above
/// `n − i`, using `H_k(Hom(ℤ[i], Y)) = H_{k+i}(Y)`.
pub fn generator_commutation_check(i: i64, x: &ChainComplex, n: i64) -> Result<Certificate> {
    let g = ChainComplex::sphere(i);
    let lhs = homology(&hom_complex(&g, &postnikov_section(x, n).complex)?);
    let rhs = homology(&hom_complex(&g, x)?).truncated_above(n - i);
    let check = format!("map(Z[{i}], P_{n} X) = P_{n} map(Z[{i}], X)");
    Ok(match first_difference(&lhs, &rhs) {
        None => Certificate::pass(check),
        Some(k) => Certificate::fail(check, Witness::degree(k, format!("{} vs {}", lhs.get(k), rhs.get(k)))),
    })
}

fn first_difference(a: &HomologyProfile, b: &HomologyProfile) -> Option<i64> {
    let mut ds: Vec<i64> = a.iter().map(|(k, _)| k).chain(b.iter().map(|(k, _)| k)).collect();
    ds.sort_unstable();
    ds.into_iter().find(|&k| a.get(k) != b.get(k))
}

/// One row of the ladder: corners and direct computations in degree `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderRow {
    pub i: i64,
    /// `⊕_j Ext(H_j M, H_{j+i+1} N)`.
    pub ext: FpAbelianGroup,
    /// `⊕_j Hom(H_j M, H_{j+i} N)`.
    pub hom: FpAbelianGroup,
    pub ext_truncated: FpAbelianGroup,
    pub hom_truncated: FpAbelianGroup,
    /// `H_i(Hom(M, N))`.
    pub direct: FpAbelianGroup,
    /// `H_i(Hom(M, P_n N))`.
    pub direct_truncated: FpAbelianGroup,
}

#[derive(Clone, Debug)]
pub struct LadderReport {
    pub n: i64,
    pub rows: Vec<LadderRow>,
    /// `(H_n Hom(M, N), H_n Hom(M, P_n N))` when they differ.
    pub discrepancy: Option<(FpAbelianGroup, FpAbelianGroup)>,
    pub certificate: Certificate,
}

impl LadderReport {
    pub fn row(&self, i: i64) -> Option<&LadderRow> {
        self.rows.iter().find(|r| r.i == i)
    }
}

fn uct_corners(hm: &HomologyProfile, hn: &HomologyProfile, i: i64) -> (FpAbelianGroup, FpAbelianGroup) {
    let mut ext = FpAbelianGroup::zero();
    let mut hom = FpAbelianGroup::zero();
    for (j, a) in hm.iter() {
        ext = ext.direct_sum(&ext_group(a, &hn.get(j + i + 1)));
        hom = hom.direct_sum(&hom_group(a, &hn.get(j + i)));
    }
    (ext, hom)
}

/// Builds the ladder comparing `Hom(M, N)` with `Hom(M, P_n N)` and checks
/// (a) the split universal coefficient sequence in every row, (b) vanishing
/// above `n`, (c) agreement below `n`, and (d) agreement at `n` whenever the
/// `Ext` corner vanishes.
///
/// The thresholds in (b)–(d) are the ones for `M` whose homology sits in
/// degree 0; the certificate notes when that is not the case.
pub fn uct_ladder(m: &ChainComplex, nc: &ChainComplex, n: i64) -> Result<LadderReport> {
    let p = postnikov_section(nc, n).complex;
    let (hom_full, hom_trunc) = (hom_complex(m, nc)?, hom_complex(m, &p)?);
    let (hm, hn, hp) = (homology(m), homology(nc), homology(&p));
    let (hf, ht) = (homology(&hom_full), homology(&hom_trunc));
    let spans: Vec<(i64, i64)> = [&hom_full, &hom_trunc].iter().filter_map(|c| c.span()).collect();
    let lo = spans.iter().map(|s| s.0).min().unwrap_or(n).min(n);
    let hi = spans.iter().map(|s| s.1).max().unwrap_or(n).max(n);
    let rows: Vec<LadderRow> = (lo..=hi)
        .map(|i| {
            let (ext, hom) = uct_corners(&hm, &hn, i);
            let (ext_truncated, hom_truncated) = uct_corners(&hm, &hp, i);
            LadderRow { i, ext, hom, ext_truncated, hom_truncated, direct: hf.get(i), direct_truncated: ht.get(i) }
        })
        .collect();

    let mut split = Vec::new();
    for r in &rows {
        for (which, e, h, d) in [("N", &r.ext, &r.hom, &r.direct), ("P_n N", &r.ext_truncated, &r.hom_truncated, &r.direct_truncated)] {
            if &e.direct_sum(h) != d {
                split.push(Certificate::fail(
                    format!("(a) split sequence for {which}"),
                    Witness::degree(r.i, format!("Ext {e} + Hom {h} but H = {d}")),
                ));
            }
        }
    }
    let a = if split.is_empty() {
        Certificate::pass("(a) split universal coefficient sequences")
    } else {
        Certificate::all("(a) split universal coefficient sequences", split)
    };
    let b = match rows.iter().find(|r| r.i > n && !r.direct_truncated.is_zero()) {
        None => Certificate::pass(format!("(b) H_i Hom(M, P_{n} N) = 0 for i > {n}")),
        Some(r) => Certificate::fail(
            format!("(b) H_i Hom(M, P_{n} N) = 0 for i > {n}"),
            Witness::degree(r.i, format!("H_{} = {}", r.i, r.direct_truncated)),
        ),
    };
    let c = match rows.iter().find(|r| r.i < n && r.direct != r.direct_truncated) {
        None => Certificate::pass(format!("(c) agreement for i < {n}")),
        Some(r) => {
            Certificate::fail(format!("(c) agreement for i < {n}"), Witness::degree(r.i, format!("{} vs {}", r.direct, r.direct_truncated)))
        }
    };
    let at_n = rows.iter().find(|r| r.i == n).expect("the row range contains n");
    let discrepancy = (at_n.direct != at_n.direct_truncated).then(|| (at_n.direct.clone(), at_n.direct_truncated.clone()));
    let d = match (&discrepancy, at_n.ext.is_zero()) {
        (None, _) => Certificate::pass(format!("(d) agreement at {n}")),
        (Some((f, t)), false) => Certificate::pass(format!("(d) agreement at {n}"))
            .with_note(format!("Ext corner {} is nonzero; H_{n} Hom(M, N) = {f} but H_{n} Hom(M, P_{n} N) = {t}", at_n.ext)),
        (Some((f, t)), true) => {
            Certificate::fail(format!("(d) agreement at {n}"), Witness::degree(n, format!("Ext corner vanishes yet {f} vs {t}")))
        }
    };
    let mut certificate = Certificate::all(format!("UCT ladder at n = {n}"), vec![a, b, c, d]);
    if hm.iter().any(|(j, _)| j != 0) {
        certificate = certificate.with_note("H_*(M) is not concentrated in degree 0; thresholds (b)-(d) assume it is");
    }
    Ok(LadderReport { n, rows, discrepancy, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{direct_sum, shift};
    use crate::exactalg::group::group;

    fn sample() -> ChainComplex {
        let x = direct_sum(&ChainComplex::moore(2, 0), &ChainComplex::sphere(2));
        direct_sum(&x, &shift(&ChainComplex::moore(3, 0), 1))
    }

    #[test]
    fn limits() {
        let x = sample();
        let t = TowerSection::constant(&x, 3);
        assert_eq!(tower_limit(&t).unwrap().complex, x);
        let t = postnikov_tower(&x, 4);
        let l = tower_limit(&t).unwrap();
        assert_eq!(homology(&l.complex), homology(&x));
        assert_eq!(l.projections.len(), 5);
    }

    #[test]
    fn fake_stabilization_is_rejected() {
        let t = postnikov_tower(&sample(), 4);
        let fake = TowerSection::new(t.levels().to_vec(), t.maps().to_vec(), 0).unwrap();
        assert!(matches!(tower_limit(&fake), Err(crate::Error::StabilizationViolated { index: 0, .. })));
    }

    #[test]
    fn milnor() {
        let t = postnikov_tower(&sample(), 4);
        for i in -1..=5 {
            assert!(milnor_check(&t, i).unwrap().passed, "degree {i}");
        }
    }

    #[test]
    fn hypercomplete() {
        assert!(hypercomplete_check(&ChainComplex::sphere(3)).passed);
        assert!(hypercomplete_check(&ChainComplex::moore(5, 0)).passed);
        assert!(hypercomplete_check(&sample()).passed);
        assert!(hypercomplete_check(&shift(&sample(), -3)).passed);
    }

    #[test]
    fn generator_commutation() {
        let x = shift(&ChainComplex::moore(2, 0), 2);
        for i in 0..=2 {
            for n in -1..=4 {
                assert!(generator_commutation_check(i, &x, n).unwrap().passed, "i = {i}, n = {n}");
            }
        }
        assert!(generator_commutation_check(9, &x, 3).unwrap().passed);
    }

    #[test]
    fn ladder_for_sphere_source() {
        let r = uct_ladder(&ChainComplex::sphere(0), &sample(), 1).unwrap();
        assert!(r.certificate.passed, "{}", r.certificate);
        assert!(r.discrepancy.is_none());
    }

    #[test]
    fn ladder_exhibits_the_ext_caveat() {
        // H_0 M = ℤ/2, H_2 N = ℤ/2, n = 1.
        let m = ChainComplex::moore(2, 0);
        let nc = ChainComplex::moore(2, 2);
        let r = uct_ladder(&m, &nc, 1).unwrap();
        assert!(r.certificate.passed, "{}", r.certificate);
        assert_eq!(r.row(1).unwrap().ext, group(0, &[2]));
        assert!(r.discrepancy.is_some());
    }

    #[test]
    fn ladder_torsion_free_target() {
        let nc = direct_sum(&ChainComplex::sphere(2), &ChainComplex::sphere(1));
        let free = direct_sum(&ChainComplex::sphere(0), &ChainComplex::disk(1));
        let r = uct_ladder(&free, &nc, 1).unwrap();
        assert!(r.certificate.passed);
        assert!(r.discrepancy.is_none());
        // Ext(ℤ/2, ℤ) = ℤ/2, so a torsion-free target alone does not suffice.
        let r = uct_ladder(&ChainComplex::moore(2, 0), &nc, 1).unwrap();
        assert!(r.certificate.passed);
        assert_eq!(r.row(1).unwrap().ext, group(0, &[2]));
        assert!(r.discrepancy.is_some());
    }
}
