use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::exactalg::lattice::preimage;
use crate::exactalg::map::SubgroupPresentation;
use crate::exactalg::{IntMatrix, Presentation};

fn degree_range(xs: &[&ChainComplex]) -> Option<(i64, i64)> {
    let spans: Vec<(i64, i64)> = xs.iter().filter_map(|x| x.span()).collect();
    let lo = spans.iter().map(|s| s.0).min()?;
    let hi = spans.iter().map(|s| s.1).max()?;
    Some((lo, hi))
}

/// `X[n]`: degree `k` moves to `k + n`; the differential picks up `(−1)^n`.
pub fn shift(x: &ChainComplex, n: i64) -> ChainComplex {
    let Some((lo, hi)) = x.span() else { return ChainComplex::zero() };
    let sign = BigInt::from(if n.rem_euclid(2) == 0 { 1 } else { -1 });
    let degrees = (lo..=hi).map(|k| x.group(k).clone()).collect();
    let ds = (lo + 1..=hi).map(|k| x.differential(k).scaled(&sign)).collect();
    ChainComplex::new_unchecked(lo + n, degrees, ds)
}

pub fn direct_sum(x: &ChainComplex, y: &ChainComplex) -> ChainComplex {
    let Some((lo, hi)) = degree_range(&[x, y]) else { return ChainComplex::zero() };
    let degrees = (lo..=hi).map(|k| x.group(k).direct_sum(y.group(k))).collect();
    let ds = (lo + 1..=hi).map(|k| x.differential(k).block_diag(&y.differential(k))).collect();
    ChainComplex::new_unchecked(lo, degrees, ds)
}

/// `Cone(f)_k = X_{k−1} ⊕ Y_k`, `d(x, y) = (−d x, f x + d y)`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let (x, y) = (f.source(), f.target());
    let sx = shift(x, 1);
    let Some((lo, hi)) = degree_range(&[&sx, y]) else { return ChainComplex::zero() };
    let degrees = (lo..=hi).map(|k| x.group(k - 1).direct_sum(y.group(k))).collect();
    let ds = (lo + 1..=hi)
        .map(|k| {
            let (xa, ya) = (x.gens(k - 1), y.gens(k));
            let (xb, yb) = (x.gens(k - 2), y.gens(k - 1));
            let mut m = IntMatrix::zeros(xb + yb, xa + ya);
            m.set_block(0, 0, &x.differential(k - 1).neg());
            m.set_block(xb, 0, &f.component(k - 1));
            m.set_block(xb, xa, &y.differential(k));
            m
        })
        .collect();
    ChainComplex::new_unchecked(lo, degrees, ds)
}

/// Degreewise cokernel `Y / f(X)` with the quotient map `Y → Y / f(X)`.
pub fn degreewise_cokernel(f: &ChainMap) -> (ChainComplex, ChainMap) {
    let y = f.target();
    let Some((lo, hi)) = y.span() else { return (ChainComplex::zero(), ChainMap::zero(y, y)) };
    let degrees = (lo..=hi).map(|n| y.group(n).with_relations(&f.component(n))).collect();
    let ds = (lo + 1..=hi).map(|n| y.differential(n)).collect();
    let q = ChainComplex::new_unchecked(lo, degrees, ds);
    let proj = ChainMap::from_fn_unchecked(y, &q, |n| IntMatrix::identity(y.gens(n)));
    (q, proj)
}

/// Block layout of `Hom(M, N)_k = ⊕_i Hom(M_i, N_{i+k})`.
struct HomBlocks {
    /// `(i, offset, dim M_i, dim N_{i+k})` per nonempty block.
    blocks: Vec<(i64, usize, usize, usize)>,
    total: usize,
}

impl HomBlocks {
    fn new(m: &ChainComplex, n: &ChainComplex, k: i64) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in m.degrees() {
            let (a, b) = (m.gens(i), n.gens(i + k));
            if a > 0 && b > 0 {
                blocks.push((i, off, a, b));
                off += a * b;
            }
        }
        HomBlocks { blocks, total: off }
    }

    fn offset(&self, i: i64) -> Option<(usize, usize)> {
        self.blocks.iter().find(|blk| blk.0 == i).map(|&(_, off, _, b)| (off, b))
    }
}

/// The mapping complex `Hom(M, N)` for degreewise free `M`.
///
/// A degree-`k` element is a family `f_i: M_i → N_{i+k}`, and
/// `(df)(x) = d(f(x)) + (−1)^{k+1} f(d(x))`. The generator `(i, p, q)` is
/// the map sending basis vector `p` of `M_i` to generator `q` of `N_{i+k}`.
///
/// With this grading `H_k(Hom(ℤ[i], N)) = H_{k+i}(N)`.
pub fn hom_complex(m: &ChainComplex, n: &ChainComplex) -> Result<ChainComplex> {
    if let Some(deg) = m.first_relation_degree() {
        return Err(Error::TorsionSource { degree: deg });
    }
    let (Some((mlo, mhi)), Some((nlo, nhi))) = (m.span(), n.span()) else {
        return Ok(ChainComplex::zero());
    };
    let (lo, hi) = (nlo - mhi, nhi - mlo);
    let layouts: BTreeMap<i64, HomBlocks> = (lo - 1..=hi).map(|k| (k, HomBlocks::new(m, n, k))).collect();

    let degrees = (lo..=hi)
        .map(|k| {
            let lay = &layouts[&k];
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for &(i, off, a, b) in &lay.blocks {
                let r = n.group(i + k).relations();
                for p in 0..a {
                    for col in r.columns() {
                        let mut v = vec![BigInt::from(0); lay.total];
                        for (q, x) in col.into_iter().enumerate() {
                            v[off + p * b + q] = x;
                        }
                        rels.push(v);
                    }
                }
            }
            Presentation::new(lay.total, IntMatrix::from_columns(lay.total, &rels))
        })
        .collect();

    let ds = (lo + 1..=hi)
        .map(|k| {
            let (src, tgt) = (&layouts[&k], &layouts[&(k - 1)]);
            let mut d = IntMatrix::zeros(tgt.total, src.total);
            let sign = BigInt::from(if (k + 1).rem_euclid(2) == 0 { 1 } else { -1 });
            for &(i, off, a, b) in &src.blocks {
                // d ∘ f_i lands in the block of M_i → N_{i+k−1}.
                if let Some((toff, tb)) = tgt.offset(i) {
                    let dn = n.differential(i + k);
                    for p in 0..a {
                        for q in 0..b {
                            for q2 in 0..tb {
                                let x = &dn[(q2, q)];
                                if *x != BigInt::from(0) {
                                    d[(toff + p * tb + q2, off + p * b + q)] += x;
                                }
                            }
                        }
                    }
                }
                // ±f_i ∘ d lands in the block of M_{i+1} → N_{i+k}.
                if let Some((toff, tb)) = tgt.offset(i + 1) {
                    debug_assert_eq!(tb, b);
                    let dm = m.differential(i + 1);
                    for p in 0..a {
                        for p2 in 0..dm.cols() {
                            let x = &dm[(p, p2)];
                            if *x == BigInt::from(0) {
                                continue;
                            }
                            let v = x * &sign;
                            for q in 0..b {
                                d[(toff + p2 * tb + q, off + p * b + q)] += &v;
                            }
                        }
                    }
                }
            }
            d
        })
        .collect();
    Ok(ChainComplex::new_unchecked(lo, degrees, ds))
}

/// Degreewise pullback `A ×_C B` of `f: A → C` and `g: B → C`.
#[derive(Clone, Debug)]
pub struct ComplexPullback {
    pub complex: ChainComplex,
    pub to_a: ChainMap,
    pub to_b: ChainMap,
    subgroups: BTreeMap<i64, SubgroupPresentation>,
}

impl ComplexPullback {
    /// The map `W → A ×_C B` induced by `a: W → A`, `b: W → B` with
    /// `f ∘ a = g ∘ b`.
    pub fn lift(&self, a: &ChainMap, b: &ChainMap) -> Result<ChainMap> {
        if a.source() != b.source() {
            return Err(Error::IllFormedMap { reason: "lift legs have different sources".into() });
        }
        let w = a.source();
        let mut comps = Vec::new();
        for n in w.degrees() {
            let stacked = a.component(n).vconcat(&b.component(n));
            comps.push(match self.subgroups.get(&n) {
                Some(sub) => sub
                    .coordinates_of_columns(&stacked)
                    .ok_or_else(|| Error::IllFormedMap { reason: format!("legs do not agree in degree {n}") })?,
                None => IntMatrix::zeros(self.complex.gens(n), w.gens(n)),
            });
        }
        ChainMap::new(w.clone(), self.complex.clone(), comps)
    }
}

pub fn degreewise_pullback(f: &ChainMap, g: &ChainMap) -> Result<ComplexPullback> {
    if f.target() != g.target() {
        return Err(Error::IllFormedMap { reason: "pullback legs have different targets".into() });
    }
    let (a, b, c) = (f.source(), g.source(), f.target());
    let Some((lo, hi)) = degree_range(&[a, b]) else {
        let z = ChainComplex::zero();
        return Ok(ComplexPullback { to_a: ChainMap::zero(&z, a), to_b: ChainMap::zero(&z, b), complex: z, subgroups: BTreeMap::new() });
    };
    let mut subs = BTreeMap::new();
    for n in lo..=hi {
        let stacked = f.component(n).hconcat(&g.component(n).neg());
        let outer = preimage(&stacked, c.group(n).relation_lattice());
        let sum = a.group(n).direct_sum(b.group(n));
        subs.insert(n, SubgroupPresentation::new(&outer, sum.relation_lattice()));
    }
    let degrees: Vec<Presentation> = (lo..=hi).map(|n| subs[&n].presentation.clone()).collect();
    let mut ds = Vec::new();
    for n in lo + 1..=hi {
        let d = a.differential(n).block_diag(&b.differential(n));
        let images = &d * &subs[&n].inclusion;
        let coords = subs[&(n - 1)]
            .coordinates_of_columns(&images)
            .ok_or_else(|| Error::IllFormedMap { reason: format!("pullback differential leaves the pullback in degree {n}") })?;
        ds.push(coords);
    }
    let complex = ChainComplex::new(lo, degrees, ds)?;
    let subs_ref = &subs;
    let proj = |which: usize| {
        move |n: i64| {
            let (ga, gb) = (a.gens(n), b.gens(n));
            let sel = if which == 0 {
                IntMatrix::identity(ga).hconcat(&IntMatrix::zeros(ga, gb))
            } else {
                IntMatrix::zeros(gb, ga).hconcat(&IntMatrix::identity(gb))
            };
            &sel * &subs_ref[&n].inclusion
        }
    };
    // Trimming may have dropped empty end degrees; components follow the
    // trimmed span.
    let to_a = ChainMap::from_fn(&complex, a, proj(0))?;
    let to_b = ChainMap::from_fn(&complex, b, proj(1))?;
    Ok(ComplexPullback { complex, to_a, to_b, subgroups: subs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology::{homology, is_quasi_iso};
    use crate::exactalg::group::group;
    use crate::exactalg::FpAbelianGroup;

    #[test]
    fn shift_sphere() {
        assert_eq!(shift(&ChainComplex::sphere(0), 3), ChainComplex::sphere(3));
        assert_eq!(homology(&shift(&ChainComplex::moore(2, 0), -2)).get(-2), group(0, &[2]));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let x = direct_sum(&ChainComplex::moore(6, 1), &ChainComplex::sphere(0));
        assert!(homology(&mapping_cone(&ChainMap::identity(&x))).is_zero());
    }

    #[test]
    fn hom_from_sphere_is_shift() {
        // H_k(Hom(ℤ[1], Moore(2))) = H_{k+1}(Moore(2)): ℤ/2 sits in degree −1.
        let n = ChainComplex::moore(2, 0);
        let h = homology(&hom_complex(&ChainComplex::sphere(1), &n).unwrap());
        assert_eq!(h.get(-1), group(0, &[2]));
        assert!(h.get(0).is_zero());
        assert!(hom_complex(&ChainComplex::sphere(0), &ChainComplex::zero()).unwrap().is_zero());
    }

    #[test]
    fn hom_out_of_moore_picks_up_ext() {
        // Hom(Moore(2), ℤ[0]): ℤ in degrees 0, −1 with d = −2, so H_{−1} = ℤ/2.
        let h = homology(&hom_complex(&ChainComplex::moore(2, 0), &ChainComplex::sphere(0)).unwrap());
        assert_eq!(h.get(-1), group(0, &[2]));
        assert!(h.get(0).is_zero());
    }

    #[test]
    fn hom_rejects_torsion_source() {
        let t = ChainComplex::concentrated(2, group(0, &[3]).presentation());
        assert_eq!(hom_complex(&t, &ChainComplex::sphere(0)).unwrap_err(), Error::TorsionSource { degree: 2 });
    }

    #[test]
    fn pullback_identity_and_zero() {
        let x = ChainComplex::moore(4, 0);
        let id = ChainMap::identity(&x);
        let p = degreewise_pullback(&id, &id).unwrap();
        assert_eq!(homology(&p.complex), homology(&x));
        assert!(is_quasi_iso(&p.to_a).passed);

        let y = ChainComplex::sphere(1);
        let z = ChainComplex::zero();
        let p = degreewise_pullback(&ChainMap::zero(&x, &z), &ChainMap::zero(&y, &z)).unwrap();
        assert_eq!(homology(&p.complex), homology(&direct_sum(&x, &y)));
    }

    #[test]
    fn pullback_of_quotient_along_zero_is_kernel() {
        // q: ℤ → ℤ/2 in degree 0, pulled back along 0 → ℤ/2: kernel 2ℤ ≅ ℤ.
        let x = ChainComplex::sphere(0);
        let p = ChainComplex::concentrated(0, group(0, &[2]).presentation());
        let q = ChainMap::from_fn(&x, &p, |_| IntMatrix::identity(1)).unwrap();
        let pb = degreewise_pullback(&q, &ChainMap::zero(&ChainComplex::zero(), &p)).unwrap();
        assert_eq!(homology(&pb.complex).get(0), FpAbelianGroup::free(1));
        assert_eq!(pb.to_a.component(0).column(0)[0].clone(), BigInt::from(2));
    }
}
