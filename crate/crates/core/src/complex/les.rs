use num_bigint::BigInt;

use super::homology::{homology_at, induced_between, HomologyGroup};
use super::ChainMap;
use crate::certificate::{Certificate, Witness};
use crate::error::{Error, Result};
use crate::exactalg::lattice::solve;
use crate::exactalg::{exactness_at, Exactness, GroupMap, IntMatrix};

/// `0 → A --i--> B --p--> C → 0`, exact in every degree.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub i: ChainMap,
    pub p: ChainMap,
}

impl ShortExactSequence {
    pub fn new(i: ChainMap, p: ChainMap) -> Result<Self> {
        if i.target() != p.source() {
            return Err(Error::IllFormedMap { reason: "short exact sequence maps are not composable".into() });
        }
        Ok(ShortExactSequence { i, p })
    }

    /// Degreewise injectivity of `i`, surjectivity of `p` and exactness in the
    /// middle.
    pub fn degreewise_check(&self) -> Certificate {
        let b = self.i.target();
        let lo = [self.i.source(), b, self.p.target()].iter().filter_map(|x| x.span()).map(|s| s.0).min();
        let hi = [self.i.source(), b, self.p.target()].iter().filter_map(|x| x.span()).map(|s| s.1).max();
        let (Some(lo), Some(hi)) = (lo, hi) else { return Certificate::pass("degreewise short exact") };
        for n in lo..=hi {
            let (i, p) = (self.i.component_map(n), self.p.component_map(n));
            if !i.is_injective() {
                return Certificate::fail("degreewise short exact", Witness::degree(n, "i is not injective"));
            }
            if !p.is_surjective() {
                return Certificate::fail("degreewise short exact", Witness::degree(n, "p is not surjective"));
            }
            if exactness_at(&i, &p) != Exactness::Exact {
                return Certificate::fail("degreewise short exact", Witness::degree(n, "ker p differs from im i"));
            }
        }
        Certificate::pass("degreewise short exact")
    }

    pub fn long_exact_sequence(&self) -> LongExactSequence {
        LongExactSequence::of(self)
    }
}

/// One arrow of the long exact sequence.
#[derive(Clone, Debug)]
pub struct LesArrow {
    /// `"i"`, `"p"` or `"delta"`.
    pub kind: &'static str,
    /// Degree of the source homology group.
    pub degree: i64,
    pub map: GroupMap,
}

/// `… → H_n A → H_n B → H_n C --δ--> H_{n−1} A → …`, listed from the top
/// degree down, with zero groups at both ends.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub arrows: Vec<LesArrow>,
}

impl LongExactSequence {
    fn of(ses: &ShortExactSequence) -> Self {
        let (a, b, c) = (ses.i.source(), ses.i.target(), ses.p.target());
        let spans: Vec<(i64, i64)> = [a, b, c].iter().filter_map(|x| x.span()).collect();
        let lo = spans.iter().map(|s| s.0).min().unwrap_or(0) - 1;
        let hi = spans.iter().map(|s| s.1).max().unwrap_or(0) + 1;
        let mut arrows = Vec::new();
        for n in (lo..=hi).rev() {
            let (ha, hb, hc) = (homology_at(a, n), homology_at(b, n), homology_at(c, n));
            let ha_below = homology_at(a, n - 1);
            arrows.push(LesArrow { kind: "i", degree: n, map: induced_between(&ses.i, &ha, &hb) });
            arrows.push(LesArrow { kind: "p", degree: n, map: induced_between(&ses.p, &hb, &hc) });
            arrows.push(LesArrow { kind: "delta", degree: n, map: connecting_map(ses, &hc, &ha_below) });
        }
        LongExactSequence { arrows }
    }

    /// Exactness at every interior spot.
    pub fn exactness_check(&self) -> Certificate {
        for w in self.arrows.windows(2) {
            if let Some(why) = match exactness_at(&w[0].map, &w[1].map) {
                Exactness::Exact => None,
                Exactness::NotAComplex => Some("composite is nonzero".to_string()),
                Exactness::Defect(g) => Some(format!("homology {g} at the target of {}", w[0].kind)),
            } {
                return Certificate::fail("long exact sequence", Witness::degree(w[0].degree, why));
            }
        }
        Certificate::pass("long exact sequence")
    }
}

/// Finds `x` with `m·x ≡ v` modulo the columns of `rel`.
fn solve_mod(m: &IntMatrix, rel: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let x = solve(&m.hconcat(rel), v)?;
    Some(x[..m.cols()].to_vec())
}

/// `δ[c] = [i⁻¹ d p⁻¹ c]`.
fn connecting_map(ses: &ShortExactSequence, hc: &HomologyGroup, ha: &HomologyGroup) -> GroupMap {
    let (b, c) = (ses.i.target(), ses.p.target());
    let n = hc.degree;
    let cols: Vec<Vec<BigInt>> = hc
        .normal
        .generators
        .columns()
        .iter()
        .map(|z| {
            let lift = solve_mod(&ses.p.component(n), c.group(n).relations(), z).expect("p is degreewise surjective");
            let db = b.differential(n).mul_vec(&lift);
            let pre = solve_mod(&ses.i.component(n - 1), b.group(n - 1).relations(), &db).expect("boundary of a lifted cycle comes from A");
            ha.normal.coordinates(&pre).expect("pulled-back boundary is a cycle")
        })
        .collect();
    let m = IntMatrix::from_columns(ha.group().generator_count(), &cols);
    GroupMap::between_normal_forms(hc.group(), ha.group(), m).expect("connecting maps are well defined")
}
