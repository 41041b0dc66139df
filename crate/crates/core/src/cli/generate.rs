//! Seeded random complexes.
//!
//! A complex is a direct sum of small pieces (spheres, disks, Moore
//! complexes and torsion pieces), each with `d² = 0`, followed by random
//! unimodular changes of basis in each degree. Basis changes conjugate the
//! differentials, so `d² = 0` survives, and are kept only while every entry
//! stays within the profile's bound.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::document::ComplexDocument;
use crate::complex::{direct_sum, ChainComplex};
use crate::exactalg::group::group;
use crate::exactalg::{IntMatrix, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub name: &'static str,
    /// Number of consecutive degrees that may be occupied, at most 8.
    pub max_span: u32,
    pub max_gens: usize,
    pub max_entry: i64,
    /// Torsion primes, a subset of {2, 3, 5}.
    pub primes: Vec<u64>,
    /// Range of the lowest occupied degree.
    pub lowest: (i64, i64),
    /// Only degreewise free complexes.
    pub free: bool,
}

impl Default for Profile {
    fn default() -> Self {
        Profile { name: "default", max_span: 6, max_gens: 4, max_entry: 5, primes: vec![2, 3, 5], lowest: (-1, 1), free: false }
    }
}

impl Profile {
    pub fn free() -> Self {
        Profile { name: "free", free: true, ..Self::default() }
    }

    /// Cyclic orders whose prime factors lie in `primes`, within the entry
    /// bound.
    fn orders(&self) -> Vec<i64> {
        (2..=self.max_entry)
            .filter(|&m| {
                let mut r = m;
                for &p in &self.primes {
                    while r % p as i64 == 0 {
                        r /= p as i64;
                    }
                }
                r == 1
            })
            .collect()
    }
}

fn torsion_map(m: i64, a: i64, n: i64) -> ChainComplex {
    let p = group(0, &[m]).presentation();
    ChainComplex::new(n - 1, vec![p.clone(), p], vec![IntMatrix::from_rows(&[vec![a]])]).expect("multiplication between cyclic groups")
}

fn piece(rng: &mut ChaCha8Rng, profile: &Profile, lo: i64, hi: i64) -> ChainComplex {
    let orders = profile.orders();
    let kinds = if profile.free || orders.is_empty() { 3 } else { 6 };
    let kind = if orders.is_empty() { rng.gen_range(0..2u32) } else { rng.gen_range(0..kinds) };
    let two = hi > lo;
    let top = |rng: &mut ChaCha8Rng| rng.gen_range(lo + 1..=hi);
    let order = |rng: &mut ChaCha8Rng| orders[rng.gen_range(0..orders.len() as u32) as usize];
    match kind {
        1 if two => ChainComplex::disk(top(rng)),
        2 if two => {
            let m = order(rng);
            ChainComplex::moore(m, top(rng) - 1)
        }
        3 => ChainComplex::concentrated(rng.gen_range(lo..=hi), group(0, &[order(rng)]).presentation()),
        4 if two && profile.primes.contains(&2) && profile.max_entry >= 4 => torsion_map(4, 2, top(rng)),
        5 if two => torsion_map(order(rng), 1, top(rng)),
        _ => ChainComplex::sphere(rng.gen_range(lo..=hi)),
    }
}

struct Raw {
    min: i64,
    gens: Vec<usize>,
    relations: Vec<IntMatrix>,
    /// `ds[k]` is `d` out of degree `min + k`; `ds[0]` is empty.
    ds: Vec<IntMatrix>,
}

impl Raw {
    fn of(x: &ChainComplex) -> Self {
        let (min, groups, _) = x.parts();
        Raw {
            min,
            gens: groups.iter().map(Presentation::gens).collect(),
            relations: groups.iter().map(|p| p.relations().clone()).collect(),
            ds: x.degrees().map(|n| x.differential(n)).collect(),
        }
    }

    /// Replaces the basis of degree `min + k` by `(I + c·E_{ij})`.
    fn basis_change(&mut self, k: usize, i: usize, j: usize, c: i64, bound: i64) {
        let c = BigInt::from(c);
        let saved = (self.relations[k].clone(), self.ds[k].clone(), self.ds.get(k + 1).cloned());
        self.relations[k].add_row_multiple(i, j, &c);
        self.ds[k].add_col_multiple(j, i, &-&c);
        if let Some(up) = self.ds.get_mut(k + 1) {
            up.add_row_multiple(i, j, &c);
        }
        let bound = BigInt::from(bound);
        let within = self.relations[k].max_abs() <= bound
            && self.ds[k].max_abs() <= bound
            && self.ds.get(k + 1).is_none_or(|m| m.max_abs() <= bound);
        if !within {
            self.relations[k] = saved.0;
            self.ds[k] = saved.1;
            if let Some(up) = saved.2 {
                self.ds[k + 1] = up;
            }
        }
    }

    fn complex(self) -> ChainComplex {
        let degrees = self.gens.iter().zip(self.relations).map(|(&g, r)| Presentation::new(g, r)).collect();
        ChainComplex::new(self.min, degrees, self.ds.into_iter().skip(1).collect()).expect("basis changes preserve d² = 0")
    }
}

pub fn generate_complex(seed: u64, profile: &Profile) -> ChainComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = rng.gen_range(profile.lowest.0..=profile.lowest.1);
    let hi = lo + rng.gen_range(0..profile.max_span.clamp(1, 8)) as i64;
    let pieces = rng.gen_range(1..=4u32);
    let mut x = ChainComplex::zero();
    for _ in 0..pieces {
        let p = piece(&mut rng, profile, lo, hi);
        let candidate = direct_sum(&x, &p);
        if candidate.degrees().all(|n| candidate.gens(n) <= profile.max_gens) {
            x = candidate;
        }
    }
    let mut raw = Raw::of(&x);
    for k in 0..raw.gens.len() {
        let g = raw.gens[k];
        if g < 2 {
            continue;
        }
        for _ in 0..rng.gen_range(0..=3u32) {
            let i = rng.gen_range(0..g as u32) as usize;
            let j = (i + rng.gen_range(1..g as u32) as usize) % g;
            let c = [-2, -1, 1, 2][rng.gen_range(0..4u32) as usize];
            raw.basis_change(k, i, j, c, profile.max_entry);
        }
    }
    raw.complex()
}

pub fn generate(seed: u64, profile: &Profile) -> ComplexDocument {
    let x = generate_complex(seed, profile);
    let mut doc = ComplexDocument::from_complex(format!("{}-{seed}", profile.name), &x);
    doc.metadata = Some(serde_json::json!({ "seed": seed.to_string(), "profile": profile.name }));
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::document::{parse, to_json, Loaded};

    #[test]
    fn deterministic_and_valid() {
        for seed in 0..200 {
            let doc = generate(seed, &Profile::default());
            assert_eq!(doc, generate(seed, &Profile::default()));
            let Loaded::Complex(x) = parse(&to_json(&doc)).unwrap() else { panic!() };
            assert_eq!(x, generate_complex(seed, &Profile::default()));
            let (lo, hi) = x.span().unwrap();
            assert!(hi - lo < 8);
            for n in x.degrees() {
                assert!(x.gens(n) <= 4);
                assert!(x.differential(n).max_abs() <= BigInt::from(5));
                assert!(x.group(n).relations().max_abs() <= BigInt::from(5));
            }
        }
    }

    #[test]
    fn free_profile() {
        assert!((0..100).all(|s| generate_complex(s, &Profile::free()).is_degreewise_free()));
    }

    #[test]
    fn orders() {
        assert_eq!(Profile::default().orders(), vec![2, 3, 4, 5]);
        assert_eq!(Profile { primes: vec![3], ..Profile::default() }.orders(), vec![3]);
    }
}
