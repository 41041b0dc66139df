//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{det_big, fixture, golden, golden_cases, invariant_factors, rng, to_matrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use tower_calculus::cli::{generate_complex, load, Loaded, Profile};
use tower_calculus::complex::{direct_sum, homology, homology_at, induced_map, ChainComplex, HomologyProfile};
use tower_calculus::exactalg::{mittag_leffler_diagnostic, smith_normal_form, MittagLeffler};
use tower_calculus::fracture::{arithmetic_square_check, homology_torsion_primes, reassemble, PrimePartition};
use tower_calculus::hofib::{build_hofib_section, compatibility_check};
use tower_calculus::holimcalc::{generator_commutation_check, hypercomplete_check, milnor_check, uct_ladder};
use tower_calculus::sections::{is_homotopy_cartesian, is_post_fibrant, is_tow_cofibrant, postnikov_tower, zero_tower_map, TowerSection};
use tower_calculus::trunc::{connective_cover, fiber_sequence_check, layer};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent <= limit {
        Ok(())
    } else {
        Err(format!("took {:.2} s, limit {} s", spent.as_secs_f64(), limit.as_secs()))
    }
}

fn span(x: &ChainComplex) -> (i64, i64) {
    x.span().unwrap_or((0, 0))
}

fn smith_normal_form_criterion() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for case in 0..500 {
        let rows = common::random_matrix(&mut r, 6, 9);
        let cols = rows[0].len();
        let m = to_matrix(&rows, cols);
        let s = smith_normal_form(&m);
        ensure!(&(&s.u * &m) * &s.v == s.diagonal_matrix(), "case {case}: U·M·V is not the diagonal");
        ensure!(s.diag.windows(2).all(|w| w[1].is_zero() || (&w[1] % &w[0]).is_zero()), "case {case}: divisibility fails {:?}", s.diag);
        ensure!(s.diag.iter().all(|d| !d.is_negative()), "case {case}: negative invariant factor");
        ensure!(det_big(&s.u).abs().is_one() && det_big(&s.v).abs().is_one(), "case {case}: U or V is not unimodular");
        if case < 100 {
            let expected: Vec<BigInt> = invariant_factors(&rows, cols).into_iter().map(BigInt::from).collect();
            let nonzero: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_zero()).cloned().collect();
            ensure!(nonzero == expected, "case {case}: {nonzero:?} vs determinantal divisors {expected:?}");
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("500 matrices in {:.2} s", start.elapsed().as_secs_f64()))
}

/// Free complex with homology in degree 0 only.
fn uct_source(seed: u64) -> ChainComplex {
    let mut r = rng(seed);
    let mut m = ChainComplex::zero();
    for _ in 0..r.gen_range(1..=3u32) {
        let piece = match r.gen_range(0..3u32) {
            0 => ChainComplex::sphere(0),
            1 => ChainComplex::moore(r.gen_range(2..=5i64), 0),
            _ => ChainComplex::disk(r.gen_range(1..=2i64)),
        };
        m = direct_sum(&m, &piece);
    }
    m
}

fn uct_criterion() -> Outcome {
    let start = Instant::now();
    let mut discrepancies = 0;
    for seed in 0..200u64 {
        let m = uct_source(seed);
        let nc = generate_complex(seed, &Profile::default());
        let hn = homology(&nc);
        let mut r = rng(seed ^ 0x5eed);
        let (lo, hi) = span(&nc);
        let torsion_tops: Vec<i64> = hn.iter().filter(|(_, g)| !g.torsion().is_empty()).map(|(d, _)| d - 1).collect();
        let n = if !torsion_tops.is_empty() && r.gen_bool(0.5) {
            torsion_tops[r.gen_range(0..torsion_tops.len() as u32) as usize]
        } else {
            r.gen_range(lo - 1..=hi + 1)
        };
        let ladder = uct_ladder(&m, &nc, n).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(ladder.certificate.passed, "seed {seed}, n = {n}: {}", ladder.certificate);
        for row in &ladder.rows {
            ensure!(row.i <= n || row.direct_truncated.is_zero(), "seed {seed}: H_{} Hom(M, P_{n} N) = {}", row.i, row.direct_truncated);
            ensure!(row.i >= n || row.direct == row.direct_truncated, "seed {seed}: degree {} disagrees below n = {n}", row.i);
        }
        let at_n = ladder.row(n).ok_or_else(|| format!("seed {seed}: no row at n"))?;
        if ladder.discrepancy.is_some() {
            ensure!(!at_n.ext.is_zero(), "seed {seed}: discrepancy at n = {n} with vanishing Ext corner");
            discrepancies += 1;
        }
    }
    ensure!(discrepancies > 0, "no instance with a nonzero Ext corner and a discrepancy at n");
    within(start, Duration::from_secs(30))?;
    Ok(format!("200 triples, {discrepancies} with an Ext discrepancy at n, {:.2} s", start.elapsed().as_secs_f64()))
}

fn hypercomplete_criterion() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for seed in 0..200u64 {
        let x = generate_complex(seed, &Profile::default());
        let cert = hypercomplete_check(&x);
        ensure!(cert.passed, "seed {seed}: {cert}");
        let (lo, hi) = span(&x);
        for i in 0..=2 {
            for n in lo..=hi {
                let cert = generator_commutation_check(i, &x, n).map_err(|e| e.to_string())?;
                ensure!(cert.passed, "seed {seed}, i = {i}, n = {n}: {cert}");
                checks += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("200 complexes, {checks} commutation checks, {:.2} s", start.elapsed().as_secs_f64()))
}

fn with_map(t: &TowerSection, level: usize, stable_from: usize) -> TowerSection {
    let mut maps = t.maps().to_vec();
    maps[level] = zero_tower_map(t.level(level + 1), t.level(level));
    TowerSection::new(t.levels().to_vec(), maps, stable_from).expect("same shape")
}

fn post_fibrant_criterion() -> Outcome {
    let mut mutated = 0;
    let mut seed = 0u64;
    while mutated < 50 {
        let x = generate_complex(seed, &Profile::default());
        let t = postnikov_tower(&x, 4);
        let fibrant = is_post_fibrant(&t).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(fibrant.passed, "seed {seed}: {fibrant}");
        let candidates: Vec<usize> =
            (0..4).filter(|&l| t.level(l).degrees().any(|d| d >= 1 && !t.level(l).group(d).normal_form().is_zero())).collect();
        if !candidates.is_empty() {
            let level = candidates[rng(seed).gen_range(0..candidates.len() as u32) as usize];
            let bad = with_map(&t, level, 4);
            let cert = is_post_fibrant(&bad).map_err(|e| format!("seed {seed}, level {level}: {e}"))?;
            ensure!(!cert.passed, "seed {seed}: zero map at level {level} accepted");
            ensure!(cert.witness_level() == Some(level), "seed {seed}: witness level {:?}, expected {level}", cert.witness_level());
            mutated += 1;
        }
        seed += 1;
        ensure!(seed < 1000, "too few complexes admit a mutation");
    }
    Ok(format!("{seed} fibrant towers, 50 mutated towers rejected at the mutated level"))
}

fn tow_cofibrant_criterion() -> Outcome {
    let mut mutated = 0;
    for seed in 0..100u64 {
        let x = generate_complex(seed, &Profile::default());
        let t = postnikov_tower(&x, 4).cofibrant_replacement();
        let (c, h) = (is_tow_cofibrant(&t), is_homotopy_cartesian(&t));
        ensure!(c.passed && h.passed, "seed {seed}: {c}{h}");
        let hx = homology(&x);
        let lowest = |i: i64| hx.iter().filter(|(d, g)| *d <= i && !g.is_zero()).map(|(d, _)| d).min();
        let levels: Vec<usize> = (0..4).filter(|&i| lowest(i as i64).is_some()).collect();
        let Some(&level) = levels.get(rng(seed).gen_range(0..levels.len().max(1) as u32) as usize) else { continue };
        let d = lowest(level as i64).unwrap();
        let bad = with_map(&t, level, t.stable_from().max(level + 1).min(4));
        for cert in [is_tow_cofibrant(&bad), is_homotopy_cartesian(&bad)] {
            ensure!(!cert.passed, "seed {seed}: zero map at level {level} accepted by {}", cert.check);
            ensure!(
                cert.witness_level() == Some(level) && cert.witness_degree() == Some(d),
                "seed {seed}: {} witness ({:?}, {:?}), expected ({level}, {d})",
                cert.check,
                cert.witness_level(),
                cert.witness_degree()
            );
        }
        mutated += 1;
    }
    Ok(format!("100 free towers accepted, {mutated} mutated towers rejected with exact witnesses"))
}

fn fiber_sequence_criterion() -> Outcome {
    for seed in 0..200u64 {
        let x = generate_complex(seed, &Profile::default());
        let (lo, hi) = span(&x);
        let k = rng(seed).gen_range(lo - 1..=hi + 1);
        let cert = fiber_sequence_check(&x, k);
        ensure!(cert.passed, "seed {seed}, k = {k}: {cert}");
        let expected = HomologyProfile::from_groups([(k + 1, homology_at(&x, k + 1).group().clone())]);
        let got = homology(&layer(&x, k));
        ensure!(got == expected, "seed {seed}, k = {k}: layer homology {got}, expected {expected}");
    }
    Ok("200 pairs".into())
}

fn fracture_criterion() -> Outcome {
    let splits = PrimePartition::balanced_splits(&[2, 3, 5]);
    ensure!(splits.len() == 6, "{} splits of {{2, 3, 5}}", splits.len());
    for seed in 0..200u64 {
        let x = generate_complex(seed, &Profile::default());
        ensure!(homology_torsion_primes(&x).iter().all(|p| [2, 3, 5].contains(p)), "seed {seed}: torsion outside {{2, 3, 5}}");
        let hx = homology(&x);
        let mut reassembled = Vec::new();
        for p in &splits {
            let cert = arithmetic_square_check(&x, p).map_err(|e| e.to_string())?;
            ensure!(cert.passed, "seed {seed}: {cert}");
            let mut groups = Vec::new();
            for (i, g) in hx.iter() {
                let pullback = reassemble(g, p).map_err(|e| e.to_string())?.pullback;
                ensure!(&pullback == g, "seed {seed}: H_{i} = {g} reassembles as {pullback} over {} / {}", p.j, p.k);
                groups.push(pullback);
            }
            reassembled.push(groups);
        }
        ensure!(reassembled.windows(2).all(|w| w[0] == w[1]), "seed {seed}: reassembly depends on the partition");
    }
    Ok("200 complexes x 6 partitions".into())
}

fn hofib_criterion() -> Outcome {
    let mut corpus = Vec::new();
    for seed in 0..200u64 {
        let x = generate_complex(seed, &Profile::free());
        let (lo, hi) = span(&x);
        let k = rng(seed).gen_range(lo - 1..=hi + 1);
        let section = build_hofib_section(&x, k).map_err(|e| format!("seed {seed}: {e}"))?;
        let (fiber, cover) = (homology(section.fiber()), homology(&connective_cover(&x, k).complex));
        ensure!(fiber == cover, "seed {seed}, k = {k}: fiber {fiber} vs cover {cover}");
        corpus.push(x);
    }
    for k in -1..=4 {
        let cert = compatibility_check(k, &corpus).map_err(|e| e.to_string())?;
        ensure!(cert.passed, "k = {k}: {cert}");
    }
    Ok("200 fibers match covers; compatibility holds for k in -1..=4".into())
}

fn milnor_criterion() -> Outcome {
    let mut checks = 0;
    for seed in 0..100u64 {
        let x = generate_complex(seed, &Profile::default());
        let (lo, hi) = span(&x);
        let t = postnikov_tower(&x, (hi.max(0) + 2) as usize);
        for i in lo - 1..=hi + 1 {
            let cert = milnor_check(&t, i).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure!(cert.passed, "seed {seed}, degree {i}: {cert}");
            checks += 1;
        }
    }
    let Loaded::Tower(t) = load(fixture("times_p_tower.json")).map_err(|e| e.to_string())? else {
        return Err("times_p_tower.json is not a tower".into());
    };
    let groups: Vec<_> = t.levels().iter().map(|x| homology_at(x, 0).group().clone()).collect();
    let maps: Vec<_> = t.maps().iter().map(|f| induced_map(f, 0).matrix().clone()).collect();
    let ml = mittag_leffler_diagnostic(&groups, &maps, t.length()).map_err(|e| e.to_string())?;
    ensure!(matches!(ml, MittagLeffler::NotStabilizedWithin(_)), "x2 tower diagnosed as {ml:?}");
    Ok(format!("{checks} Milnor checks pass; x2 tower gives {ml:?}"))
}

fn cli_criterion() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tower-calculus");
    let cases = golden_cases();
    for (name, args) in &cases {
        let run = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure!(a.stdout == b.stdout, "{name}: two runs differ");
        ensure!(a.status.code() == b.status.code(), "{name}: exit codes differ");
        ensure!(String::from_utf8_lossy(&a.stdout) == golden(name), "{name}: output differs from the golden file");
    }
    Ok(format!("{} golden reports reproduced byte for byte", cases.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Smith normal form", smith_normal_form_criterion),
        ("universal coefficient ladder", uct_criterion),
        ("hypercompleteness", hypercomplete_criterion),
        ("Postnikov fibrancy", post_fibrant_criterion),
        ("Tow cofibrancy", tow_cofibrant_criterion),
        ("fiber sequences and layers", fiber_sequence_criterion),
        ("arithmetic fracture", fracture_criterion),
        ("homotopy fibers", hofib_criterion),
        ("Milnor sequence", milnor_criterion),
        ("CLI determinism", cli_criterion),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
