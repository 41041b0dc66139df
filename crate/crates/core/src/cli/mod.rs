//! Command-line surface: documents, seeded generation and run reports.

pub mod document;
pub mod generate;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, Witness};
use crate::complex::{hom_complex, homology, homology_at, induced_map, ChainComplex, HomologyProfile};
use crate::error::{Error, Result};
use crate::exactalg::{mittag_leffler_diagnostic, MittagLeffler};
use crate::fracture::{arithmetic_square_check, homology_torsion_primes, reassemble, PrimePartition};
use crate::hofib::{build_hofib_section, compatibility_check, derived_counit_check, layer_equivalence_check};
use crate::holimcalc::{generator_commutation_check, hypercomplete_check, milnor_check, uct_ladder};
use crate::sections::{
    cospan_cofibrant_check, cospan_fibrant_check, is_cospan_homotopy_cartesian, is_homotopy_cartesian, is_post_fibrant, is_tow_cofibrant,
    postnikov_tower, TowerSection,
};
use crate::trunc::{connective_cover, fiber_sequence_check, is_n_type, is_pn_weq, layer, layer_check, postnikov_section};

pub use document::{load, load_complex, parse, save, ComplexDocument, CospanDocument, Loaded, TowerDocument};
pub use generate::{generate, generate_complex, Profile};
pub use report::{InputDigest, RunReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "tower-calculus", version, about = "Postnikov towers, fracture squares and homotopy fibers of chain complexes")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the machine-readable report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of a complex.
    Homology { file: PathBuf },
    /// Postnikov section P_n.
    Truncate {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Connective cover C_k.
    Cover {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Layer C_k P_{k+1}.
    Layer {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
    /// Homology of the Hom complex Hom(M, N).
    Homcx { source: PathBuf, target: PathBuf },
    /// Universal coefficient ladder for Hom(M, N) against Hom(M, P_n N).
    Uct {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Checks on a tower, or on the Postnikov tower of a complex.
    Tower {
        file: PathBuf,
        /// Tower length for a complex input.
        #[arg(long)]
        n: Option<usize>,
    },
    /// X → holim P_n X and generator commutation, on a file or a seeded corpus.
    Hypercomplete {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
    /// Milnor sequences of a tower, or of the Postnikov tower of a complex.
    Milnor { file: PathBuf },
    /// Arithmetic fracture squares on homology.
    Fracture {
        file: Option<PathBuf>,
        /// Comma-separated primes of J; with --primes-k, replaces the default splits.
        #[arg(long, value_delimiter = ',')]
        primes_j: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        primes_k: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
    /// Homotopy fiber of X → P_k X against the connective cover.
    Hofib {
        file: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
    },
    /// Model-structure checks on tower and cospan documents.
    #[command(subcommand)]
    Section(SectionCommand),
    /// Seeded random complexes as documents.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
        /// Degreewise free complexes only.
        #[arg(long)]
        free: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SectionCommand {
    /// Fibrancy, cofibrancy and homotopy cartesianness of a tower.
    CheckTower { file: PathBuf },
    /// Model conditions and homotopy cartesianness of a cospan.
    CheckCospan { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Homology { .. } => "homology",
            Command::Truncate { .. } => "truncate",
            Command::Cover { .. } => "cover",
            Command::Layer { .. } => "layer",
            Command::Homcx { .. } => "homcx",
            Command::Uct { .. } => "uct",
            Command::Tower { .. } => "tower",
            Command::Hypercomplete { .. } => "hypercomplete",
            Command::Milnor { .. } => "milnor",
            Command::Fracture { .. } => "fracture",
            Command::Hofib { .. } => "hofib",
            Command::Section(SectionCommand::CheckTower { .. }) => "section check-tower",
            Command::Section(SectionCommand::CheckCospan { .. }) => "section check-cospan",
            Command::Generate { .. } => "generate",
        }
    }

    /// Flags that affect the result, without file paths.
    fn flags(&self) -> String {
        match self {
            Command::Truncate { n, .. } | Command::Uct { n, .. } => format!("n={n}"),
            Command::Cover { k, .. } | Command::Layer { k, .. } => format!("k={k}"),
            Command::Tower { n, .. } => format!("n={n:?}"),
            Command::Hypercomplete { file, seed, count } => batch_flags(file, *seed, *count),
            Command::Fracture { file, primes_j, primes_k, seed, count } => {
                format!("j={primes_j:?};k={primes_k:?};{}", batch_flags(file, *seed, *count))
            }
            Command::Hofib { file, k, seed, count } => format!("k={k};{}", batch_flags(file, *seed, *count)),
            Command::Generate { seed, count, free } => format!("seed={seed};count={count};free={free}"),
            _ => String::new(),
        }
    }
}

fn batch_flags(file: &Option<PathBuf>, seed: u64, count: u32) -> String {
    if file.is_some() {
        String::new()
    } else {
        format!("seed={seed};count={count}")
    }
}

struct Inputs {
    digest: InputDigest,
}

impl Inputs {
    fn text(&mut self, path: &Path) -> Result<String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Parse { location: path.display().to_string(), reason: e.to_string() })?;
        self.digest.add("document", text.as_bytes());
        Ok(text)
    }

    fn any(&mut self, path: &Path) -> Result<Loaded> {
        let text = self.text(path)?;
        parse(&text)
    }

    fn complex(&mut self, path: &Path) -> Result<ChainComplex> {
        match self.any(path)? {
            Loaded::Complex(x) => Ok(x),
            other => {
                Err(Error::Parse { location: path.display().to_string(), reason: format!("expected a complex, found a {}", other.kind()) })
            }
        }
    }

    fn tower(&mut self, path: &Path, length: Option<usize>) -> Result<TowerSection> {
        match self.any(path)? {
            Loaded::Tower(t) => Ok(t),
            Loaded::Complex(x) => Ok(postnikov_tower(&x, length.unwrap_or_else(|| default_length(&x)))),
            Loaded::Cospan(_) => {
                Err(Error::Parse { location: path.display().to_string(), reason: "expected a tower or a complex, found a cospan".into() })
            }
        }
    }
}

fn default_length(x: &ChainComplex) -> usize {
    x.span().map_or(0, |(_, hi)| hi.max(0) as usize) + 1
}

/// Per-instance seeds of a batch, drawn from one stream.
pub fn instance_seeds(seed: u64, count: u32) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

fn corpus(file: &Option<PathBuf>, seed: u64, count: u32, profile: &Profile, inputs: &mut Inputs) -> Result<Vec<(String, ChainComplex)>> {
    match file {
        Some(path) => Ok(vec![("X".into(), inputs.complex(path)?)]),
        None => Ok(instance_seeds(seed, count)
            .into_iter()
            .enumerate()
            .map(|(j, s)| (format!("instance {j} (seed {s})"), generate_complex(s, profile)))
            .collect()),
    }
}

fn profile_lines(label: &str, h: &HomologyProfile) -> Vec<String> {
    if h.is_zero() {
        return vec![format!("H_*({label}) = 0")];
    }
    h.iter().map(|(i, g)| format!("H_{i}({label}) = {g}")).collect()
}

fn tally(certs: &[Certificate]) -> String {
    format!("{}/{} instances pass", certs.iter().filter(|c| c.passed).count(), certs.len())
}

fn renamed(mut c: Certificate, check: impl Into<String>) -> Certificate {
    c.check = check.into();
    c
}

type Outcome = (Vec<String>, Vec<Certificate>);

fn tower_checks(t: &TowerSection) -> Vec<Certificate> {
    let post = is_post_fibrant(t).unwrap_or_else(|e| Certificate::fail("Postnikov fibrant", Witness::note(e.to_string())));
    vec![post, is_homotopy_cartesian(t), is_tow_cofibrant(t)]
}

fn stabilization(t: &TowerSection) -> Certificate {
    let check = format!("maps are isomorphisms from level {}", t.stable_from());
    match t.verify_stabilization() {
        Ok(()) => Certificate::pass(check),
        Err(Error::StabilizationViolated { index, reason }) => Certificate::fail(check, Witness::level(index, reason)),
        Err(e) => Certificate::fail(check, Witness::note(e.to_string())),
    }
}

fn tower_lines(t: &TowerSection) -> Vec<String> {
    t.levels().iter().enumerate().flat_map(|(i, x)| profile_lines(&format!("X_{i}"), &homology(x))).collect()
}

fn milnor(t: &TowerSection) -> Outcome {
    let stable = stabilization(t);
    let mut certs = vec![stable.clone()];
    let spans: Vec<(i64, i64)> = t.levels().iter().filter_map(ChainComplex::span).collect();
    let lo = spans.iter().map(|s| s.0).min().unwrap_or(0);
    let hi = spans.iter().map(|s| s.1).max().unwrap_or(0);
    let mut lines = Vec::new();
    for i in lo..=hi {
        let check = format!("Mittag-Leffler for H_{i}");
        let ml = if t.length() == 0 {
            Certificate::pass(check)
        } else {
            let groups: Vec<_> = t.levels().iter().map(|x| homology_at(x, i).group().clone()).collect();
            let maps: Vec<_> = t.maps().iter().map(|f| induced_map(f, i).matrix().clone()).collect();
            match mittag_leffler_diagnostic(&groups, &maps, t.length()) {
                Ok(MittagLeffler::ImagesStabilizeBy(s)) => Certificate::pass(check).with_note(format!("images stabilize by step {s}")),
                Ok(MittagLeffler::NotStabilizedWithin(h)) => {
                    Certificate::fail(check, Witness::degree(i, format!("NotStabilizedWithin({h})")))
                }
                Err(e) => Certificate::fail(check, Witness::degree(i, e.to_string())),
            }
        };
        let ml_passed = ml.passed;
        certs.push(ml);
        if ml_passed && stable.passed {
            match milnor_check(t, i) {
                Ok(c) => certs.push(c),
                Err(e) => certs.push(Certificate::fail(format!("Milnor sequence in degree {i}"), Witness::degree(i, e.to_string()))),
            }
        }
    }
    if certs.iter().all(|c| c.passed) {
        if let Ok(limit) = crate::holimcalc::tower_limit(t) {
            lines.extend(profile_lines("lim", &homology(&limit.complex)));
        }
    }
    (lines, certs)
}

fn hypercomplete_instance(label: &str, x: &ChainComplex) -> Result<Certificate> {
    let mut children = vec![hypercomplete_check(x)];
    if let Some((lo, hi)) = x.span() {
        let mut gens = Vec::new();
        for i in 0..=2 {
            for n in lo..=hi {
                gens.push(generator_commutation_check(i, x, n)?);
            }
        }
        children.push(Certificate::all("generator commutation for i = 0, 1, 2", gens));
    }
    Ok(Certificate::all(label, children))
}

fn partitions(primes_j: &[u64], primes_k: &[u64], x: &ChainComplex) -> Result<Vec<PrimePartition>> {
    if !primes_j.is_empty() || !primes_k.is_empty() {
        return Ok(vec![PrimePartition::new(primes_j.iter().copied(), primes_k.iter().copied())?]);
    }
    let mut primes = vec![2, 3, 5];
    primes.extend(homology_torsion_primes(x));
    primes.sort_unstable();
    primes.dedup();
    Ok(PrimePartition::balanced_splits(&primes))
}

fn fracture_instance(
    label: &str,
    x: &ChainComplex,
    parts: &[PrimePartition],
    lines: &mut Vec<String>,
    verbose: bool,
) -> Result<Certificate> {
    let mut children = Vec::new();
    let mut first: Option<Vec<(i64, crate::exactalg::FpAbelianGroup)>> = None;
    let mut invariance = Certificate::pass("partition invariance");
    for p in parts {
        children.push(renamed(arithmetic_square_check(x, p)?, format!("arithmetic square over {} / {}", p.j, p.k)));
        let pulled: Vec<_> = homology(x).iter().map(|(i, g)| reassemble(g, p).map(|r| (i, r.pullback))).collect::<Result<_>>()?;
        if verbose {
            lines.extend(pulled.iter().map(|(i, g)| format!("H_{i} reassembled as {g} over {} / {}", p.j, p.k)));
        }
        match &first {
            None => first = Some(pulled),
            Some(f) if f != &pulled && invariance.passed => {
                invariance = Certificate::fail("partition invariance", Witness::note(format!("reassembly over {} / {} differs", p.j, p.k)));
            }
            Some(_) => {}
        }
    }
    children.push(invariance);
    Ok(Certificate::all(label, children))
}

fn hofib_instance(label: &str, x: &ChainComplex, k: i64, lines: &mut Vec<String>, verbose: bool) -> Result<Certificate> {
    let h = build_hofib_section(x, k)?;
    let fiber = homology(h.fiber());
    let cover = homology(&connective_cover(x, k).complex);
    if verbose {
        lines.extend(profile_lines("hofib", &fiber));
        lines.extend(profile_lines(&format!("C_{k} X"), &cover));
    }
    let check = format!("H_*(hofib(X' → P_{k} X)) = H_*(C_{k} X)");
    let equal = if fiber == cover {
        Certificate::pass(check)
    } else {
        let d = fiber.iter().chain(cover.iter()).map(|(i, _)| i).find(|&i| fiber.get(i) != cover.get(i)).unwrap_or(k);
        Certificate::fail(check, Witness::degree(d, format!("{} vs {}", fiber.get(d), cover.get(d))))
    };
    let adjusted = renamed(cospan_fibrant_check(&h.fibrant_adjustment()), "fibrant adjustment");
    Ok(Certificate::all(label, vec![equal, derived_counit_check(x, k)?, layer_equivalence_check(x, k)?, adjusted]))
}

fn dispatch(command: &Command, inputs: &mut Inputs) -> Result<Outcome> {
    match command {
        Command::Homology { file } => {
            let x = inputs.complex(file)?;
            Ok((profile_lines("X", &homology(&x)), vec![Certificate::pass("document validates")]))
        }
        Command::Truncate { file, n } => {
            let x = inputs.complex(file)?;
            let t = postnikov_section(&x, *n);
            let lines = profile_lines(&format!("P_{n} X"), &homology(&t.complex));
            Ok((lines, vec![is_n_type(&t.complex, *n), is_pn_weq(&t.quotient, *n)]))
        }
        Command::Cover { file, k } => {
            let x = inputs.complex(file)?;
            let c = connective_cover(&x, *k);
            let (hc, expected) = (homology(&c.complex), homology(&x).truncated_below(*k));
            let check = format!("H_*(C_{k} X) = H_{{>{k}}}(X)");
            let agree = if hc == expected {
                Certificate::pass(check)
            } else {
                let d = hc.iter().chain(expected.iter()).map(|(i, _)| i).find(|&i| hc.get(i) != expected.get(i)).unwrap_or(*k);
                Certificate::fail(check, Witness::degree(d, format!("{} vs {}", hc.get(d), expected.get(d))))
            };
            Ok((profile_lines(&format!("C_{k} X"), &hc), vec![agree, fiber_sequence_check(&x, *k)]))
        }
        Command::Layer { file, k } => {
            let x = inputs.complex(file)?;
            Ok((profile_lines("layer", &homology(&layer(&x, *k))), vec![layer_check(&x, *k)]))
        }
        Command::Homcx { source, target } => {
            let (m, n) = (inputs.complex(source)?, inputs.complex(target)?);
            let h = homology(&hom_complex(&m, &n)?);
            let top = n.span().map_or(0, |(_, hi)| hi);
            let ladder = uct_ladder(&m, &n, top)?;
            let split = ladder.certificate.children.into_iter().next().expect("ladder has a split check");
            Ok((profile_lines("Hom(M, N)", &h), vec![split]))
        }
        Command::Uct { source, target, n } => {
            let (m, nc) = (inputs.complex(source)?, inputs.complex(target)?);
            let ladder = uct_ladder(&m, &nc, *n)?;
            let mut lines: Vec<String> = ladder
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "i = {}: Ext {} + Hom {} -> H = {}; truncated: Ext {} + Hom {} -> H = {}",
                        r.i, r.ext, r.hom, r.direct, r.ext_truncated, r.hom_truncated, r.direct_truncated
                    )
                })
                .collect();
            if let Some((f, t)) = &ladder.discrepancy {
                lines.push(format!("discrepancy at {n}: {f} vs {t}"));
            }
            Ok((lines, vec![ladder.certificate]))
        }
        Command::Tower { file, n } => {
            let t = inputs.tower(file, *n)?;
            let mut certs = vec![stabilization(&t)];
            certs.extend(tower_checks(&t));
            Ok((tower_lines(&t), certs))
        }
        Command::Section(SectionCommand::CheckTower { file }) => {
            let t = inputs.tower(file, None)?;
            Ok((vec![], tower_checks(&t)))
        }
        Command::Section(SectionCommand::CheckCospan { file }) => match inputs.any(file)? {
            Loaded::Cospan(s) => Ok((
                vec![format!("tags: {}, {}, {}", s.tags[0], s.tags[1], s.tags[2])],
                vec![cospan_fibrant_check(&s), cospan_cofibrant_check(&s), is_cospan_homotopy_cartesian(&s)],
            )),
            other => {
                Err(Error::Parse { location: file.display().to_string(), reason: format!("expected a cospan, found a {}", other.kind()) })
            }
        },
        Command::Milnor { file } => {
            let t = inputs.tower(file, None)?;
            Ok(milnor(&t))
        }
        Command::Hypercomplete { file, seed, count } => {
            let xs = corpus(file, *seed, *count, &Profile::default(), inputs)?;
            let certs = xs.iter().map(|(l, x)| hypercomplete_instance(l, x)).collect::<Result<Vec<_>>>()?;
            Ok((vec![tally(&certs)], certs))
        }
        Command::Fracture { file, primes_j, primes_k, seed, count } => {
            let xs = corpus(file, *seed, *count, &Profile::default(), inputs)?;
            let mut lines = Vec::new();
            let mut certs = Vec::new();
            for (l, x) in &xs {
                let parts = partitions(primes_j, primes_k, x)?;
                certs.push(fracture_instance(l, x, &parts, &mut lines, file.is_some())?);
            }
            if file.is_none() {
                lines.push(tally(&certs));
            }
            Ok((lines, certs))
        }
        Command::Hofib { file, k, seed, count } => {
            let xs = corpus(file, *seed, *count, &Profile::free(), inputs)?;
            let mut lines = Vec::new();
            let mut certs = Vec::new();
            for (l, x) in &xs {
                certs.push(hofib_instance(l, x, *k, &mut lines, file.is_some())?);
            }
            if file.is_none() {
                lines.push(tally(&certs));
            }
            let all: Vec<ChainComplex> = xs.into_iter().map(|(_, x)| x).collect();
            certs.push(compatibility_check(*k, &all)?);
            Ok((lines, certs))
        }
        Command::Generate { .. } => unreachable!("generate is handled before dispatch"),
    }
}

fn generate_output(seed: u64, count: u32, free: bool) -> String {
    let profile = if free { Profile::free() } else { Profile::default() };
    if count == 1 {
        return document::to_json(&generate(seed, &profile));
    }
    let docs: Vec<ComplexDocument> = instance_seeds(seed, count).into_iter().map(|s| generate(s, &profile)).collect();
    document::to_json(&docs)
}

/// Runs a parsed command line, returning the report and what goes to
/// standard output.
pub fn run(cli: &Cli) -> (RunReport, String) {
    let started = Instant::now();
    let name = cli.command.name();
    let mut inputs = Inputs { digest: InputDigest::default() };
    inputs.digest.add("command", name.as_bytes());
    inputs.digest.add("flags", cli.command.flags().as_bytes());
    let generated = match &cli.command {
        Command::Generate { seed, count, free } => Some(generate_output(*seed, *count, *free)),
        _ => None,
    };
    let mut report = match &generated {
        Some(out) => {
            let doc = if out.starts_with('[') { "documents" } else { "document" };
            RunReport::new(name, inputs.digest.finish(), vec![format!("generated {doc}")], vec![])
        }
        None => match dispatch(&cli.command, &mut inputs) {
            Ok((lines, certs)) => RunReport::new(name, inputs.digest.finish(), lines, certs),
            Err(e) => RunReport::input_error(name, inputs.digest.finish(), e.to_string()),
        },
    };
    report.timing = started.elapsed();
    let out = match (generated, cli.format) {
        (Some(out), _) => out,
        (None, Format::Text) => report.text(),
        (None, Format::Machine) => report.machine(),
    };
    (report, out)
}

/// Parses arguments, runs, writes the optional report file, and returns
/// standard output, standard error and the exit code.
pub fn execute<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (text, String::new(), 0) } else { (String::new(), text, 2) };
        }
    };
    let (report, out) = run(&cli);
    let mut err = String::new();
    let mut code = report.verdict.exit_code();
    if let Some(e) = &report.error {
        err = format!("error: {e}\n");
    }
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.machine()) {
            err.push_str(&format!("error: cannot write report to {}: {e}\n", path.display()));
            code = 2;
        }
    }
    (out, err, code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn homology_of_moore() {
        let (out, _, code) = execute(["tc", "homology", &fixture("moore_6.json")]);
        assert_eq!(code, 0);
        assert!(out.contains("H_0(X) = Z/6"), "{out}");
    }

    #[test]
    fn input_errors() {
        let (_, err, code) = execute(["tc", "homology", &fixture("bad_d_squared.json")]);
        assert_eq!(code, 2);
        assert!(err.contains("degree 2"), "{err}");
        let (_, _, code) = execute(["tc", "homology", "/nonexistent.json"]);
        assert_eq!(code, 2);
        let (_, _, code) = execute(["tc", "frobnicate"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn seeds_are_stable() {
        assert_eq!(instance_seeds(7, 3), instance_seeds(7, 3));
        assert_eq!(instance_seeds(7, 3)[..2], instance_seeds(7, 2)[..]);
    }
}
