// Seeded generation, JSON documents, and the command line run in-process.

use std::error::Error;

use tower_calculus::cli::{execute, generate, parse, Loaded, Profile};
use tower_calculus::complex::homology;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let doc = generate(42, &Profile::default());
    let text = tower_calculus::cli::document::to_json(&doc);
    let Loaded::Complex(x) = parse(&text)? else { unreachable!() };
    println!("{}: {}", doc.name, homology(&x));

    let path = std::env::temp_dir().join("tower_calculus_example_42.json");
    std::fs::write(&path, &text)?;
    let (out, _, code) = execute(["tower-calculus", "truncate", path.to_str().unwrap(), "--n", "1"]);
    print!("{out}");
    assert_eq!(code, 0);
    let (out, _, code) = execute(["tower-calculus", "--format", "machine", "hypercomplete", "--seed", "3", "--count", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": \"pass\""));
    std::fs::remove_file(path)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
