//! Load a coded corpus, list validation findings and export flat CSV.
//!
//! `cargo run --example load_and_validate [corpus.json]`

use std::path::PathBuf;

use coherence_atlas::corpus::{export_csv, parse_corpus, validate, Severity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/reference.json"));
    let bytes = std::fs::read(&path)?;

    // parse_corpus only checks the schema; validate applies the coding rules.
    let corpus = parse_corpus(&bytes)?;
    let report = validate(&corpus);
    println!("{}: {} strategies, {} errors, {} warnings", path.display(), corpus.len(), report.error_count(), report.warning_count());
    for f in &report.findings {
        let tag = if f.severity == Severity::Error { "error" } else { "warning" };
        println!("  {tag} {}: {}", f.path, f.message);
    }
    if report.has_errors() {
        std::process::exit(1);
    }

    let csv = export_csv(&corpus);
    println!("\ncodings.csv: {} rows", csv.codings.lines().count() - 1);
    for line in csv.codings.lines().take(4) {
        println!("  {line}");
    }
    println!("cells.csv: {} rows", csv.cells.lines().count() - 1);
    Ok(())
}
