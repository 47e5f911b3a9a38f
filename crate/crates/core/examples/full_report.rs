//! Run the complete pipeline the way the command-line tool does and print
//! the manifest summary.
//!
//! `cargo run --example full_report [OUT_DIR]`

use coherence_atlas::cli::{self, ReportManifest, MANIFEST_FILE};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("coherence-report").display().to_string());
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reference.json");
    let mut stdout = Vec::new();
    let code = cli::run_with(["coherence-atlas", "report", "--corpus", corpus, "--out", &out], &mut stdout, &mut std::io::stderr());
    if code != 0 {
        std::process::exit(code);
    }

    let manifest: ReportManifest =
        serde_json::from_slice(&std::fs::read(std::path::Path::new(&out).join(MANIFEST_FILE)).unwrap()).unwrap();
    let bytes: u64 = manifest.artifacts.iter().map(|a| a.bytes).sum();
    println!("{} artifacts ({bytes} bytes) in {out}", manifest.artifacts.len());
    println!("corpus sha256 {}", manifest.corpus_sha256);
    println!("layout seed   {}", manifest.layout_seed);
    for a in manifest.artifacts.iter().filter(|a| a.path.starts_with("countries/finland/")) {
        println!("  {}  {}", &a.sha256[..12], a.path);
    }
}
