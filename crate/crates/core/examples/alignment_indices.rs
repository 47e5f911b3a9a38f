//! Alignment matrices and coherence indices for one strategy.
//!
//! `cargo run --example alignment_indices [COUNTRY]`

use coherence_atlas::alignment::{build_all_matrices, degenerate_indices, foresight_sophistication, index_report};
use coherence_atlas::corpus::load_corpus;

fn main() {
    let bytes = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reference.json")).unwrap();
    let corpus = load_corpus(&bytes).unwrap();
    let country = std::env::args().nth(1).unwrap_or_else(|| "Finland".to_string());
    let Some(strategy) = corpus.strategy(&country) else {
        eprintln!("no strategy for {country}");
        std::process::exit(1);
    };

    for m in build_all_matrices(strategy) {
        println!("{} ({} x {})", m.name(), m.rows.len(), m.cols.len());
        for (row, cells) in m.rows.iter().zip(&m.cells) {
            let line: String = cells.iter().map(|s| char::from(b'0' + s.value())).collect();
            println!("  {:<22} {line}", row.code());
        }
    }

    let r = index_report(strategy);
    println!("\nobjective coverage          {:.3}", r.objective_coverage);
    println!("implementation specificity  {:.3}", r.implementation_specificity);
    println!("strategic alignment         {:.3}", r.strategic_alignment);
    println!("alignment coverage          {:.3}", r.alignment_coverage);
    println!("mean alignment              {:.3}", r.mean_alignment);
    let f = foresight_sophistication(strategy);
    println!("foresight composite         {:.3}", f.composite);
    for name in degenerate_indices(strategy) {
        println!("note: {name} has no inputs and is reported as 0");
    }
}
