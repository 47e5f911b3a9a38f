//! Agreement between two coders, then a consensus corpus from adjudications.
//!
//! `cargo run --example reliability_check`

use std::path::{Path, PathBuf};

use coherence_atlas::corpus::{load_adjudications, load_corpus, merge_coders, Corpus, MergeError};
use coherence_atlas::reliability::{reliability_report_with, KappaWeights};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str) -> Corpus {
    load_corpus(&std::fs::read(fixture(name)).expect("fixture readable")).expect("fixture valid")
}

fn main() {
    let (a, b) = (load("coder_a.json"), load("coder_b.json"));
    for weights in [KappaWeights::Linear, KappaWeights::Quadratic] {
        let r = reliability_report_with(&a, &b, weights).unwrap();
        println!(
            "{weights:?}: kappa(identification) = {:.3} over {} decisions, weighted kappa(alignment) = {:.3} over {}, gate {}",
            r.kappa_identification,
            r.n_identification_decisions,
            r.kappa_alignment_weighted,
            r.n_alignment_decisions,
            if r.passes_gate { "passed" } else { "failed" }
        );
    }

    // Without rulings the merge reports what still needs a decision.
    if let Err(MergeError::Unresolved(list)) = merge_coders(&a, &b, &[]) {
        println!("\n{} disagreements, for example:", list.len());
        for d in list.iter().take(5) {
            println!("  {d}");
        }
    }

    let rulings = load_adjudications(&std::fs::read(fixture("adjudications.json")).unwrap()).unwrap();
    let merged = merge_coders(&a, &b, &rulings).expect("every disagreement is ruled on");
    println!("\nmerged corpus: {} strategies", merged.len());
}
