//! Cross-strategy views: prevalence, strongest pairs, group profiles, waves
//! and a correlation with an external indicator.
//!
//! `cargo run --example comparative_analytics`

use std::collections::BTreeMap;

use coherence_atlas::alignment::AlignmentScore;
use coherence_atlas::analytics::{
    correlate, country_comparison, group_profile, prevalence, strongest_pairs, temporal_trends, Grouping,
};
use coherence_atlas::corpus::load_corpus;
use coherence_atlas::taxonomy::ComponentKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let corpus = load_corpus(&std::fs::read(format!("{dir}/reference.json"))?)?;

    let table = prevalence(&corpus, ComponentKind::Objective)?;
    println!("objective prevalence (n = {})", table.n_strategies);
    for e in &table.entries {
        println!("  {:<22} {:>3}%", e.component.code(), e.percent_rounded);
    }

    println!("\nmost often fully aligned pairs");
    for p in strongest_pairs(&corpus, AlignmentScore::new(3).unwrap())?.iter().take(4) {
        println!("  {} / {}: {}%", p.a.display_name(), p.b.display_name(), p.percent_rounded);
    }

    println!("\nby governance model");
    for g in group_profile(&corpus, Grouping::Model) {
        println!("  {:<18} n={:<2} mean alignment {:.2}", g.key.label(), g.members.len(), g.mean_indices.mean_alignment);
    }

    println!("\nby wave");
    for t in temporal_trends(&corpus) {
        let top = t.intensity.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        println!("  {}: {} strategies, strongest objective {} ({:.2})", t.wave, t.n_strategies, top.0.code(), top.1);
    }

    // indicators.csv: country,indicator,value
    let mut coordination = BTreeMap::new();
    for row in csv::Reader::from_path(format!("{dir}/indicators.csv"))?.records() {
        let row = row?;
        if &row[1] == "coordination_index" {
            coordination.insert(row[0].to_string(), row[2].parse::<f64>()?);
        }
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for r in country_comparison(&corpus) {
        if let Some(v) = coordination.get(&r.country) {
            x.push(*v);
            y.push(r.mean_alignment);
        }
    }
    let c = correlate(&x, &y)?;
    println!("\ncoordination index vs mean alignment: r = {:.2}, p = {:.4}, n = {}", c.r, c.p_two_tailed, c.n);
    Ok(())
}
