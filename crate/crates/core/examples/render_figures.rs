//! Write SVG figures and graph exports into a directory.
//!
//! `cargo run --example render_figures [OUT_DIR]`

use std::path::PathBuf;

use coherence_atlas::alignment::build_matrix;
use coherence_atlas::analytics::country_comparison;
use coherence_atlas::corpus::load_corpus;
use coherence_atlas::network::{build_policy_network, detect_communities};
use coherence_atlas::render::{
    export_graph, render_bars, render_heatmap, render_network, GraphFormat, HeatmapGrid, LayoutSeed, Orientation,
    Palette,
};
use coherence_atlas::taxonomy::ComponentKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("coherence-figures"));
    std::fs::create_dir_all(&out)?;
    let bytes = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reference.json"))?;
    let corpus = load_corpus(&bytes)?;
    let korea = corpus.strategy("South Korea").expect("fixture country");

    let m = build_matrix(korea, ComponentKind::Objective, ComponentKind::Instrument);
    let svg = render_heatmap(&HeatmapGrid::from_matrix("South Korea: objectives x instruments", &m), &Palette::default())?;
    std::fs::write(out.join("heatmap.svg"), svg)?;

    let reports = country_comparison(&corpus);
    std::fs::write(out.join("comparison.svg"), render_heatmap(&HeatmapGrid::from_index_reports("Coherence indices", &reports), &Palette::default())?)?;
    let series: Vec<(String, f64)> = reports.iter().map(|r| (r.country.clone(), r.alignment_coverage)).collect();
    std::fs::write(out.join("coverage.svg"), render_bars("Alignment coverage", &series, Orientation::Horizontal)?)?;

    // Same seed, same bytes.
    let net = build_policy_network(korea);
    std::fs::write(out.join("network.svg"), render_network(&net, LayoutSeed(42), Some(2.0)))?;
    let part = detect_communities(&net);
    for format in [GraphFormat::GraphMl, GraphFormat::Dot, GraphFormat::NodeLinkJson] {
        std::fs::write(out.join(format!("network.{}", format.extension())), export_graph(&net, Some(&part), format))?;
    }

    for entry in std::fs::read_dir(&out)? {
        let entry = entry?;
        println!("{:>8}  {}", entry.metadata()?.len(), entry.path().display());
    }
    Ok(())
}
