//! Walk the component catalog: kinds, categories and codes.
//!
//! `cargo run --example taxonomy_catalog [CODE]`

use coherence_atlas::taxonomy::{catalog, parse_component, ComponentKind};

fn main() {
    for kind in ComponentKind::ALL {
        println!("{kind} ({} components)", kind.catalog_len());
        for c in catalog(kind) {
            println!("  {:<24} {:<40} {:?}", c.code(), c.display_name(), c.category());
        }
    }

    // Lookups are strict; near misses get a suggestion.
    let query = std::env::args().nth(1).unwrap_or_else(|| "INS.RESEARCH_FUND".to_string());
    match parse_component(&query) {
        Ok(c) => println!("\n{query} -> {}", c.display_name()),
        Err(e) => println!("\n{e}"),
    }
}
