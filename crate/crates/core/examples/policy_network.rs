//! Build a strategy network, rank components by centrality and detect
//! communities; then the same for a corpus co-occurrence network.
//!
//! `cargo run --example policy_network [COUNTRY]`

use coherence_atlas::corpus::load_corpus;
use coherence_atlas::network::{
    build_cooccurrence_network, build_policy_network, centralities, detect_communities, network_profile, PolicyNetwork,
};
use coherence_atlas::taxonomy::ComponentKind;

fn summarize(title: &str, net: &PolicyNetwork) {
    let c = centralities(net);
    let profile = network_profile(net);
    let part = detect_communities(net);
    println!("{title}: {} nodes, {} edges", net.node_count(), net.edge_count());
    println!(
        "  centralization {:.3}, integration {:.3}, modularity {:.3} ({} communities)",
        profile.centralization,
        profile.integration,
        profile.modularity,
        part.community_count()
    );
    let mut order: Vec<usize> = (0..net.node_count()).collect();
    order.sort_by(|&a, &b| c.betweenness[b].total_cmp(&c.betweenness[a]));
    for &i in order.iter().take(5) {
        println!(
            "  {:<24} degree {:.3}  betweenness {:.3}  eigenvector {:.3}  community {}",
            net.nodes[i].component.code(),
            c.degree[i],
            c.betweenness[i],
            c.eigenvector[i],
            part.assignment[i]
        );
    }
}

fn main() {
    let bytes = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reference.json")).unwrap();
    let corpus = load_corpus(&bytes).unwrap();
    let country = std::env::args().nth(1).unwrap_or_else(|| "Germany".to_string());
    let strategy = corpus.strategy(&country).expect("country in corpus");
    summarize(&country, &build_policy_network(strategy));
    println!();
    summarize("instrument co-occurrence", &build_cooccurrence_network(&corpus, ComponentKind::Instrument));
}
