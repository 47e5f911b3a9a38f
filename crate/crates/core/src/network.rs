//! Component networks: construction from a strategy or a corpus, weighted
//! centralities, deterministic Louvain communities and network profiles.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::corpus::{cross_kind_pairs, CodedStrategy, Corpus};
use crate::taxonomy::{catalog, ComponentId, ComponentKind};

/// Power-iteration convergence threshold (L1 change between iterates).
pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const EIGEN_MAX_ITER: usize = 1000;

const DIST_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    StrategyAlignment,
    CorpusCooccurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub component: ComponentId,
    pub size: f64,
}

/// Undirected weighted edge between node indices, `source < target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyNetwork {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub provenance: Provenance,
}

impl PolicyNetwork {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, component: ComponentId) -> Option<usize> {
        self.nodes.iter().position(|n| n.component == component)
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// Adjacency lists of (neighbour, weight).
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.source].push((e.target, e.weight));
            adj[e.target].push((e.source, e.weight));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        adj
    }

    /// Structural problems: self-loops, duplicate edges, dangling endpoints,
    /// non-positive weights.
    pub fn check(&self) -> Result<(), String> {
        let n = self.nodes.len();
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            if e.source >= n || e.target >= n {
                return Err(format!("edge ({}, {}) references a missing node", e.source, e.target));
            }
            if e.source == e.target {
                return Err(format!("self-loop on node {}", e.source));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(format!("edge ({}, {}) has non-positive weight", e.source, e.target));
            }
            if !seen.insert((e.source.min(e.target), e.source.max(e.target))) {
                return Err(format!("duplicate edge ({}, {})", e.source, e.target));
            }
        }
        Ok(())
    }
}

/// Nodes are the strategy's present components (size = prominence); edges
/// are cross-kind pairs scoring at least 1, weighted by score.
pub fn build_policy_network(strategy: &CodedStrategy) -> PolicyNetwork {
    let nodes: Vec<Node> = ComponentId::all()
        .filter(|&c| strategy.is_present(c))
        .map(|c| Node {
            component: c,
            size: f64::from(strategy.prominence(c)),
        })
        .collect();
    let index: BTreeMap<ComponentId, usize> =
        nodes.iter().enumerate().map(|(i, n)| (n.component, i)).collect();
    let mut edges: Vec<Edge> = cross_kind_pairs()
        .filter_map(|(x, y)| {
            let score = strategy.score(x, y).value();
            (score >= 1).then(|| edge(index[&x], index[&y], f64::from(score)))
        })
        .collect();
    sort_edges(&mut edges);
    PolicyNetwork {
        nodes,
        edges,
        provenance: Provenance::StrategyAlignment,
    }
}

/// Co-occurrence network of one kind across a corpus: node size is the
/// number of strategies containing the component, edge weight the number
/// containing both endpoints.
pub fn build_cooccurrence_network(corpus: &Corpus, kind: ComponentKind) -> PolicyNetwork {
    let components = catalog(kind);
    let presence: Vec<Vec<bool>> = corpus
        .strategies
        .iter()
        .map(|s| components.iter().map(|&c| s.is_present(c)).collect())
        .collect();
    let count = |pred: &dyn Fn(&[bool]) -> bool| presence.iter().filter(|p| pred(p)).count();

    let mut nodes = Vec::new();
    let mut slot = vec![None; components.len()];
    for (i, &c) in components.iter().enumerate() {
        let size = count(&|p| p[i]);
        if size > 0 {
            slot[i] = Some(nodes.len());
            nodes.push(Node {
                component: c,
                size: size as f64,
            });
        }
    }
    let mut edges = Vec::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            if let (Some(si), Some(sj)) = (slot[i], slot[j]) {
                let w = count(&|p| p[i] && p[j]);
                if w > 0 {
                    edges.push(edge(si, sj, w as f64));
                }
            }
        }
    }
    sort_edges(&mut edges);
    PolicyNetwork {
        nodes,
        edges,
        provenance: Provenance::CorpusCooccurrence,
    }
}

fn edge(a: usize, b: usize, weight: f64) -> Edge {
    Edge {
        source: a.min(b),
        target: a.max(b),
        weight,
    }
}

fn sort_edges(edges: &mut [Edge]) {
    edges.sort_by_key(|e| (e.source, e.target));
}

/// Per-node centralities, indexed like `PolicyNetwork::nodes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityReport {
    pub degree: Vec<f64>,
    pub betweenness: Vec<f64>,
    pub eigenvector: Vec<f64>,
}

pub fn centralities(network: &PolicyNetwork) -> CentralityReport {
    let adj = network.adjacency();
    CentralityReport {
        degree: degree_centrality(network, &adj),
        betweenness: betweenness_centrality(&adj),
        eigenvector: eigenvector_centrality(&adj),
    }
}

/// Weighted degree over `(n - 1) * max edge weight`.
fn degree_centrality(network: &PolicyNetwork, adj: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let n = adj.len();
    let max_w = network.max_weight();
    if n < 2 || max_w == 0.0 {
        return vec![0.0; n];
    }
    let scale = (n - 1) as f64 * max_w;
    adj.iter()
        .map(|list| list.iter().map(|&(_, w)| w).sum::<f64>() / scale)
        .collect()
}

#[derive(PartialEq)]
struct QueueItem {
    dist: f64,
    node: usize,
}

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Brandes' algorithm with Dijkstra, edge length `1 / weight`. Pair
/// normalized by `(n - 1)(n - 2) / 2`; endpoints excluded.
fn betweenness_centrality(adj: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let n = adj.len();
    let mut bc = vec![0.0; n];
    if n < 3 {
        return bc;
    }
    for s in 0..n {
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        sigma[s] = 1.0;
        dist[s] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(QueueItem { dist: 0.0, node: s });
        while let Some(QueueItem { dist: d, node: v }) = heap.pop() {
            if done[v] || d > dist[v] + DIST_EPS {
                continue;
            }
            done[v] = true;
            stack.push(v);
            for &(w, weight) in &adj[v] {
                if done[w] {
                    continue;
                }
                let alt = dist[v] + 1.0 / weight;
                let tol = DIST_EPS * alt.max(1.0);
                if alt < dist[w] - tol {
                    dist[w] = alt;
                    sigma[w] = sigma[v];
                    preds[w].clear();
                    preds[w].push(v);
                    heap.push(QueueItem { dist: alt, node: w });
                } else if (alt - dist[w]).abs() <= tol {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    // each unordered pair was counted from both ends
    let norm = ((n - 1) * (n - 2)) as f64;
    bc.iter().map(|b| b / norm).collect()
}

/// Connected components as sorted node lists, ordered by smallest member.
pub fn connected_components(adj: &[Vec<(usize, f64)>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Dominant eigenvector and eigenvalue of one connected component.
///
/// Iterates `x <- (A + I) x`, which shares eigenvectors with `A` and has a
/// strictly dominant eigenvalue on connected non-negative graphs, so the
/// iteration also converges on bipartite components.
fn component_eigen(adj: &[Vec<(usize, f64)>], members: &[usize]) -> (Vec<f64>, f64) {
    let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = members.len();
    let mut x = vec![1.0 / m as f64; m];
    for _ in 0..EIGEN_MAX_ITER {
        let mut next = x.clone();
        for (i, &v) in members.iter().enumerate() {
            for &(w, weight) in &adj[v] {
                next[i] += weight * x[local[&w]];
            }
        }
        let norm: f64 = next.iter().sum();
        for value in &mut next {
            *value /= norm;
        }
        let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change < EIGEN_TOLERANCE {
            break;
        }
    }
    // Rayleigh quotient for the eigenvalue of A
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &v) in members.iter().enumerate() {
        let ax: f64 = adj[v].iter().map(|&(w, weight)| weight * x[local[&w]]).sum();
        num += x[i] * ax;
        den += x[i] * x[i];
    }
    (x, if den > 0.0 { num / den } else { 0.0 })
}

/// Eigenvector centrality per connected component. Each component's vector
/// is scaled so its maximum equals the component's dominant eigenvalue
/// divided by the largest eigenvalue in the graph; the overall maximum is
/// therefore 1. Isolated nodes score 0.
fn eigenvector_centrality(adj: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let n = adj.len();
    let mut out = vec![0.0; n];
    let parts: Vec<(Vec<usize>, Vec<f64>, f64)> = connected_components(adj)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let (v, lambda) = component_eigen(adj, &c);
            (c, v, lambda)
        })
        .collect();
    let lambda_max = parts.iter().map(|p| p.2).fold(0.0, f64::max);
    if lambda_max <= 0.0 {
        return out;
    }
    for (members, vector, lambda) in parts {
        let peak = vector.iter().copied().fold(0.0, f64::max);
        let scale = lambda / lambda_max / peak;
        for (&v, value) in members.iter().zip(vector) {
            out[v] = value * scale;
        }
    }
    out
}

/// Node-to-community assignment with its weighted modularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    pub assignment: Vec<usize>,
    pub modularity: f64,
}

impl CommunityPartition {
    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }
}

/// Newman modularity of `assignment` under edge weights (resolution 1).
/// Edgeless graphs have modularity 0.
pub fn modularity(network: &PolicyNetwork, assignment: &[usize]) -> f64 {
    let m: f64 = network.edges.iter().map(|e| e.weight).sum();
    if m == 0.0 {
        return 0.0;
    }
    let communities = assignment.iter().max().map_or(0, |c| c + 1);
    let mut internal = vec![0.0; communities];
    let mut strength = vec![0.0; communities];
    for e in &network.edges {
        let (cs, ct) = (assignment[e.source], assignment[e.target]);
        if cs == ct {
            internal[cs] += e.weight;
        }
        strength[cs] += e.weight;
        strength[ct] += e.weight;
    }
    internal
        .iter()
        .zip(&strength)
        .map(|(l, d)| l / m - (d / (2.0 * m)).powi(2))
        .sum()
}

/// Weighted graph used inside the Louvain passes; self-loops carry the
/// weight internal to an aggregated community.
struct LouvainGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl LouvainGraph {
    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[v]
    }
}

/// Greedy local moving in node order; returns whether any node moved.
fn local_moving(g: &LouvainGraph, community: &mut [usize], total: f64) -> bool {
    let n = g.adj.len();
    let strength: Vec<f64> = (0..n).map(|v| g.strength(v)).collect();
    let mut tot = vec![0.0; n];
    for v in 0..n {
        tot[community[v]] += strength[v];
    }
    let two_m = 2.0 * total;
    let mut moved_any = false;
    loop {
        let mut moved = false;
        for v in 0..n {
            let current = community[v];
            let k = strength[v];
            let mut links: BTreeMap<usize, f64> = BTreeMap::new();
            for &(w, weight) in &g.adj[v] {
                *links.entry(community[w]).or_default() += weight;
            }
            tot[current] -= k;
            let gain = |c: usize, k_in: f64| k_in - tot[c] * k / two_m;
            let stay_gain = gain(current, links.get(&current).copied().unwrap_or(0.0));
            let mut best = current;
            let mut best_gain = stay_gain;
            // ascending community id: among equal gains the lowest id wins
            for (&c, &k_in) in &links {
                if c == current {
                    continue;
                }
                let candidate = gain(c, k_in);
                if candidate > best_gain + 1e-12 {
                    best = c;
                    best_gain = candidate;
                }
            }
            tot[best] += k;
            if best != current {
                community[v] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    moved_any
}

fn relabel(community: &mut [usize]) -> usize {
    let mut map = BTreeMap::new();
    for c in community.iter_mut() {
        let next = map.len();
        *c = *map.entry(*c).or_insert(next);
    }
    map.len()
}

fn aggregate(g: &LouvainGraph, community: &[usize], count: usize) -> LouvainGraph {
    let mut self_loops = vec![0.0; count];
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (v, list) in g.adj.iter().enumerate() {
        self_loops[community[v]] += g.self_loops[v];
        for &(w, weight) in list {
            if v < w {
                let (a, b) = (community[v], community[w]);
                if a == b {
                    self_loops[a] += weight;
                } else {
                    *weights.entry((a.min(b), a.max(b))).or_default() += weight;
                }
            }
        }
    }
    let mut adj = vec![Vec::new(); count];
    for ((a, b), w) in weights {
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    LouvainGraph { adj, self_loops }
}

/// Deterministic two-phase Louvain optimisation at resolution 1.
///
/// Nodes are visited in index order (catalog order for built networks) and
/// ties go to the lowest community id. Community ids are renumbered densely
/// in order of first appearance.
pub fn detect_communities(network: &PolicyNetwork) -> CommunityPartition {
    let n = network.nodes.len();
    let total: f64 = network.edges.iter().map(|e| e.weight).sum();
    let mut assignment: Vec<usize> = (0..n).collect();
    if total > 0.0 {
        let mut graph = LouvainGraph {
            adj: network.adjacency(),
            self_loops: vec![0.0; n],
        };
        loop {
            let mut level: Vec<usize> = (0..graph.adj.len()).collect();
            if !local_moving(&graph, &mut level, total) {
                break;
            }
            let count = relabel(&mut level);
            for c in assignment.iter_mut() {
                *c = level[*c];
            }
            if count == graph.adj.len() {
                break;
            }
            graph = aggregate(&graph, &level, count);
        }
    }
    relabel(&mut assignment);
    let modularity = modularity(network, &assignment);
    CommunityPartition {
        assignment,
        modularity,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkProfile {
    pub centralization: f64,
    pub integration: f64,
    pub modularity: f64,
}

/// Freeman degree centralization on binary adjacency; 0 below 3 nodes.
pub fn degree_centralization(network: &PolicyNetwork) -> f64 {
    let n = network.nodes.len();
    if n < 3 {
        return 0.0;
    }
    let mut degree = vec![0usize; n];
    for e in &network.edges {
        degree[e.source] += 1;
        degree[e.target] += 1;
    }
    let max = *degree.iter().max().unwrap_or(&0);
    let sum: usize = degree.iter().map(|d| max - d).sum();
    sum as f64 / ((n - 1) * (n - 2)) as f64
}

/// Edge density `|E| / (n (n - 1) / 2)`; 0 below 2 nodes.
pub fn integration(network: &PolicyNetwork) -> f64 {
    let n = network.nodes.len();
    if n < 2 {
        return 0.0;
    }
    network.edges.len() as f64 / (n * (n - 1) / 2) as f64
}

pub fn network_profile(network: &PolicyNetwork) -> NetworkProfile {
    NetworkProfile {
        centralization: degree_centralization(network),
        integration: integration(network),
        modularity: detect_communities(network).modularity,
    }
}
