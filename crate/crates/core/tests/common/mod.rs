//! Shared fixtures, random generators and independent oracles for the
//! integration suites. Oracles deliberately avoid the library's own helpers:
//! they work from raw codings and cells.

#![allow(dead_code)]

use std::path::PathBuf;

use coherence_atlas::corpus::{
    load_corpus, AlignmentCell, AlignmentEvidence, CodedStrategy, ComponentCoding, Corpus, Region, StrategyMeta,
};
use coherence_atlas::network::{Edge, Node, PolicyNetwork, Provenance};
use coherence_atlas::taxonomy::{ComponentId, ComponentKind, GovernanceModel};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn reference_corpus() -> Corpus {
    let bytes = std::fs::read(fixture_path("reference.json")).expect("fixture readable");
    load_corpus(&bytes).expect("fixture valid")
}

pub fn meta(country: &str) -> StrategyMeta {
    StrategyMeta {
        country: country.to_string(),
        strategy_title: format!("{country} AI strategy"),
        publication_year: 2019,
        governance_model: GovernanceModel::Hybrid,
        region: Region::Europe,
    }
}

/// Evidence combinations a coder may record (elaboration implies an
/// explicit reference).
pub const VALID_EVIDENCE: [AlignmentEvidence; 6] = [
    AlignmentEvidence {
        lexical_proximity: false,
        explicit_reference: false,
        elaboration: false,
    },
    AlignmentEvidence {
        lexical_proximity: true,
        explicit_reference: false,
        elaboration: false,
    },
    AlignmentEvidence {
        lexical_proximity: false,
        explicit_reference: true,
        elaboration: false,
    },
    AlignmentEvidence {
        lexical_proximity: true,
        explicit_reference: true,
        elaboration: false,
    },
    AlignmentEvidence {
        lexical_proximity: false,
        explicit_reference: true,
        elaboration: true,
    },
    AlignmentEvidence {
        lexical_proximity: true,
        explicit_reference: true,
        elaboration: true,
    },
];

/// A random valid strategy with at most `max_components` coded components,
/// some possibly at prominence 0, and random cells between present pairs.
pub fn random_strategy(rng: &mut ChaCha8Rng, country: &str, max_components: usize) -> CodedStrategy {
    let mut ids: Vec<ComponentId> = ComponentId::all().collect();
    ids.shuffle(rng);
    let n = rng.random_range(0..=max_components);
    let chosen = &ids[..n];
    let mut s = CodedStrategy::new(meta(country));
    for &c in chosen {
        let mut coding = ComponentCoding::new(c, if rng.random_bool(0.1) { 0 } else { rng.random_range(1..=3) });
        match c.kind() {
            ComponentKind::Instrument => coding.specificity = rng.random_bool(0.9).then(|| rng.random_range(0..=3)),
            ComponentKind::Foresight => coding.explicit_method = Some(rng.random_bool(0.5)),
            ComponentKind::Objective => {
                coding.intensity_subscores = Some([rng.random_range(0..=3), rng.random_range(0..=3), rng.random_range(0..=3)])
            }
        }
        s.codings.push(coding);
    }
    // validation only allows cells between components coded present
    let present: Vec<ComponentId> = s.codings.iter().filter(|k| k.prominence >= 1).map(|k| k.component).collect();
    for (i, &a) in present.iter().enumerate() {
        for &b in &present[i + 1..] {
            if a.kind() != b.kind() && rng.random_bool(0.6) {
                let evidence = VALID_EVIDENCE[rng.random_range(0..VALID_EVIDENCE.len())];
                let (a, b) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
                s.cells.push(AlignmentCell { a, b, evidence });
            }
        }
    }
    s
}

// ---- alignment oracle -------------------------------------------------

pub fn oracle_present(s: &CodedStrategy, c: ComponentId) -> bool {
    s.codings.iter().any(|k| k.component == c && k.prominence >= 1)
}

pub fn oracle_score(s: &CodedStrategy, a: ComponentId, b: ComponentId) -> u8 {
    if !oracle_present(s, a) || !oracle_present(s, b) {
        return 0;
    }
    let cell = s
        .cells
        .iter()
        .find(|c| (c.a == a && c.b == b) || (c.a == b && c.b == a));
    match cell {
        None => 1,
        Some(c) => {
            let d = [c.evidence.lexical_proximity, c.evidence.explicit_reference, c.evidence.elaboration]
                .iter()
                .filter(|&&x| x)
                .count();
            match d {
                0 => 1,
                3 => 3,
                _ => 2,
            }
        }
    }
}

pub fn of_kind(kind: ComponentKind) -> Vec<ComponentId> {
    ComponentId::all().filter(|c| c.kind() == kind).collect()
}

pub fn oracle_matrix(s: &CodedStrategy, rows: ComponentKind, cols: ComponentKind) -> Vec<Vec<u8>> {
    of_kind(rows)
        .into_iter()
        .map(|r| of_kind(cols).into_iter().map(|c| oracle_score(s, r, c)).collect())
        .collect()
}

/// Scores of every co-present cross-kind pair, enumerated exhaustively.
pub fn oracle_pair_scores(s: &CodedStrategy) -> Vec<u8> {
    let all: Vec<ComponentId> = ComponentId::all().collect();
    let mut out = Vec::new();
    for (i, &a) in all.iter().enumerate() {
        for &b in &all[i + 1..] {
            if a.kind() != b.kind() && oracle_present(s, a) && oracle_present(s, b) {
                out.push(oracle_score(s, a, b));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleIndices {
    pub objective_coverage: f64,
    pub implementation_specificity: f64,
    pub strategic_alignment: f64,
    pub alignment_coverage: f64,
    pub mean_alignment: f64,
    pub normalized: f64,
}

pub fn oracle_indices(s: &CodedStrategy) -> OracleIndices {
    let objectives = of_kind(ComponentKind::Objective)
        .into_iter()
        .filter(|&c| oracle_present(s, c))
        .count();
    let instruments: Vec<f64> = s
        .codings
        .iter()
        .filter(|k| k.component.kind() == ComponentKind::Instrument && k.prominence >= 1)
        .map(|k| f64::from(k.specificity.unwrap_or(0)) / 3.0)
        .collect();
    let scores = oracle_pair_scores(s);
    let n = scores.len() as f64;
    let sum: f64 = scores.iter().map(|&x| f64::from(x)).sum();
    let explicit = scores.iter().filter(|&&x| x >= 2).count() as f64;
    let normalized = if scores.is_empty() { 0.0 } else { sum / (3.0 * n) };
    OracleIndices {
        objective_coverage: objectives as f64 / 12.0,
        implementation_specificity: if instruments.is_empty() {
            0.0
        } else {
            instruments.iter().sum::<f64>() / instruments.len() as f64
        },
        strategic_alignment: normalized,
        alignment_coverage: if scores.is_empty() { 0.0 } else { explicit / n },
        mean_alignment: if scores.is_empty() { 0.0 } else { sum / n },
        normalized,
    }
}

// ---- reliability oracle -----------------------------------------------

/// Kappa from an explicit k x k contingency table: `weight(i, j)` is the
/// disagreement weight (0 on the diagonal). Unweighted kappa is the case
/// weight = 1 off the diagonal.
pub fn crosstab_kappa(a: &[usize], b: &[usize], k: usize, weight: impl Fn(usize, usize) -> f64) -> f64 {
    let n = a.len() as f64;
    let mut table = vec![vec![0.0f64; k]; k];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1.0;
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum::<f64>() / n).collect();
    let cols: Vec<f64> = (0..k).map(|j| table.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let mut observed = 0.0;
    let mut expected = 0.0;
    for i in 0..k {
        for j in 0..k {
            observed += weight(i, j) * table[i][j] / n;
            expected += weight(i, j) * rows[i] * cols[j];
        }
    }
    1.0 - observed / expected
}

// ---- statistics oracle -----------------------------------------------

/// Two-tailed p of Pearson r over n observations by direct numerical
/// integration of the (unnormalized) t density with n - 2 degrees of
/// freedom. The tail mass is divided by the total mass, so no gamma
/// function is needed.
pub fn t_two_tailed_by_integration(r: f64, n: usize) -> f64 {
    let nu = (n - 2) as f64;
    let t = r.abs() * nu.sqrt() / (1.0 - r * r).sqrt();
    let kernel = |x: f64| (1.0 + x * x / nu).powf(-(nu + 1.0) / 2.0);
    // map [0, inf) to [0, 1) with x = u / (1 - u)
    let mapped = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let x = u / (1.0 - u);
        kernel(x) / ((1.0 - u) * (1.0 - u))
    };
    let simpson = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, steps: usize| {
        let h = (hi - lo) / steps as f64;
        let mut acc = f(lo) + f(hi);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + h * i as f64);
        }
        acc * h / 3.0
    };
    let total = simpson(&mapped, 0.0, 1.0, 200_000);
    let u_t = t / (1.0 + t);
    let tail = simpson(&mapped, u_t, 1.0, 200_000);
    tail / total
}

// ---- graph helpers ----------------------------------------------------

/// An undirected network on `n` arbitrary catalog components.
pub fn network(n: usize, edges: &[(usize, usize, f64)]) -> PolicyNetwork {
    let nodes = (0..n)
        .map(|i| Node {
            component: ComponentId::from_global_index(i).expect("at most 30 nodes"),
            size: 1.0,
        })
        .collect();
    let mut edges: Vec<Edge> = edges
        .iter()
        .map(|&(a, b, w)| Edge {
            source: a.min(b),
            target: a.max(b),
            weight: w,
        })
        .collect();
    edges.sort_by_key(|e| (e.source, e.target));
    PolicyNetwork {
        nodes,
        edges,
        provenance: Provenance::StrategyAlignment,
    }
}

pub fn unit(n: usize, edges: &[(usize, usize)]) -> PolicyNetwork {
    let weighted: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
    network(n, &weighted)
}

/// Newman modularity summed over every ordered node pair.
pub fn oracle_modularity(n: usize, edges: &[(usize, usize, f64)], assignment: &[usize]) -> f64 {
    let mut a = vec![vec![0.0f64; n]; n];
    for &(x, y, w) in edges {
        a[x][y] += w;
        a[y][x] += w;
    }
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `n` elements as restricted-growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            let next = if c > max { c } else { max };
            grow(prefix, next, n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut prefix = vec![0];
    grow(&mut prefix, 0, n, &mut out);
    out
}

/// A random simple graph with integer weights 1..=3.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j, f64::from(rng.random_range(1..=3u8))));
            }
        }
    }
    edges
}
