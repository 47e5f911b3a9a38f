//! Inter-coder agreement: Cohen's kappa for component identification,
//! weighted kappa for alignment scores, and the consensus gate.

use std::collections::BTreeMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{check_same_countries, cross_kind_pairs, Corpus, MergeError};
use crate::taxonomy::ComponentId;

/// Both kappas must exceed this for the coding to pass.
pub const KAPPA_GATE: f64 = 0.7;

/// Number of ordinal score categories (0..=3).
const SCORE_CATEGORIES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("label sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no decisions to compare")]
    Empty,
    #[error("score {0} outside 0..=3")]
    ScoreOutOfRange(u8),
}

#[derive(Debug, Error)]
pub enum ReliabilityError {
    #[error(transparent)]
    Countries(#[from] MergeError),
    #[error("{what}: {source}")]
    Kappa {
        what: &'static str,
        #[source]
        source: KappaError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaWeights {
    #[default]
    Linear,
    Quadratic,
}

impl KappaWeights {
    fn weight(self, i: usize, j: usize) -> f64 {
        let d = i.abs_diff(j) as f64 / (SCORE_CATEGORIES - 1) as f64;
        match self {
            KappaWeights::Linear => d,
            KappaWeights::Quadratic => d * d,
        }
    }
}

fn check_lengths<T>(a: &[T], b: &[T]) -> Result<(), KappaError> {
    if a.len() != b.len() {
        return Err(KappaError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(KappaError::Empty);
    }
    Ok(())
}

/// Cohen's kappa for two label sequences over any categorical label type.
///
/// When chance agreement is 1 (both coders used one and the same category
/// throughout) the result is 1 for perfect agreement and 0 otherwise.
pub fn cohen_kappa<L: Eq + Hash + Ord>(labels_a: &[L], labels_b: &[L]) -> Result<f64, KappaError> {
    check_lengths(labels_a, labels_b)?;
    let n = labels_a.len() as f64;
    let mut marg_a: BTreeMap<&L, usize> = BTreeMap::new();
    let mut marg_b: BTreeMap<&L, usize> = BTreeMap::new();
    let mut agree = 0usize;
    for (x, y) in labels_a.iter().zip(labels_b) {
        *marg_a.entry(x).or_default() += 1;
        *marg_b.entry(y).or_default() += 1;
        if x == y {
            agree += 1;
        }
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = marg_a
        .iter()
        .map(|(label, &ca)| {
            let cb = marg_b.get(label).copied().unwrap_or(0);
            (ca as f64 / n) * (cb as f64 / n)
        })
        .sum();
    if p_e >= 1.0 {
        return Ok(if agree == labels_a.len() { 1.0 } else { 0.0 });
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Weighted kappa over 0..=3 ordinal scores.
pub fn weighted_kappa(scores_a: &[u8], scores_b: &[u8], weights: KappaWeights) -> Result<f64, KappaError> {
    check_lengths(scores_a, scores_b)?;
    if let Some(&bad) = scores_a.iter().chain(scores_b).find(|&&s| s as usize >= SCORE_CATEGORIES) {
        return Err(KappaError::ScoreOutOfRange(bad));
    }
    let n = scores_a.len() as f64;
    let mut observed = [[0.0f64; SCORE_CATEGORIES]; SCORE_CATEGORIES];
    let mut row = [0.0f64; SCORE_CATEGORIES];
    let mut col = [0.0f64; SCORE_CATEGORIES];
    for (&x, &y) in scores_a.iter().zip(scores_b) {
        observed[x as usize][y as usize] += 1.0 / n;
        row[x as usize] += 1.0 / n;
        col[y as usize] += 1.0 / n;
    }
    let mut disagree_obs = 0.0;
    let mut disagree_exp = 0.0;
    for i in 0..SCORE_CATEGORIES {
        for j in 0..SCORE_CATEGORIES {
            let w = weights.weight(i, j);
            disagree_obs += w * observed[i][j];
            disagree_exp += w * row[i] * col[j];
        }
    }
    if disagree_exp == 0.0 {
        return Ok(if disagree_obs == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(1.0 - disagree_obs / disagree_exp)
}

pub fn passes_gate(kappa_identification: f64, kappa_alignment: f64) -> bool {
    kappa_identification > KAPPA_GATE && kappa_alignment > KAPPA_GATE
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReliabilityReport {
    pub kappa_identification: f64,
    pub kappa_alignment_weighted: f64,
    pub n_identification_decisions: usize,
    pub n_alignment_decisions: usize,
    pub passes_gate: bool,
}

/// The paired decisions underlying a reliability report.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoderDecisions {
    /// Present/absent per (strategy, catalog component).
    pub identification: (Vec<bool>, Vec<bool>),
    /// Derived 0..=3 score per pair both coders marked both-present.
    pub alignment: (Vec<u8>, Vec<u8>),
}

/// Collect paired decisions, walking coder A's strategies in file order.
pub fn coder_decisions(a: &Corpus, b: &Corpus) -> Result<CoderDecisions, MergeError> {
    check_same_countries(a, b)?;
    let mut out = CoderDecisions::default();
    for sa in &a.strategies {
        let sb = b.strategy(&sa.meta.country).expect("country sets checked");
        for c in ComponentId::all() {
            out.identification.0.push(sa.is_present(c));
            out.identification.1.push(sb.is_present(c));
        }
        for (x, y) in cross_kind_pairs() {
            let both_a = sa.is_present(x) && sa.is_present(y);
            let both_b = sb.is_present(x) && sb.is_present(y);
            if both_a && both_b {
                out.alignment.0.push(sa.score(x, y).value());
                out.alignment.1.push(sb.score(x, y).value());
            }
        }
    }
    Ok(out)
}

pub fn reliability_report(a: &Corpus, b: &Corpus) -> Result<ReliabilityReport, ReliabilityError> {
    reliability_report_with(a, b, KappaWeights::Linear)
}

pub fn reliability_report_with(
    a: &Corpus,
    b: &Corpus,
    weights: KappaWeights,
) -> Result<ReliabilityReport, ReliabilityError> {
    let d = coder_decisions(a, b)?;
    let kappa_identification =
        cohen_kappa(&d.identification.0, &d.identification.1).map_err(|source| ReliabilityError::Kappa {
            what: "component identification",
            source,
        })?;
    let kappa_alignment_weighted =
        weighted_kappa(&d.alignment.0, &d.alignment.1, weights).map_err(|source| ReliabilityError::Kappa {
            what: "alignment scoring",
            source,
        })?;
    Ok(ReliabilityReport {
        kappa_identification,
        kappa_alignment_weighted,
        n_identification_decisions: d.identification.0.len(),
        n_alignment_decisions: d.alignment.0.len(),
        passes_gate: passes_gate(kappa_identification, kappa_alignment_weighted),
    })
}
