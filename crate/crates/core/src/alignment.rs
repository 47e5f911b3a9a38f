//! Alignment scoring, the three alignment matrices and the strategy-level
//! indices derived from them.
//!
//! A cross-kind pair scores 0 when either component is absent. When both are
//! present the score depends on how many evidence dimensions the coder
//! recorded for the pair: all three give 3 (strong), one or two give 2
//! (moderate), none or no recorded cell give 1 (co-existence only).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{AlignmentEvidence, CodedStrategy};
use crate::taxonomy::{catalog, ComponentCategory, ComponentId, ComponentKind};

/// The three matrix kind pairs, in canonical order.
pub const MATRIX_KINDS: [(ComponentKind, ComponentKind); 3] = [
    (ComponentKind::Objective, ComponentKind::Foresight),
    (ComponentKind::Objective, ComponentKind::Instrument),
    (ComponentKind::Foresight, ComponentKind::Instrument),
];

/// Alignment intensity of one component pair, 0..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct AlignmentScore(u8);

impl AlignmentScore {
    pub const ABSENT: AlignmentScore = AlignmentScore(0);
    pub const WEAK: AlignmentScore = AlignmentScore(1);
    pub const MODERATE: AlignmentScore = AlignmentScore(2);
    pub const STRONG: AlignmentScore = AlignmentScore(3);

    pub fn new(value: u8) -> Option<AlignmentScore> {
        (value <= 3).then_some(AlignmentScore(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for AlignmentScore {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        AlignmentScore::new(value).ok_or_else(|| format!("alignment score {value} outside 0..=3"))
    }
}

impl From<AlignmentScore> for u8 {
    fn from(s: AlignmentScore) -> u8 {
        s.0
    }
}

impl fmt::Display for AlignmentScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn score_cell(
    present_a: bool,
    present_b: bool,
    evidence: Option<AlignmentEvidence>,
) -> AlignmentScore {
    if !(present_a && present_b) {
        return AlignmentScore::ABSENT;
    }
    match evidence.map_or(0, |e| e.count()) {
        0 => AlignmentScore::WEAK,
        1 | 2 => AlignmentScore::MODERATE,
        _ => AlignmentScore::STRONG,
    }
}

/// Dense score grid for one kind pair, rows and columns in catalog order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentMatrix {
    pub row_kind: ComponentKind,
    pub col_kind: ComponentKind,
    pub rows: Vec<ComponentId>,
    pub cols: Vec<ComponentId>,
    pub cells: Vec<Vec<AlignmentScore>>,
}

impl AlignmentMatrix {
    pub fn get(&self, row: usize, col: usize) -> AlignmentScore {
        self.cells[row][col]
    }

    /// File stem used for exports, e.g. `objective_foresight`.
    pub fn name(&self) -> String {
        format!("{}_{}", self.row_kind, self.col_kind)
    }

    /// Grid as reals, for averaging and rendering.
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|s| f64::from(s.value())).collect())
            .collect()
    }

    /// CSV grid with canonical codes as headers.
    pub fn to_csv(&self) -> String {
        grid_csv(&self.rows, &self.cols, |i, j| self.cells[i][j].to_string())
    }
}

pub(crate) fn grid_csv(
    rows: &[ComponentId],
    cols: &[ComponentId],
    cell: impl Fn(usize, usize) -> String,
) -> String {
    let mut out = String::from("component");
    for c in cols {
        out.push(',');
        out.push_str(c.code());
    }
    out.push('\n');
    for (i, r) in rows.iter().enumerate() {
        out.push_str(r.code());
        for j in 0..cols.len() {
            out.push(',');
            out.push_str(&cell(i, j));
        }
        out.push('\n');
    }
    out
}

/// Score every (row, col) pair of the strategy.
///
/// # Panics
/// If `row_kind == col_kind`.
pub fn build_matrix(
    strategy: &CodedStrategy,
    row_kind: ComponentKind,
    col_kind: ComponentKind,
) -> AlignmentMatrix {
    assert_ne!(row_kind, col_kind, "alignment matrices pair two different kinds");
    let rows = catalog(row_kind).to_vec();
    let cols = catalog(col_kind).to_vec();
    let cells = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| strategy.score(r, c)).collect())
        .collect();
    AlignmentMatrix {
        row_kind,
        col_kind,
        rows,
        cols,
        cells,
    }
}

/// The objective-foresight, objective-instrument and foresight-instrument
/// matrices.
pub fn build_all_matrices(strategy: &CodedStrategy) -> [AlignmentMatrix; 3] {
    MATRIX_KINDS.map(|(r, c)| build_matrix(strategy, r, c))
}

/// Scores of all cross-kind pairs with both components present.
fn present_pair_scores(strategy: &CodedStrategy) -> Vec<u8> {
    let mut out = Vec::new();
    for (rk, ck) in MATRIX_KINDS {
        let rows = strategy.present(rk);
        let cols = strategy.present(ck);
        for &r in &rows {
            for &c in &cols {
                out.push(strategy.score(r, c).value());
            }
        }
    }
    out
}

/// Mean score over co-present pairs, divided by 3. Zero when no pair has
/// both components present.
pub fn normalized_alignment(strategy: &CodedStrategy) -> f64 {
    mean_alignment_score(strategy) / 3.0
}

pub fn objective_coverage_index(strategy: &CodedStrategy) -> f64 {
    strategy.present(ComponentKind::Objective).len() as f64 / catalog(ComponentKind::Objective).len() as f64
}

/// Mean of `specificity / 3` over present instruments; missing specificity
/// counts as 0.
pub fn implementation_specificity_index(strategy: &CodedStrategy) -> f64 {
    let present = strategy.present(ComponentKind::Instrument);
    if present.is_empty() {
        return 0.0;
    }
    let total: f64 = present
        .iter()
        .map(|&c| {
            let s = strategy.coding(c).and_then(|c| c.specificity).unwrap_or(0);
            f64::from(s) / 3.0
        })
        .sum();
    total / present.len() as f64
}

pub fn strategic_alignment_index(strategy: &CodedStrategy) -> f64 {
    normalized_alignment(strategy)
}

/// Fraction of co-present pairs with an explicit link (score >= 2).
pub fn alignment_coverage(strategy: &CodedStrategy) -> f64 {
    let scores = present_pair_scores(strategy);
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().filter(|&&s| s >= 2).count() as f64 / scores.len() as f64
}

pub fn mean_alignment_score(strategy: &CodedStrategy) -> f64 {
    let scores = present_pair_scores(strategy);
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().map(|&s| f64::from(s)).sum::<f64>() / scores.len() as f64
}

/// Mean of the objective's three intensity subscores, 0 when the objective is
/// absent or carries no subscores.
///
/// # Panics
/// If `objective` is not an objective.
pub fn objective_intensity(strategy: &CodedStrategy, objective: ComponentId) -> f64 {
    assert_eq!(objective.kind(), ComponentKind::Objective, "{objective} is not an objective");
    match strategy.coding(objective) {
        Some(c) if c.is_present() => c
            .intensity_subscores
            .map_or(0.0, |s| s.iter().map(|&v| f64::from(v)).sum::<f64>() / 3.0),
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForesightSophistication {
    pub diversity: f64,
    pub integration_depth: f64,
    pub inclusivity: f64,
    pub composite: f64,
}

pub fn foresight_sophistication(strategy: &CodedStrategy) -> ForesightSophistication {
    let methods = strategy.present(ComponentKind::Foresight);
    let instruments = strategy.present(ComponentKind::Instrument);
    let diversity = methods.len() as f64 / catalog(ComponentKind::Foresight).len() as f64;
    let pairs = methods.len() * instruments.len();
    let integration_depth = if pairs == 0 {
        0.0
    } else {
        let total: f64 = methods
            .iter()
            .flat_map(|&m| instruments.iter().map(move |&i| (m, i)))
            .map(|(m, i)| f64::from(strategy.score(m, i).value()))
            .sum();
        total / pairs as f64 / 3.0
    };
    let inclusivity = if methods.is_empty() {
        0.0
    } else {
        methods
            .iter()
            .filter(|m| m.category() == ComponentCategory::Participatory)
            .count() as f64
            / methods.len() as f64
    };
    ForesightSophistication {
        diversity,
        integration_depth,
        inclusivity,
        composite: (diversity + integration_depth + inclusivity) / 3.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub country: String,
    pub objective_coverage: f64,
    pub implementation_specificity: f64,
    pub strategic_alignment: f64,
    pub alignment_coverage: f64,
    pub mean_alignment: f64,
}

pub fn index_report(strategy: &CodedStrategy) -> IndexReport {
    IndexReport {
        country: strategy.meta.country.clone(),
        objective_coverage: objective_coverage_index(strategy),
        implementation_specificity: implementation_specificity_index(strategy),
        strategic_alignment: strategic_alignment_index(strategy),
        alignment_coverage: alignment_coverage(strategy),
        mean_alignment: mean_alignment_score(strategy),
    }
}

/// Indices that fell back to 0 because their denominator was empty.
pub fn degenerate_indices(strategy: &CodedStrategy) -> Vec<&'static str> {
    let mut out = Vec::new();
    if strategy.present(ComponentKind::Instrument).is_empty() {
        out.push("implementation_specificity");
    }
    if present_pair_scores(strategy).is_empty() {
        out.extend(["strategic_alignment", "alignment_coverage", "mean_alignment"]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AlignmentCell, ComponentCoding, Region, StrategyMeta};
    use crate::taxonomy::{parse_component, GovernanceModel};

    fn id(code: &str) -> ComponentId {
        parse_component(code).unwrap()
    }

    fn empty() -> CodedStrategy {
        CodedStrategy::new(StrategyMeta {
            country: "Testland".into(),
            strategy_title: "t".into(),
            publication_year: 2020,
            governance_model: GovernanceModel::MarketLed,
            region: Region::Oceania,
        })
    }

    fn with(codes: &[&str]) -> CodedStrategy {
        let mut s = empty();
        for c in codes {
            s.codings.push(ComponentCoding::new(id(c), 2));
        }
        s
    }

    fn all_present() -> CodedStrategy {
        let mut s = empty();
        for c in ComponentId::all() {
            s.codings.push(ComponentCoding::new(c, 1));
        }
        s
    }

    fn link(s: &mut CodedStrategy, a: ComponentId, b: ComponentId, e: AlignmentEvidence) {
        s.cells.push(AlignmentCell { a, b, evidence: e });
    }

    const REF_ONLY: AlignmentEvidence = AlignmentEvidence {
        lexical_proximity: false,
        explicit_reference: true,
        elaboration: false,
    };

    #[test]
    fn score_cell_examples() {
        assert_eq!(score_cell(true, false, None), AlignmentScore::ABSENT);
        assert_eq!(score_cell(false, false, Some(AlignmentEvidence::FULL)), AlignmentScore::ABSENT);
        assert_eq!(score_cell(true, true, Some(AlignmentEvidence::FULL)), AlignmentScore::STRONG);
        assert_eq!(score_cell(true, true, None), AlignmentScore::WEAK);
        assert_eq!(score_cell(true, true, Some(AlignmentEvidence::NONE)), AlignmentScore::WEAK);
        assert_eq!(score_cell(true, true, Some(REF_ONLY)), AlignmentScore::MODERATE);
    }

    #[test]
    fn empty_strategy_matrix_is_zero() {
        for m in build_all_matrices(&empty()) {
            assert!(m.cells.iter().flatten().all(|s| s.value() == 0));
        }
    }

    #[test]
    fn matrix_dimensions() {
        let [of, oi, fi] = build_all_matrices(&empty());
        assert_eq!((of.rows.len(), of.cols.len()), (12, 8));
        assert_eq!((oi.rows.len(), oi.cols.len()), (12, 10));
        assert_eq!((fi.rows.len(), fi.cols.len()), (8, 10));
    }

    #[test]
    fn all_present_no_cells_is_all_ones() {
        let s = all_present();
        for m in build_all_matrices(&s) {
            assert!(m.cells.iter().flatten().all(|s| s.value() == 1));
        }
        assert!((normalized_alignment(&s) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(alignment_coverage(&s), 0.0);
    }

    #[test]
    fn all_strong_is_one() {
        let mut s = all_present();
        let pairs: Vec<_> = crate::corpus::cross_kind_pairs().collect();
        for (a, b) in pairs {
            link(&mut s, a, b, AlignmentEvidence::FULL);
        }
        assert_eq!(normalized_alignment(&s), 1.0);
        assert_eq!(alignment_coverage(&s), 1.0);
        assert_eq!(mean_alignment_score(&s), 3.0);
    }

    #[test]
    fn degenerate_indices_are_zero() {
        let s = empty();
        assert_eq!(normalized_alignment(&s), 0.0);
        assert_eq!(objective_coverage_index(&s), 0.0);
        assert_eq!(implementation_specificity_index(&s), 0.0);
        assert_eq!(mean_alignment_score(&s), 0.0);
        assert_eq!(degenerate_indices(&s).len(), 4);
    }

    #[test]
    fn objective_coverage_examples() {
        let codes: Vec<_> = catalog(ComponentKind::Objective).iter().map(|c| c.code()).collect();
        assert_eq!(objective_coverage_index(&with(&codes)), 1.0);
        assert_eq!(objective_coverage_index(&with(&codes[..6])), 0.5);
    }

    #[test]
    fn specificity_examples() {
        let mut s = with(&["INS.TAX", "INS.SKILLS"]);
        s.codings[0].specificity = Some(1);
        s.codings[1].specificity = Some(2);
        assert!((implementation_specificity_index(&s) - 0.5).abs() < 1e-15);
        s.codings[0].specificity = Some(3);
        s.codings[1].specificity = Some(3);
        assert_eq!(implementation_specificity_index(&s), 1.0);
    }

    #[test]
    fn coverage_counting() {
        // 2 objectives x 5 instruments = 10 present pairs, 4 explicit.
        let mut s = with(&[
            "OBJ.ECON_COMP",
            "OBJ.ETHICS",
            "INS.RESEARCH_FUNDING",
            "INS.TAX",
            "INS.SKILLS",
            "INS.REGULATORY",
            "INS.STANDARDS",
        ]);
        let pairs = [
            ("OBJ.ECON_COMP", "INS.RESEARCH_FUNDING"),
            ("OBJ.ECON_COMP", "INS.TAX"),
            ("OBJ.ETHICS", "INS.REGULATORY"),
            ("OBJ.ETHICS", "INS.STANDARDS"),
        ];
        for (a, b) in pairs {
            link(&mut s, id(a), id(b), REF_ONLY);
        }
        link(&mut s, id("OBJ.ETHICS"), id("INS.TAX"), AlignmentEvidence::NONE);
        assert!((alignment_coverage(&s) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn mean_of_one_two_three() {
        let mut s = with(&["OBJ.ECON_COMP", "INS.RESEARCH_FUNDING", "INS.TAX", "INS.SKILLS"]);
        link(&mut s, id("OBJ.ECON_COMP"), id("INS.TAX"), REF_ONLY);
        link(&mut s, id("INS.SKILLS"), id("OBJ.ECON_COMP"), AlignmentEvidence::FULL);
        assert!((mean_alignment_score(&s) - 2.0).abs() < 1e-15);
        assert_eq!(strategic_alignment_index(&s), mean_alignment_score(&s) / 3.0);
    }

    #[test]
    fn objective_intensity_examples() {
        let mut s = with(&["OBJ.ECON_COMP", "OBJ.SCI_LEAD"]);
        s.codings[0].intensity_subscores = Some([3, 3, 3]);
        s.codings[1].intensity_subscores = Some([1, 2, 3]);
        assert_eq!(objective_intensity(&s, id("OBJ.ECON_COMP")), 3.0);
        assert_eq!(objective_intensity(&s, id("OBJ.SCI_LEAD")), 2.0);
        assert_eq!(objective_intensity(&s, id("OBJ.ETHICS")), 0.0);
    }

    #[test]
    #[should_panic]
    fn objective_intensity_rejects_other_kinds() {
        objective_intensity(&empty(), id("INS.TAX"));
    }

    #[test]
    fn sophistication_full() {
        let mut s = all_present();
        for &m in catalog(ComponentKind::Foresight) {
            for &i in catalog(ComponentKind::Instrument) {
                link(&mut s, m, i, AlignmentEvidence::FULL);
            }
        }
        let f = foresight_sophistication(&s);
        assert_eq!(
            (f.diversity, f.integration_depth, f.inclusivity, f.composite),
            (1.0, 1.0, 0.25, 0.75)
        );
    }

    #[test]
    fn sophistication_edge_cases() {
        let f = foresight_sophistication(&empty());
        assert_eq!((f.diversity, f.integration_depth, f.inclusivity, f.composite), (0.0, 0.0, 0.0, 0.0));
        let f = foresight_sophistication(&with(&["FOR.WORKSHOP"]));
        assert_eq!((f.diversity, f.integration_depth, f.inclusivity), (0.125, 0.0, 1.0));
        assert!((f.composite - 0.375).abs() < 1e-15);
    }

    #[test]
    fn matrix_csv_has_headers() {
        let csv = build_matrix(&all_present(), ComponentKind::Foresight, ComponentKind::Instrument).to_csv();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("component,INS.RESEARCH_FUNDING,INS.SKILLS"));
        assert_eq!(csv.lines().count(), 9);
    }

    #[test]
    fn score_serde_rejects_out_of_range() {
        assert!(serde_json::from_str::<AlignmentScore>("4").is_err());
        assert_eq!(serde_json::from_str::<AlignmentScore>("2").unwrap(), AlignmentScore::MODERATE);
    }
}
