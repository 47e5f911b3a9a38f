//! Corpus-level comparisons: prevalence, group profiles, publication waves,
//! strongest pairs, temporal trends and Pearson correlation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::alignment::{self, AlignmentScore, IndexReport, MATRIX_KINDS};
use crate::corpus::{cross_kind_pairs, CodedStrategy, Corpus, Region};
use crate::taxonomy::{catalog, ComponentId, ComponentKind, GovernanceModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("corpus contains no strategies")]
    EmptyCorpus,
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("correlation needs at least 3 observations, got {0}")]
    InsufficientData(usize),
    #[error("correlation is undefined for a constant series")]
    ConstantSeries,
    #[error("series contains a non-finite value")]
    NonFinite,
}

/// Round half away from zero to an integer (percentages are non-negative,
/// so this is half-up).
pub fn round_half_up(x: f64) -> i64 {
    x.round() as i64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrevalenceEntry {
    pub component: ComponentId,
    pub count: usize,
    pub percent: f64,
    pub percent_rounded: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrevalenceTable {
    pub kind: ComponentKind,
    pub n_strategies: usize,
    pub entries: Vec<PrevalenceEntry>,
}

impl PrevalenceTable {
    pub fn get(&self, component: ComponentId) -> Option<&PrevalenceEntry> {
        self.entries.iter().find(|e| e.component == component)
    }
}

/// Share of strategies coding each component of `kind` as present, in
/// catalog order.
pub fn prevalence(corpus: &Corpus, kind: ComponentKind) -> Result<PrevalenceTable, AnalyticsError> {
    let n = corpus.len();
    if n == 0 {
        return Err(AnalyticsError::EmptyCorpus);
    }
    let entries = catalog(kind)
        .iter()
        .map(|&component| {
            let count = corpus.strategies.iter().filter(|s| s.is_present(component)).count();
            let percent = 100.0 * count as f64 / n as f64;
            PrevalenceEntry {
                component,
                count,
                percent,
                percent_rounded: round_half_up(percent),
            }
        })
        .collect();
    Ok(PrevalenceTable {
        kind,
        n_strategies: n,
        entries,
    })
}

/// Publication-year bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wave {
    /// 2017-2018
    Wave1,
    /// 2019-2020
    Wave2,
    /// 2021-2025
    Wave3,
}

impl Wave {
    pub const ALL: [Wave; 3] = [Wave::Wave1, Wave::Wave2, Wave::Wave3];

    /// Years before the first band fall into wave 1 and years after the
    /// last into wave 3, so every strategy belongs to exactly one wave.
    pub fn of_year(year: i32) -> Wave {
        match year {
            ..=2018 => Wave::Wave1,
            2019..=2020 => Wave::Wave2,
            _ => Wave::Wave3,
        }
    }

    pub fn years(self) -> (i32, i32) {
        match self {
            Wave::Wave1 => (2017, 2018),
            Wave::Wave2 => (2019, 2020),
            Wave::Wave3 => (2021, 2025),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Wave::Wave1 => "wave1",
            Wave::Wave2 => "wave2",
            Wave::Wave3 => "wave3",
        }
    }
}

impl fmt::Display for Wave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.years();
        write!(f, "{} ({a}-{b})", self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    Model,
    Region,
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum GroupKey {
    Model(GovernanceModel),
    Region(Region),
    Wave(Wave),
}

impl GroupKey {
    pub fn of(strategy: &CodedStrategy, grouping: Grouping) -> GroupKey {
        match grouping {
            Grouping::Model => GroupKey::Model(strategy.meta.governance_model),
            Grouping::Region => GroupKey::Region(strategy.meta.region),
            Grouping::Wave => GroupKey::Wave(Wave::of_year(strategy.meta.publication_year)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GroupKey::Model(m) => m.as_str(),
            GroupKey::Region(r) => r.as_str(),
            GroupKey::Wave(w) => w.as_str(),
        }
    }
}

/// Arithmetic means of the index fields over a group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexMeans {
    pub objective_coverage: f64,
    pub implementation_specificity: f64,
    pub strategic_alignment: f64,
    pub alignment_coverage: f64,
    pub mean_alignment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanMatrix {
    pub row_kind: ComponentKind,
    pub col_kind: ComponentKind,
    pub rows: Vec<ComponentId>,
    pub cols: Vec<ComponentId>,
    pub values: Vec<Vec<f64>>,
}

impl MeanMatrix {
    pub fn name(&self) -> String {
        format!("{}_{}", self.row_kind, self.col_kind)
    }

    pub fn to_csv(&self) -> String {
        alignment::grid_csv(&self.rows, &self.cols, |i, j| format!("{:.4}", self.values[i][j]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupProfile {
    pub key: GroupKey,
    pub members: Vec<String>,
    pub mean_indices: IndexMeans,
    pub mean_matrices: Vec<MeanMatrix>,
}

fn mean_indices(reports: &[IndexReport]) -> IndexMeans {
    let n = reports.len() as f64;
    let avg = |f: fn(&IndexReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    IndexMeans {
        objective_coverage: avg(|r| r.objective_coverage),
        implementation_specificity: avg(|r| r.implementation_specificity),
        strategic_alignment: avg(|r| r.strategic_alignment),
        alignment_coverage: avg(|r| r.alignment_coverage),
        mean_alignment: avg(|r| r.mean_alignment),
    }
}

/// Element-wise mean of the three alignment matrices over `members`.
pub fn mean_matrices(members: &[&CodedStrategy]) -> Vec<MeanMatrix> {
    MATRIX_KINDS
        .iter()
        .map(|&(rk, ck)| {
            let rows = catalog(rk).to_vec();
            let cols = catalog(ck).to_vec();
            let mut values = vec![vec![0.0; cols.len()]; rows.len()];
            for s in members {
                let m = alignment::build_matrix(s, rk, ck);
                for (i, row) in m.cells.iter().enumerate() {
                    for (j, score) in row.iter().enumerate() {
                        values[i][j] += f64::from(score.value());
                    }
                }
            }
            let n = members.len().max(1) as f64;
            for v in values.iter_mut().flatten() {
                *v /= n;
            }
            MeanMatrix {
                row_kind: rk,
                col_kind: ck,
                rows,
                cols,
                values,
            }
        })
        .collect()
}

/// One profile per non-empty group, ordered by group key; members sorted by
/// country.
pub fn group_profile(corpus: &Corpus, grouping: Grouping) -> Vec<GroupProfile> {
    let mut groups: BTreeMap<GroupKey, Vec<&CodedStrategy>> = BTreeMap::new();
    for s in corpus.by_country() {
        groups.entry(GroupKey::of(s, grouping)).or_default().push(s);
    }
    groups
        .into_iter()
        .map(|(key, members)| {
            let reports: Vec<IndexReport> = members.iter().map(|s| alignment::index_report(s)).collect();
            GroupProfile {
                key,
                members: members.iter().map(|s| s.meta.country.clone()).collect(),
                mean_indices: mean_indices(&reports),
                mean_matrices: mean_matrices(&members),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairPrevalence {
    pub a: ComponentId,
    pub b: ComponentId,
    pub count: usize,
    pub percent: f64,
    pub percent_rounded: i64,
}

/// Every cross-kind pair ranked by the share of all strategies scoring it at
/// least `min_score`. Ties keep canonical pair order.
pub fn strongest_pairs(
    corpus: &Corpus,
    min_score: AlignmentScore,
) -> Result<Vec<PairPrevalence>, AnalyticsError> {
    let n = corpus.len();
    if n == 0 {
        return Err(AnalyticsError::EmptyCorpus);
    }
    let mut out: Vec<PairPrevalence> = cross_kind_pairs()
        .map(|(a, b)| {
            let count = corpus
                .strategies
                .iter()
                .filter(|s| s.score(a, b) >= min_score)
                .count();
            let percent = 100.0 * count as f64 / n as f64;
            PairPrevalence {
                a,
                b,
                count,
                percent,
                percent_rounded: round_half_up(percent),
            }
        })
        .collect();
    // stable sort keeps canonical order among equal counts
    out.sort_by_key(|p| std::cmp::Reverse(p.count));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveTrend {
    pub wave: Wave,
    pub n_strategies: usize,
    pub members: Vec<String>,
    /// Mean objective intensity per objective, catalog order.
    pub intensity: Vec<(ComponentId, f64)>,
}

/// Mean objective intensity per wave; waves without strategies are omitted.
pub fn temporal_trends(corpus: &Corpus) -> Vec<WaveTrend> {
    let mut by_wave: BTreeMap<Wave, Vec<&CodedStrategy>> = BTreeMap::new();
    for s in corpus.by_country() {
        by_wave
            .entry(Wave::of_year(s.meta.publication_year))
            .or_default()
            .push(s);
    }
    by_wave
        .into_iter()
        .map(|(wave, members)| {
            let n = members.len() as f64;
            let intensity = catalog(ComponentKind::Objective)
                .iter()
                .map(|&o| {
                    let total: f64 = members.iter().map(|s| alignment::objective_intensity(s, o)).sum();
                    (o, total / n)
                })
                .collect();
            WaveTrend {
                wave,
                n_strategies: members.len(),
                members: members.iter().map(|s| s.meta.country.clone()).collect(),
                intensity,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub p_two_tailed: f64,
    pub n: usize,
}

/// Two-tailed p-value of a Pearson coefficient `r` over `n` observations,
/// from the t distribution with `n - 2` degrees of freedom.
pub fn pearson_p_value(r: f64, n: usize) -> f64 {
    assert!(n >= 3, "p-value needs n >= 3");
    let r = r.clamp(-1.0, 1.0);
    if r.abs() == 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = r.abs() * df.sqrt() / (1.0 - r * r).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * dist.sf(t)).clamp(0.0, 1.0)
}

/// Pearson correlation with a two-tailed significance test.
pub fn correlate(x: &[f64], y: &[f64]) -> Result<CorrelationResult, AnalyticsError> {
    if x.len() != y.len() {
        return Err(AnalyticsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(AnalyticsError::InsufficientData(n));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(AnalyticsError::NonFinite);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(AnalyticsError::ConstantSeries);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    Ok(CorrelationResult {
        r,
        p_two_tailed: pearson_p_value(r, n),
        n,
    })
}

/// One index report per strategy, ordered by country.
pub fn country_comparison(corpus: &Corpus) -> Vec<IndexReport> {
    corpus.by_country().into_iter().map(alignment::index_report).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AlignmentCell, AlignmentEvidence, ComponentCoding, StrategyMeta};
    use crate::taxonomy::parse_component;
    use proptest::prelude::*;

    fn id(code: &str) -> ComponentId {
        parse_component(code).unwrap()
    }

    fn strategy(country: &str, year: i32, model: GovernanceModel, codes: &[&str]) -> CodedStrategy {
        let mut s = CodedStrategy::new(StrategyMeta {
            country: country.into(),
            strategy_title: "t".into(),
            publication_year: year,
            governance_model: model,
            region: Region::Europe,
        });
        for c in codes {
            let mut coding = ComponentCoding::new(id(c), 2);
            if id(c).kind() == ComponentKind::Objective {
                coding.intensity_subscores = Some([1, 2, 3]);
            }
            s.codings.push(coding);
        }
        s
    }

    #[test]
    fn prevalence_full_and_empty() {
        let c = Corpus::new(vec![
            strategy("A", 2018, GovernanceModel::Hybrid, &["INS.TAX"]),
            strategy("B", 2019, GovernanceModel::Hybrid, &["INS.TAX", "INS.SKILLS"]),
        ]);
        let t = prevalence(&c, ComponentKind::Instrument).unwrap();
        assert_eq!(t.get(id("INS.TAX")).unwrap().percent, 100.0);
        assert_eq!(t.get(id("INS.SKILLS")).unwrap().percent_rounded, 50);
        assert_eq!(prevalence(&Corpus::default(), ComponentKind::Instrument), Err(AnalyticsError::EmptyCorpus));
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_half_up(12.5), 13);
        assert_eq!(round_half_up(12.49), 12);
        assert_eq!(round_half_up(0.5), 1);
    }

    #[test]
    fn waves() {
        assert_eq!(Wave::of_year(2017), Wave::Wave1);
        assert_eq!(Wave::of_year(2018), Wave::Wave1);
        assert_eq!(Wave::of_year(2019), Wave::Wave2);
        assert_eq!(Wave::of_year(2020), Wave::Wave2);
        assert_eq!(Wave::of_year(2021), Wave::Wave3);
        assert_eq!(Wave::of_year(2025), Wave::Wave3);
    }

    #[test]
    fn singleton_group_equals_member() {
        let a = strategy("A", 2018, GovernanceModel::Hybrid, &["OBJ.ECON_COMP", "INS.TAX"]);
        let b = strategy("B", 2018, GovernanceModel::MarketLed, &["OBJ.ETHICS"]);
        let c = Corpus::new(vec![a.clone(), b]);
        let profiles = group_profile(&c, Grouping::Model);
        assert_eq!(profiles.len(), 2);
        let hybrid = profiles.iter().find(|p| p.key == GroupKey::Model(GovernanceModel::Hybrid)).unwrap();
        let r = alignment::index_report(&a);
        assert_eq!(hybrid.mean_indices.mean_alignment, r.mean_alignment);
        assert_eq!(hybrid.mean_indices.objective_coverage, r.objective_coverage);
        assert_eq!(hybrid.mean_matrices[1].values[0][5], 1.0);
    }

    #[test]
    fn identical_members_share_means() {
        let a = strategy("A", 2020, GovernanceModel::Hybrid, &["OBJ.ECON_COMP", "FOR.DELPHI"]);
        let mut b = a.clone();
        b.meta.country = "B".into();
        let p = group_profile(&Corpus::new(vec![a.clone(), b]), Grouping::Wave);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].members, vec!["A", "B"]);
        let r = alignment::index_report(&a);
        assert_eq!(p[0].mean_indices.strategic_alignment, r.strategic_alignment);
    }

    #[test]
    fn strongest_pairs_without_cells() {
        let c = Corpus::new(vec![strategy("A", 2018, GovernanceModel::Hybrid, &["OBJ.ECON_COMP", "INS.TAX"])]);
        let pairs = strongest_pairs(&c, AlignmentScore::MODERATE).unwrap();
        assert!(pairs.iter().all(|p| p.percent == 0.0));
        assert_eq!(pairs.len(), 296);
        // canonical order preserved among ties
        assert_eq!((pairs[0].a, pairs[0].b), (id("OBJ.ECON_COMP"), id("FOR.HORIZON")));
    }

    #[test]
    fn strongest_pairs_ranks() {
        let mut a = strategy("A", 2018, GovernanceModel::Hybrid, &["OBJ.ECON_COMP", "INS.TAX", "INS.SKILLS"]);
        a.cells.push(AlignmentCell {
            a: id("OBJ.ECON_COMP"),
            b: id("INS.SKILLS"),
            evidence: AlignmentEvidence::FULL,
        });
        let mut b = a.clone();
        b.meta.country = "B".into();
        b.cells[0].b = id("INS.TAX");
        let pairs = strongest_pairs(&Corpus::new(vec![a, b]), AlignmentScore::STRONG).unwrap();
        assert_eq!(pairs[0].percent, 50.0);
        assert_eq!(pairs[0].b, id("INS.SKILLS"));
        assert_eq!(pairs[1].b, id("INS.TAX"));
    }

    #[test]
    fn temporal_trends_single_wave() {
        let c = Corpus::new(vec![strategy("A", 2019, GovernanceModel::Hybrid, &["OBJ.ECON_COMP"])]);
        let t = temporal_trends(&c);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].wave, Wave::Wave2);
        assert_eq!(t[0].intensity[0], (id("OBJ.ECON_COMP"), 2.0));
        assert!(t[0].intensity[1..].iter().all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn correlate_linear() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let c = correlate(&x, &y).unwrap();
        assert!((c.r - 1.0).abs() < 1e-15);
        assert!(c.p_two_tailed < 1e-12);
    }

    #[test]
    fn correlate_errors() {
        assert_eq!(correlate(&[1.0, 2.0], &[1.0, 2.0]), Err(AnalyticsError::InsufficientData(2)));
        assert_eq!(correlate(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(AnalyticsError::ConstantSeries));
        assert_eq!(correlate(&[1.0, 2.0, 3.0], &[1.0, 2.0]), Err(AnalyticsError::LengthMismatch(3, 2)));
    }

    #[test]
    fn reported_significance_levels() {
        assert!(pearson_p_value(0.67, 20) < 0.01);
        assert!(pearson_p_value(0.59, 20) < 0.05);
        assert!(pearson_p_value(0.54, 20) < 0.05);
    }

    #[test]
    fn empty_comparison() {
        assert!(country_comparison(&Corpus::default()).is_empty());
    }

    proptest! {
        #[test]
        fn correlation_symmetric_and_affine_invariant(
            pts in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..30),
            scale in 0.1f64..10.0,
            shift in -50.0f64..50.0,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            let Ok(xy) = correlate(&x, &y) else { return Ok(()); };
            let yx = correlate(&y, &x).unwrap();
            prop_assert!((xy.r - yx.r).abs() < 1e-12);
            prop_assert!((xy.p_two_tailed - yx.p_two_tailed).abs() < 1e-12);
            let x2: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
            let moved = correlate(&x2, &y).unwrap();
            prop_assert!((moved.r - xy.r).abs() < 1e-12);
        }

        #[test]
        fn p_value_monotone(r1 in 0.01f64..0.98, dr in 0.001f64..0.01, n in 4usize..200) {
            let r2 = (r1 + dr).min(0.999);
            prop_assert!(pearson_p_value(r2, n) <= pearson_p_value(r1, n));
            prop_assert!(pearson_p_value(r1, n + 1) <= pearson_p_value(r1, n));
        }
    }
}
