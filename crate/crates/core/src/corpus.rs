//! Coded strategy corpora: data model, JSON format, validation, CSV export
//! and dual-coder merging.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::{score_cell, AlignmentScore};
use crate::taxonomy::{ComponentId, ComponentKind, GovernanceModel};

/// Schema version this crate reads and writes.
pub const SCHEMA_VERSION: &str = "1";

/// Inclusive publication-year window covered by the sample.
pub const YEAR_RANGE: (i32, i32) = (2017, 2025);

/// Upper bound of every coder-supplied ordinal (prominence, specificity,
/// intensity subscores).
pub const MAX_ORDINAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    NorthAmerica,
    Europe,
    EastAsia,
    SoutheastAsia,
    SouthAsia,
    MiddleEast,
    Africa,
    LatinAmerica,
    Oceania,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::NorthAmerica => "north_america",
            Region::Europe => "europe",
            Region::EastAsia => "east_asia",
            Region::SoutheastAsia => "southeast_asia",
            Region::SouthAsia => "south_asia",
            Region::MiddleEast => "middle_east",
            Region::Africa => "africa",
            Region::LatinAmerica => "latin_america",
            Region::Oceania => "oceania",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyMeta {
    pub country: String,
    pub strategy_title: String,
    pub publication_year: i32,
    pub governance_model: GovernanceModel,
    pub region: Region,
}

/// One coder's record for one component of one strategy.
///
/// `specificity` applies to instruments, `explicit_method` to foresight
/// methods and `intensity_subscores` (textual prominence, implementation
/// specificity, resource allocation) to objectives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentCoding {
    pub component: ComponentId,
    pub prominence: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specificity: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_method: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity_subscores: Option<[u8; 3]>,
}

impl ComponentCoding {
    /// A bare coding with no kind-specific attributes.
    pub fn new(component: ComponentId, prominence: u8) -> Self {
        ComponentCoding {
            component,
            prominence,
            specificity: None,
            explicit_method: None,
            intensity_subscores: None,
        }
    }

    pub fn is_present(&self) -> bool {
        self.prominence >= 1
    }
}

/// The three evidence dimensions examined for a component pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignmentEvidence {
    pub lexical_proximity: bool,
    pub explicit_reference: bool,
    pub elaboration: bool,
}

impl AlignmentEvidence {
    pub const NONE: AlignmentEvidence = AlignmentEvidence {
        lexical_proximity: false,
        explicit_reference: false,
        elaboration: false,
    };
    pub const FULL: AlignmentEvidence = AlignmentEvidence {
        lexical_proximity: true,
        explicit_reference: true,
        elaboration: true,
    };

    /// Number of satisfied dimensions.
    pub fn count(&self) -> usize {
        [self.lexical_proximity, self.explicit_reference, self.elaboration]
            .iter()
            .filter(|&&b| b)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlignmentCell {
    pub a: ComponentId,
    pub b: ComponentId,
    pub evidence: AlignmentEvidence,
}

impl AlignmentCell {
    /// Endpoints in canonical (catalog) order.
    pub fn pair(&self) -> (ComponentId, ComponentId) {
        ordered(self.a, self.b)
    }

    pub fn involves(&self, x: ComponentId, y: ComponentId) -> bool {
        self.pair() == ordered(x, y)
    }
}

pub(crate) fn ordered(x: ComponentId, y: ComponentId) -> (ComponentId, ComponentId) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodedStrategy {
    pub meta: StrategyMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coder_id: Option<String>,
    #[serde(default)]
    pub codings: Vec<ComponentCoding>,
    #[serde(default)]
    pub cells: Vec<AlignmentCell>,
}

impl CodedStrategy {
    pub fn new(meta: StrategyMeta) -> Self {
        CodedStrategy {
            meta,
            coder_id: None,
            codings: Vec::new(),
            cells: Vec::new(),
        }
    }

    pub fn country(&self) -> &str {
        &self.meta.country
    }

    pub fn coding(&self, component: ComponentId) -> Option<&ComponentCoding> {
        self.codings.iter().find(|c| c.component == component)
    }

    /// A component counts as present when coded with prominence >= 1.
    pub fn is_present(&self, component: ComponentId) -> bool {
        self.coding(component).is_some_and(ComponentCoding::is_present)
    }

    pub fn prominence(&self, component: ComponentId) -> u8 {
        self.coding(component).map_or(0, |c| c.prominence)
    }

    /// Present components of `kind`, in catalog order.
    pub fn present(&self, kind: ComponentKind) -> Vec<ComponentId> {
        crate::taxonomy::catalog(kind)
            .iter()
            .copied()
            .filter(|&c| self.is_present(c))
            .collect()
    }

    pub fn cell(&self, x: ComponentId, y: ComponentId) -> Option<&AlignmentCell> {
        self.cells.iter().find(|c| c.involves(x, y))
    }

    pub fn evidence(&self, x: ComponentId, y: ComponentId) -> Option<AlignmentEvidence> {
        self.cell(x, y).map(|c| c.evidence)
    }

    /// Alignment score of the pair under this strategy's codings.
    pub fn score(&self, x: ComponentId, y: ComponentId) -> AlignmentScore {
        score_cell(self.is_present(x), self.is_present(y), self.evidence(x, y))
    }

    fn canonicalize(&mut self) {
        self.codings.sort_by_key(|c| c.component);
        for cell in &mut self.cells {
            let (a, b) = cell.pair();
            cell.a = a;
            cell.b = b;
        }
        self.cells.sort_by_key(|c| (c.a, c.b));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub schema_version: String,
    #[serde(default)]
    pub strategies: Vec<CodedStrategy>,
}

impl Default for Corpus {
    fn default() -> Self {
        Corpus {
            schema_version: SCHEMA_VERSION.to_string(),
            strategies: Vec::new(),
        }
    }
}

impl Corpus {
    pub fn new(strategies: Vec<CodedStrategy>) -> Self {
        Corpus {
            schema_version: SCHEMA_VERSION.to_string(),
            strategies,
        }
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn strategy(&self, country: &str) -> Option<&CodedStrategy> {
        self.strategies.iter().find(|s| s.meta.country == country)
    }

    /// Strategies sorted by country name.
    pub fn by_country(&self) -> Vec<&CodedStrategy> {
        let mut v: Vec<_> = self.strategies.iter().collect();
        v.sort_by(|a, b| a.meta.country.cmp(&b.meta.country));
        v
    }

    /// Canonical form: strategies by country, codings in catalog order,
    /// cells with endpoints in catalog order and sorted.
    pub fn canonical(&self) -> Corpus {
        let mut out = self.clone();
        out.strategies.sort_by(|a, b| a.meta.country.cmp(&b.meta.country));
        for s in &mut out.strategies {
            s.canonicalize();
        }
        out
    }

    /// Pretty-printed JSON of the canonical form, LF-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.canonical()).expect("corpus serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("malformed corpus at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("corpus failed validation with {} error(s):\n{}", .0.error_count(), .0)]
    Invalid(ValidationReport),
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, CorpusError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let parsed: Result<T, _> = serde_path_to_error::deserialize(&mut de);
    let value = parsed.map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CorpusError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| CorpusError::Parse {
        path: ".".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(value)
}

/// Parse a corpus document without checking invariants.
pub fn parse_corpus(bytes: &[u8]) -> Result<Corpus, CorpusError> {
    parse_json(bytes)
}

/// Parse and validate. Any Error finding rejects the document; warnings are
/// allowed through.
pub fn load_corpus(bytes: &[u8]) -> Result<Corpus, CorpusError> {
    let corpus = parse_corpus(bytes)?;
    let report = validate(&corpus);
    if report.has_errors() {
        return Err(CorpusError::Invalid(report));
    }
    Ok(corpus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// The invariant a finding reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    UnsupportedSchemaVersion,
    EmptyCountry,
    DuplicateCountry,
    DuplicateCoding,
    OrdinalOutOfRange,
    AttributeKindMismatch,
    ElaborationWithoutReference,
    CellSameKind,
    CellUncodedComponent,
    DuplicateCell,
    YearOutOfRange,
    ZeroProminence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub rule: Rule,
    /// JSON path of the offending value.
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn error_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count()
    }

    pub fn warning_count(&self) -> usize {
        self.findings.len() - self.error_count()
    }

    pub fn has_errors(&self) -> bool {
        self.error_count() > 0
    }

    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            let sev = match finding.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            writeln!(f, "  {sev}: {}: {}", finding.path, finding.message)?;
        }
        Ok(())
    }
}

struct Findings(Vec<Finding>);

impl Findings {
    fn push(&mut self, severity: Severity, rule: Rule, path: String, message: String) {
        self.0.push(Finding {
            severity,
            rule,
            path,
            message,
        });
    }

    fn error(&mut self, rule: Rule, path: String, message: impl Into<String>) {
        self.push(Severity::Error, rule, path, message.into());
    }

    fn warning(&mut self, rule: Rule, path: String, message: impl Into<String>) {
        self.push(Severity::Warning, rule, path, message.into());
    }
}

/// Check every corpus invariant, reporting one finding per violation.
pub fn validate(corpus: &Corpus) -> ValidationReport {
    let mut out = Findings(Vec::new());
    if corpus.schema_version != SCHEMA_VERSION {
        out.error(
            Rule::UnsupportedSchemaVersion,
            "schema_version".into(),
            format!(
                "unsupported schema version `{}` (expected `{SCHEMA_VERSION}`)",
                corpus.schema_version
            ),
        );
    }
    let mut countries = HashSet::new();
    for (i, strategy) in corpus.strategies.iter().enumerate() {
        let base = format!("strategies[{i}]");
        let country = strategy.meta.country.trim();
        if country.is_empty() {
            out.error(Rule::EmptyCountry, format!("{base}.meta.country"), "country name is empty");
        } else if !countries.insert(country.to_string()) {
            out.error(
                Rule::DuplicateCountry,
                format!("{base}.meta.country"),
                format!("duplicate country `{country}`"),
            );
        }
        let year = strategy.meta.publication_year;
        if year < YEAR_RANGE.0 || year > YEAR_RANGE.1 {
            out.warning(
                Rule::YearOutOfRange,
                format!("{base}.meta.publication_year"),
                format!(
                    "publication year {year} outside [{}, {}]",
                    YEAR_RANGE.0, YEAR_RANGE.1
                ),
            );
        }
        validate_codings(strategy, &base, &mut out);
        validate_cells(strategy, &base, &mut out);
    }
    ValidationReport { findings: out.0 }
}

fn validate_codings(strategy: &CodedStrategy, base: &str, out: &mut Findings) {
    let mut seen = HashSet::new();
    for (j, coding) in strategy.codings.iter().enumerate() {
        let path = format!("{base}.codings[{j}]");
        let c = coding.component;
        if !seen.insert(c) {
            out.error(Rule::DuplicateCoding, path.clone(), format!("duplicate coding for {c}"));
        }
        let mut ordinal = |field: &str, value: u8| {
            if value > MAX_ORDINAL {
                out.error(
                    Rule::OrdinalOutOfRange,
                    format!("{path}.{field}"),
                    format!("{field} {value} outside 0..=3"),
                );
            }
        };
        ordinal("prominence", coding.prominence);
        if let Some(s) = coding.specificity {
            ordinal("specificity", s);
        }
        if let Some(sub) = coding.intensity_subscores {
            for v in sub {
                ordinal("intensity_subscores", v);
            }
        }
        let mut mismatch = |field: &str, allowed: ComponentKind| {
            out.error(
                Rule::AttributeKindMismatch,
                format!("{path}.{field}"),
                format!("{field} is only allowed on {allowed} codings ({c} is a {})", c.kind()),
            );
        };
        if coding.specificity.is_some() && c.kind() != ComponentKind::Instrument {
            mismatch("specificity", ComponentKind::Instrument);
        }
        if coding.explicit_method.is_some() && c.kind() != ComponentKind::Foresight {
            mismatch("explicit_method", ComponentKind::Foresight);
        }
        if coding.intensity_subscores.is_some() && c.kind() != ComponentKind::Objective {
            mismatch("intensity_subscores", ComponentKind::Objective);
        }
        if coding.prominence == 0 {
            out.warning(
                Rule::ZeroProminence,
                format!("{path}.prominence"),
                format!("{c} coded with prominence 0 (treated as absent)"),
            );
        }
    }
}

fn validate_cells(strategy: &CodedStrategy, base: &str, out: &mut Findings) {
    let mut seen = HashSet::new();
    for (j, cell) in strategy.cells.iter().enumerate() {
        let path = format!("{base}.cells[{j}]");
        if cell.a.kind() == cell.b.kind() {
            out.error(
                Rule::CellSameKind,
                path.clone(),
                format!("cell pairs two {} components ({}, {})", cell.a.kind(), cell.a, cell.b),
            );
        }
        for (field, c) in [("a", cell.a), ("b", cell.b)] {
            if !strategy.is_present(c) {
                out.error(
                    Rule::CellUncodedComponent,
                    format!("{path}.{field}"),
                    format!("cell references uncoded component {c}"),
                );
            }
        }
        if cell.evidence.elaboration && !cell.evidence.explicit_reference {
            out.error(
                Rule::ElaborationWithoutReference,
                format!("{path}.evidence"),
                "elaboration requires explicit_reference",
            );
        }
        if !seen.insert(cell.pair()) {
            out.error(
                Rule::DuplicateCell,
                path,
                format!("duplicate cell for pair ({}, {})", cell.a, cell.b),
            );
        }
    }
}

/// The two CSV tables produced by [`export_csv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvExport {
    pub codings: String,
    pub cells: String,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Flatten the corpus into `codings.csv` and `cells.csv`, ordered by
/// country and then catalog order.
pub fn export_csv(corpus: &Corpus) -> CsvExport {
    let canonical = corpus.canonical();
    let mut codings = csv_writer();
    let mut cells = csv_writer();
    codings
        .write_record([
            "country",
            "component",
            "kind",
            "category",
            "prominence",
            "specificity",
            "explicit_method",
            "textual_prominence",
            "implementation_specificity",
            "resource_allocation",
        ])
        .expect("in-memory write");
    cells
        .write_record([
            "country",
            "component_a",
            "component_b",
            "lexical_proximity",
            "explicit_reference",
            "elaboration",
            "score",
        ])
        .expect("in-memory write");
    for s in &canonical.strategies {
        for c in &s.codings {
            let sub = c.intensity_subscores;
            codings
                .write_record([
                    s.meta.country.clone(),
                    c.component.code().to_string(),
                    c.component.kind().to_string(),
                    serde_json::to_value(c.component.category())
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    c.prominence.to_string(),
                    opt(c.specificity),
                    opt(c.explicit_method),
                    opt(sub.map(|s| s[0])),
                    opt(sub.map(|s| s[1])),
                    opt(sub.map(|s| s[2])),
                ])
                .expect("in-memory write");
        }
        for cell in &s.cells {
            cells
                .write_record([
                    s.meta.country.clone(),
                    cell.a.code().to_string(),
                    cell.b.code().to_string(),
                    cell.evidence.lexical_proximity.to_string(),
                    cell.evidence.explicit_reference.to_string(),
                    cell.evidence.elaboration.to_string(),
                    s.score(cell.a, cell.b).value().to_string(),
                ])
                .expect("in-memory write");
        }
    }
    CsvExport {
        codings: finish(codings),
        cells: finish(cells),
    }
}

/// How a disputed cell is settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellResolution {
    CoderA,
    CoderB,
    /// No linkage recorded (co-existence only).
    None,
    Evidence(AlignmentEvidence),
}

/// A third-party ruling on one coder disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Adjudication {
    Component {
        country: String,
        component: ComponentId,
        include: bool,
    },
    Cell {
        country: String,
        cell: [ComponentId; 2],
        resolution: CellResolution,
    },
}

impl Adjudication {
    pub fn country(&self) -> &str {
        match self {
            Adjudication::Component { country, .. } | Adjudication::Cell { country, .. } => country,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjudicationFile {
    pub adjudications: Vec<Adjudication>,
}

pub fn load_adjudications(bytes: &[u8]) -> Result<Vec<Adjudication>, CorpusError> {
    parse_json::<AdjudicationFile>(bytes).map(|f| f.adjudications)
}

/// An unresolved difference between two coders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Disagreement {
    /// Component coded present by only one coder.
    Component {
        country: String,
        component: ComponentId,
        coded_by_a: bool,
    },
    /// Both coders coded the pair but derived different scores.
    Cell {
        country: String,
        a: ComponentId,
        b: ComponentId,
        score_a: u8,
        score_b: u8,
    },
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Disagreement::Component {
                country,
                component,
                coded_by_a,
            } => write!(
                f,
                "{country}: {component} coded only by coder {}",
                if *coded_by_a { "A" } else { "B" }
            ),
            Disagreement::Cell {
                country,
                a,
                b,
                score_a,
                score_b,
            } => write!(f, "{country}: cell ({a}, {b}) scored {score_a} vs {score_b}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum MergeError {
    #[error("coder corpora cover different countries (only in A: {only_a:?}; only in B: {only_b:?})")]
    CountrySetMismatch {
        only_a: Vec<String>,
        only_b: Vec<String>,
    },
    #[error("{} unresolved disagreement(s): {}", .0.len(), join(.0))]
    Unresolved(Vec<Disagreement>),
    #[error("adjudication does not match any disagreement: {0:?}")]
    UnmatchedAdjudication(Adjudication),
}

fn join(items: &[Disagreement]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub(crate) fn check_same_countries(a: &Corpus, b: &Corpus) -> Result<(), MergeError> {
    let ca: BTreeSet<_> = a.strategies.iter().map(|s| s.meta.country.as_str()).collect();
    let cb: BTreeSet<_> = b.strategies.iter().map(|s| s.meta.country.as_str()).collect();
    if ca == cb {
        return Ok(());
    }
    Err(MergeError::CountrySetMismatch {
        only_a: ca.difference(&cb).map(|s| s.to_string()).collect(),
        only_b: cb.difference(&ca).map(|s| s.to_string()).collect(),
    })
}

/// Build the consensus corpus from two independent codings.
///
/// Components coded present by only one coder need a component
/// adjudication. Pairs both coders coded on both sides need a cell
/// adjudication when their derived scores differ. Everything else is taken
/// from coder A, falling back to coder B for material only B recorded.
pub fn merge_coders(
    a: &Corpus,
    b: &Corpus,
    adjudications: &[Adjudication],
) -> Result<Corpus, MergeError> {
    check_same_countries(a, b)?;
    let mut used = vec![false; adjudications.len()];
    let mut unresolved = Vec::new();
    let mut merged = Vec::with_capacity(a.len());

    for sa in &a.strategies {
        let country = sa.meta.country.as_str();
        let sb = b.strategy(country).expect("country sets checked");
        let mut strategy = CodedStrategy {
            meta: sa.meta.clone(),
            coder_id: None,
            codings: Vec::new(),
            cells: Vec::new(),
        };

        for component in ComponentId::all() {
            let (in_a, in_b) = (sa.is_present(component), sb.is_present(component));
            let coding = match (in_a, in_b) {
                (true, true) => sa.coding(component),
                (false, false) => sa.coding(component),
                _ => {
                    let hit = adjudications.iter().position(|adj| {
                        matches!(adj, Adjudication::Component { country: c, component: x, .. }
                            if c == country && *x == component)
                    });
                    match hit {
                        Some(i) => {
                            used[i] = true;
                            let include =
                                matches!(adjudications[i], Adjudication::Component { include: true, .. });
                            match (include, in_a) {
                                (true, true) => sa.coding(component),
                                (true, false) => sb.coding(component),
                                (false, _) => None,
                            }
                        }
                        None => {
                            unresolved.push(Disagreement::Component {
                                country: country.to_string(),
                                component,
                                coded_by_a: in_a,
                            });
                            None
                        }
                    }
                }
            };
            if let Some(c) = coding {
                strategy.codings.push(c.clone());
            }
        }

        for (x, y) in cross_kind_pairs() {
            if !(strategy.is_present(x) && strategy.is_present(y)) {
                continue;
            }
            let a_has = sa.is_present(x) && sa.is_present(y);
            let b_has = sb.is_present(x) && sb.is_present(y);
            let evidence = if a_has && b_has {
                let (score_a, score_b) = (sa.score(x, y), sb.score(x, y));
                if score_a == score_b {
                    sa.evidence(x, y)
                } else {
                    let hit = adjudications.iter().position(|adj| {
                        matches!(adj, Adjudication::Cell { country: c, cell, .. }
                            if c == country && ordered(cell[0], cell[1]) == (x, y))
                    });
                    match hit {
                        Some(i) => {
                            used[i] = true;
                            let Adjudication::Cell { resolution, .. } = adjudications[i] else {
                                unreachable!()
                            };
                            match resolution {
                                CellResolution::CoderA => sa.evidence(x, y),
                                CellResolution::CoderB => sb.evidence(x, y),
                                CellResolution::None => None,
                                CellResolution::Evidence(e) => Some(e),
                            }
                        }
                        None => {
                            unresolved.push(Disagreement::Cell {
                                country: country.to_string(),
                                a: x,
                                b: y,
                                score_a: score_a.value(),
                                score_b: score_b.value(),
                            });
                            None
                        }
                    }
                }
            } else if a_has {
                sa.evidence(x, y)
            } else if b_has {
                sb.evidence(x, y)
            } else {
                None
            };
            if let Some(evidence) = evidence {
                // keep the orientation coder A (or B) wrote
                let source = sa.cell(x, y).or_else(|| sb.cell(x, y));
                let (ca, cb) = source.map_or((x, y), |c| (c.a, c.b));
                strategy.cells.push(AlignmentCell {
                    a: ca,
                    b: cb,
                    evidence,
                });
            }
        }
        preserve_order(&mut strategy, sa, sb);
        merged.push(strategy);
    }

    if !unresolved.is_empty() {
        return Err(MergeError::Unresolved(unresolved));
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(MergeError::UnmatchedAdjudication(adjudications[i].clone()));
    }
    Ok(Corpus {
        schema_version: a.schema_version.clone(),
        strategies: merged,
    })
}

/// Reorder merged codings and cells so that items coder A recorded keep A's
/// file order; merge_coders(a, a, []) then reproduces `a` exactly. A coder
/// id survives only when both coders carry the same one.
fn preserve_order(strategy: &mut CodedStrategy, reference: &CodedStrategy, other: &CodedStrategy) {
    let coding_rank: BTreeMap<ComponentId, usize> = reference
        .codings
        .iter()
        .enumerate()
        .map(|(i, c)| (c.component, i))
        .collect();
    strategy
        .codings
        .sort_by_key(|c| (coding_rank.get(&c.component).copied().unwrap_or(usize::MAX), c.component));
    let cell_rank: BTreeMap<(ComponentId, ComponentId), usize> = reference
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.pair(), i))
        .collect();
    strategy
        .cells
        .sort_by_key(|c| (cell_rank.get(&c.pair()).copied().unwrap_or(usize::MAX), c.pair()));
    strategy.coder_id = if reference.coder_id == other.coder_id {
        reference.coder_id.clone()
    } else {
        None
    };
}

/// Every cross-kind component pair, in the order objective-foresight,
/// objective-instrument, foresight-instrument, row-major within each.
pub fn cross_kind_pairs() -> impl Iterator<Item = (ComponentId, ComponentId)> {
    crate::alignment::MATRIX_KINDS
        .into_iter()
        .flat_map(|(rk, ck)| {
            crate::taxonomy::catalog(rk).iter().flat_map(move |&r| {
                crate::taxonomy::catalog(ck).iter().map(move |&c| (r, c))
            })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::parse_component;

    fn id(code: &str) -> ComponentId {
        parse_component(code).unwrap()
    }

    fn meta(country: &str, year: i32) -> StrategyMeta {
        StrategyMeta {
            country: country.into(),
            strategy_title: format!("{country} AI strategy"),
            publication_year: year,
            governance_model: GovernanceModel::Hybrid,
            region: Region::Europe,
        }
    }

    fn small_strategy(country: &str) -> CodedStrategy {
        let mut s = CodedStrategy::new(meta(country, 2019));
        s.codings.push(ComponentCoding {
            intensity_subscores: Some([3, 2, 1]),
            ..ComponentCoding::new(id("OBJ.ECON_COMP"), 3)
        });
        s.codings.push(ComponentCoding {
            specificity: Some(2),
            ..ComponentCoding::new(id("INS.RESEARCH_FUNDING"), 2)
        });
        s.cells.push(AlignmentCell {
            a: id("OBJ.ECON_COMP"),
            b: id("INS.RESEARCH_FUNDING"),
            evidence: AlignmentEvidence::FULL,
        });
        s
    }

    fn rules(report: &ValidationReport) -> Vec<(Severity, Rule)> {
        report.findings.iter().map(|f| (f.severity, f.rule)).collect()
    }

    #[test]
    fn empty_corpus_is_valid() {
        let c = load_corpus(br#"{"schema_version":"1","strategies":[]}"#).unwrap();
        assert!(c.is_empty());
        assert!(validate(&c).is_clean());
    }

    #[test]
    fn valid_corpus_has_no_findings() {
        let c = Corpus::new(vec![small_strategy("Canada"), small_strategy("France")]);
        assert!(validate(&c).is_clean());
    }

    #[test]
    fn cell_with_absent_component_is_rejected() {
        let mut s = small_strategy("Canada");
        s.cells.push(AlignmentCell {
            a: id("OBJ.ECON_COMP"),
            b: id("FOR.DELPHI"),
            evidence: AlignmentEvidence::NONE,
        });
        let json = serde_json::to_vec(&Corpus::new(vec![s])).unwrap();
        match load_corpus(&json) {
            Err(CorpusError::Invalid(report)) => {
                assert_eq!(report.error_count(), 1);
                assert!(report.findings[0]
                    .message
                    .contains("cell references uncoded component"));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_coding_is_one_error() {
        let mut s = small_strategy("Canada");
        s.codings.push(ComponentCoding::new(id("OBJ.ECON_COMP"), 1));
        let r = validate(&Corpus::new(vec![s]));
        assert_eq!(rules(&r), vec![(Severity::Error, Rule::DuplicateCoding)]);
    }

    #[test]
    fn early_year_is_warning() {
        let mut s = small_strategy("Canada");
        s.meta.publication_year = 2016;
        let r = validate(&Corpus::new(vec![s]));
        assert_eq!(rules(&r), vec![(Severity::Warning, Rule::YearOutOfRange)]);
        assert!(!r.has_errors());
    }

    #[test]
    fn zero_prominence_is_warning() {
        let mut s = small_strategy("Canada");
        s.codings.push(ComponentCoding::new(id("FOR.DELPHI"), 0));
        let r = validate(&Corpus::new(vec![s]));
        assert_eq!(rules(&r), vec![(Severity::Warning, Rule::ZeroProminence)]);
    }

    #[test]
    fn every_violation_is_listed() {
        let mut s = small_strategy("Canada");
        s.codings[0].specificity = Some(1); // objective with specificity
        s.codings[1].prominence = 7;
        s.cells.push(AlignmentCell {
            a: id("INS.RESEARCH_FUNDING"),
            b: id("OBJ.ECON_COMP"),
            evidence: AlignmentEvidence {
                lexical_proximity: false,
                explicit_reference: false,
                elaboration: true,
            },
        });
        let dup = small_strategy("Canada");
        let r = validate(&Corpus::new(vec![s, dup]));
        let got = rules(&r);
        for rule in [
            Rule::AttributeKindMismatch,
            Rule::OrdinalOutOfRange,
            Rule::ElaborationWithoutReference,
            Rule::DuplicateCell,
            Rule::DuplicateCountry,
        ] {
            assert!(got.contains(&(Severity::Error, rule)), "missing {rule:?} in {got:?}");
        }
        assert_eq!(r.error_count(), 5);
    }

    #[test]
    fn same_kind_cell_is_rejected() {
        let mut s = small_strategy("Canada");
        s.codings.push(ComponentCoding::new(id("OBJ.SCI_LEAD"), 1));
        s.cells.push(AlignmentCell {
            a: id("OBJ.ECON_COMP"),
            b: id("OBJ.SCI_LEAD"),
            evidence: AlignmentEvidence::NONE,
        });
        let r = validate(&Corpus::new(vec![s]));
        assert_eq!(rules(&r), vec![(Severity::Error, Rule::CellSameKind)]);
    }

    #[test]
    fn parse_error_reports_path() {
        let doc = br#"{"schema_version":"1","strategies":[{"meta":{"country":"X","strategy_title":"t","publication_year":2019,"governance_model":"hybrid","region":"europe"},
            "codings":[{"component":"OBJ.NOPE","prominence":1}]}]}"#;
        match parse_corpus(doc) {
            Err(CorpusError::Parse { path, line, .. }) => {
                assert_eq!(path, "strategies[0].codings[0].component");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_field_is_parse_error() {
        let doc = br#"{"schema_version":"1","strategies":[],"extra":1}"#;
        assert!(matches!(parse_corpus(doc), Err(CorpusError::Parse { .. })));
    }

    #[test]
    fn csv_counts_rows() {
        let c = Corpus::new(vec![small_strategy("Canada")]);
        let out = export_csv(&c);
        assert_eq!(out.codings.lines().count(), 3);
        assert_eq!(out.cells.lines().count(), 2);
        assert!(out.cells.ends_with("Canada,OBJ.ECON_COMP,INS.RESEARCH_FUNDING,true,true,true,3\n"));
    }

    #[test]
    fn csv_empty_corpus_is_header_only() {
        let out = export_csv(&Corpus::default());
        assert_eq!(out.codings.lines().count(), 1);
        assert_eq!(out.cells.lines().count(), 1);
    }

    #[test]
    fn csv_quotes_commas() {
        let mut s = small_strategy("Korea, Republic of");
        s.cells.clear();
        let out = export_csv(&Corpus::new(vec![s]));
        assert!(out.codings.contains("\"Korea, Republic of\",OBJ.ECON_COMP"));
    }

    #[test]
    fn merge_identical_is_identity() {
        let c = Corpus::new(vec![small_strategy("Canada"), small_strategy("France")]);
        assert_eq!(merge_coders(&c, &c, &[]).unwrap(), c);
    }

    #[test]
    fn merge_includes_adjudicated_component() {
        let mut a = small_strategy("Canada");
        a.codings.push(ComponentCoding {
            explicit_method: Some(true),
            ..ComponentCoding::new(id("FOR.DELPHI"), 2)
        });
        let b = small_strategy("Canada");
        let (ca, cb) = (Corpus::new(vec![a.clone()]), Corpus::new(vec![b]));
        let adj = [Adjudication::Component {
            country: "Canada".into(),
            component: id("FOR.DELPHI"),
            include: true,
        }];
        let merged = merge_coders(&ca, &cb, &adj).unwrap();
        assert_eq!(merged.strategies[0].coding(id("FOR.DELPHI")), a.coding(id("FOR.DELPHI")));

        let excluded = merge_coders(
            &ca,
            &cb,
            &[Adjudication::Component {
                country: "Canada".into(),
                component: id("FOR.DELPHI"),
                include: false,
            }],
        )
        .unwrap();
        assert!(!excluded.strategies[0].is_present(id("FOR.DELPHI")));
    }

    #[test]
    fn merge_unresolved_score_names_pair() {
        let a = small_strategy("Canada");
        let mut b = small_strategy("Canada");
        b.cells[0].evidence = AlignmentEvidence::NONE;
        let err = merge_coders(&Corpus::new(vec![a]), &Corpus::new(vec![b]), &[]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("OBJ.ECON_COMP") && msg.contains("INS.RESEARCH_FUNDING"), "{msg}");
        assert!(matches!(err, MergeError::Unresolved(ref d) if d.len() == 1));
    }

    #[test]
    fn merge_cell_resolution_variants() {
        let a = Corpus::new(vec![small_strategy("Canada")]);
        let mut sb = small_strategy("Canada");
        sb.cells[0].evidence = AlignmentEvidence {
            lexical_proximity: true,
            ..AlignmentEvidence::NONE
        };
        let b = Corpus::new(vec![sb]);
        let pair = [id("INS.RESEARCH_FUNDING"), id("OBJ.ECON_COMP")];
        let run = |resolution| {
            let adj = [Adjudication::Cell {
                country: "Canada".into(),
                cell: pair,
                resolution,
            }];
            let m = merge_coders(&a, &b, &adj).unwrap();
            m.strategies[0].score(pair[0], pair[1]).value()
        };
        assert_eq!(run(CellResolution::CoderA), 3);
        assert_eq!(run(CellResolution::CoderB), 2);
        assert_eq!(run(CellResolution::None), 1);
        assert_eq!(run(CellResolution::Evidence(AlignmentEvidence::FULL)), 3);
    }

    #[test]
    fn merge_country_mismatch() {
        let a = Corpus::new(vec![small_strategy("Canada")]);
        let b = Corpus::new(vec![small_strategy("France")]);
        assert!(matches!(
            merge_coders(&a, &b, &[]),
            Err(MergeError::CountrySetMismatch { .. })
        ));
    }

    #[test]
    fn merge_rejects_stray_adjudication() {
        let a = Corpus::new(vec![small_strategy("Canada")]);
        let adj = [Adjudication::Component {
            country: "Canada".into(),
            component: id("FOR.DELPHI"),
            include: true,
        }];
        assert!(matches!(
            merge_coders(&a, &a, &adj),
            Err(MergeError::UnmatchedAdjudication(_))
        ));
    }

    #[test]
    fn adjudication_file_parses() {
        let doc = br#"{"adjudications":[
            {"country":"Canada","component":"FOR.DELPHI","include":true},
            {"country":"Canada","cell":["OBJ.ECON_COMP","INS.TAX"],"resolution":"coder_b"},
            {"country":"Canada","cell":["OBJ.ECON_COMP","INS.SKILLS"],"resolution":{"evidence":{"lexical_proximity":true,"explicit_reference":false,"elaboration":false}}}
        ]}"#;
        let adj = load_adjudications(doc).unwrap();
        assert_eq!(adj.len(), 3);
        assert!(matches!(
            adj[1],
            Adjudication::Cell {
                resolution: CellResolution::CoderB,
                ..
            }
        ));
    }

    #[test]
    fn cross_kind_pair_count() {
        assert_eq!(cross_kind_pairs().count(), 12 * 8 + 12 * 10 + 8 * 10);
    }
}
