//! The closed coding catalogs: strategic objectives, foresight methods and
//! implementation instruments, plus their category groupings.
//!
//! Components are identified by a short canonical code of the form
//! `KIND.NAME` (for example `OBJ.ECON_COMP` or `INS.RESEARCH_FUNDING`).
//! The catalog order defined here is the canonical row/column order used by
//! every matrix, table and export in the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The three component kinds a strategy is coded for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Objective,
    Foresight,
    Instrument,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 3] = [
        ComponentKind::Objective,
        ComponentKind::Foresight,
        ComponentKind::Instrument,
    ];

    /// Code prefix used in canonical component codes.
    pub fn prefix(self) -> &'static str {
        match self {
            ComponentKind::Objective => "OBJ",
            ComponentKind::Foresight => "FOR",
            ComponentKind::Instrument => "INS",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Objective => "objective",
            ComponentKind::Foresight => "foresight",
            ComponentKind::Instrument => "instrument",
        }
    }

    /// Number of components of this kind in the catalog.
    pub fn catalog_len(self) -> usize {
        catalog(self).len()
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentKind {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "objective" | "objectives" | "obj" => Ok(ComponentKind::Objective),
            "foresight" | "for" => Ok(ComponentKind::Foresight),
            "instrument" | "instruments" | "ins" => Ok(ComponentKind::Instrument),
            _ => Err(CatalogError::UnknownKind(s.to_string())),
        }
    }
}

/// Category groupings within each kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentCategory {
    EconomicTransformation,
    SocietalApplications,
    GovernanceFrameworks,
    GlobalPositioning,
    ExpertBased,
    ScenarioBased,
    DataDriven,
    Participatory,
    Funding,
    Regulatory,
    CapacityBuilding,
    Coordination,
}

impl ComponentCategory {
    pub fn kind(self) -> ComponentKind {
        use ComponentCategory::*;
        match self {
            EconomicTransformation | SocietalApplications | GovernanceFrameworks
            | GlobalPositioning => ComponentKind::Objective,
            ExpertBased | ScenarioBased | DataDriven | Participatory => ComponentKind::Foresight,
            Funding | Regulatory | CapacityBuilding | Coordination => ComponentKind::Instrument,
        }
    }

    /// The four categories of `kind`, in canonical order.
    pub fn of_kind(kind: ComponentKind) -> [ComponentCategory; 4] {
        use ComponentCategory::*;
        match kind {
            ComponentKind::Objective => [
                EconomicTransformation,
                SocietalApplications,
                GovernanceFrameworks,
                GlobalPositioning,
            ],
            ComponentKind::Foresight => [ExpertBased, ScenarioBased, DataDriven, Participatory],
            ComponentKind::Instrument => [Funding, Regulatory, CapacityBuilding, Coordination],
        }
    }
}

/// Governance model classification of a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GovernanceModel {
    MarketLed,
    StateDirected,
    RightsBased,
    RiskFocused,
    Hybrid,
}

impl GovernanceModel {
    pub const ALL: [GovernanceModel; 5] = [
        GovernanceModel::MarketLed,
        GovernanceModel::StateDirected,
        GovernanceModel::RightsBased,
        GovernanceModel::RiskFocused,
        GovernanceModel::Hybrid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GovernanceModel::MarketLed => "market_led",
            GovernanceModel::StateDirected => "state_directed",
            GovernanceModel::RightsBased => "rights_based",
            GovernanceModel::RiskFocused => "risk_focused",
            GovernanceModel::Hybrid => "hybrid",
        }
    }
}

struct Descriptor {
    code: &'static str,
    name: &'static str,
    kind: ComponentKind,
    category: ComponentCategory,
}

const fn d(
    code: &'static str,
    name: &'static str,
    kind: ComponentKind,
    category: ComponentCategory,
) -> Descriptor {
    Descriptor {
        code,
        name,
        kind,
        category,
    }
}

use ComponentCategory as C;
use ComponentKind as K;

// Objectives, foresight methods, instruments; each block in canonical order.
static CATALOG: [Descriptor; 30] = [
    d("OBJ.ECON_COMP", "economic competitiveness", K::Objective, C::EconomicTransformation),
    d("OBJ.SCI_LEAD", "scientific leadership", K::Objective, C::EconomicTransformation),
    d("OBJ.INDUSTRY_DIGITAL", "industrial digitalization", K::Objective, C::EconomicTransformation),
    d("OBJ.PUBLIC_SECTOR", "public sector transformation", K::Objective, C::SocietalApplications),
    d("OBJ.WORKFORCE", "workforce development", K::Objective, C::SocietalApplications),
    d("OBJ.SOCIAL_WELFARE", "social welfare enhancement", K::Objective, C::SocietalApplications),
    d("OBJ.ETHICS", "ethical/responsible AI", K::Objective, C::GovernanceFrameworks),
    d("OBJ.REGULATORY", "regulatory framework development", K::Objective, C::GovernanceFrameworks),
    d("OBJ.DATA_ECOSYSTEM", "data ecosystem development", K::Objective, C::GovernanceFrameworks),
    d("OBJ.INTL_COLLAB", "international collaboration", K::Objective, C::GlobalPositioning),
    d("OBJ.SECURITY", "national security", K::Objective, C::GlobalPositioning),
    d("OBJ.ENVIRONMENT", "environmental sustainability", K::Objective, C::SocietalApplications),
    d("FOR.HORIZON", "horizon scanning", K::Foresight, C::DataDriven),
    d("FOR.SCENARIO", "scenario development", K::Foresight, C::ScenarioBased),
    d("FOR.DELPHI", "Delphi studies", K::Foresight, C::ExpertBased),
    d("FOR.EXPERT_PANEL", "expert panels", K::Foresight, C::ExpertBased),
    d("FOR.ROADMAP", "technology roadmapping", K::Foresight, C::Participatory),
    d("FOR.TREND", "trend extrapolation", K::Foresight, C::DataDriven),
    d("FOR.WORKSHOP", "participatory workshops", K::Foresight, C::Participatory),
    d("FOR.CROSS_IMPACT", "cross-impact analysis", K::Foresight, C::ScenarioBased),
    d("INS.RESEARCH_FUNDING", "research funding", K::Instrument, C::Funding),
    d("INS.SKILLS", "skills development programs", K::Instrument, C::CapacityBuilding),
    d("INS.REGULATORY", "regulatory frameworks", K::Instrument, C::Regulatory),
    d("INS.INSTITUTIONS", "institutional creation", K::Instrument, C::CapacityBuilding),
    d("INS.PROCUREMENT", "public procurement / direct investment", K::Instrument, C::Funding),
    d("INS.TAX", "tax incentives", K::Instrument, C::Funding),
    d("INS.STANDARDS", "standardization initiatives", K::Instrument, C::Regulatory),
    d("INS.DEMONSTRATION", "demonstration projects", K::Instrument, C::CapacityBuilding),
    d("INS.NETWORKING", "networking/coordination mechanisms", K::Instrument, C::Coordination),
    d("INS.INTL_AGREEMENTS", "international agreements", K::Instrument, C::Coordination),
];

const OBJECTIVE_RANGE: std::ops::Range<u8> = 0..12;
const FORESIGHT_RANGE: std::ops::Range<u8> = 12..20;
const INSTRUMENT_RANGE: std::ops::Range<u8> = 20..30;

/// Handle to one catalog component.
///
/// Ordering follows the canonical catalog order (objectives, then foresight
/// methods, then instruments).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentId(u8);

impl ComponentId {
    /// Every component in canonical order.
    pub fn all() -> impl Iterator<Item = ComponentId> {
        (0..CATALOG.len() as u8).map(ComponentId)
    }

    fn descriptor(self) -> &'static Descriptor {
        &CATALOG[self.0 as usize]
    }

    pub fn kind(self) -> ComponentKind {
        self.descriptor().kind
    }

    pub fn code(self) -> &'static str {
        self.descriptor().code
    }

    pub fn display_name(self) -> &'static str {
        self.descriptor().name
    }

    pub fn category(self) -> ComponentCategory {
        self.descriptor().category
    }

    /// Position of the component within its kind's catalog.
    pub fn position(self) -> usize {
        let start = match self.kind() {
            ComponentKind::Objective => OBJECTIVE_RANGE.start,
            ComponentKind::Foresight => FORESIGHT_RANGE.start,
            ComponentKind::Instrument => INSTRUMENT_RANGE.start,
        };
        (self.0 - start) as usize
    }

    /// Position in the full 30-component catalog.
    pub fn global_index(self) -> usize {
        self.0 as usize
    }

    pub fn from_global_index(index: usize) -> Option<ComponentId> {
        (index < CATALOG.len()).then_some(ComponentId(index as u8))
    }

    /// The `position`-th component of `kind`.
    pub fn nth(kind: ComponentKind, position: usize) -> Option<ComponentId> {
        catalog(kind).get(position).copied()
    }
}

impl fmt::Debug for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ComponentId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_component(s)
    }
}

impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for ComponentId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_component(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown component code `{code}` (nearest match: `{nearest}`)")]
    UnknownCode { code: String, nearest: &'static str },
    #[error("unknown component kind `{0}` (expected objective, foresight or instrument)")]
    UnknownKind(String),
}

static OBJECTIVES: [ComponentId; 12] = ids::<12>(OBJECTIVE_RANGE.start);
static FORESIGHT: [ComponentId; 8] = ids::<8>(FORESIGHT_RANGE.start);
static INSTRUMENTS: [ComponentId; 10] = ids::<10>(INSTRUMENT_RANGE.start);

const fn ids<const N: usize>(start: u8) -> [ComponentId; N] {
    let mut out = [ComponentId(0); N];
    let mut i = 0;
    while i < N {
        out[i] = ComponentId(start + i as u8);
        i += 1;
    }
    out
}

/// The fixed catalog for `kind`, in canonical order.
pub fn catalog(kind: ComponentKind) -> &'static [ComponentId] {
    match kind {
        ComponentKind::Objective => &OBJECTIVES,
        ComponentKind::Foresight => &FORESIGHT,
        ComponentKind::Instrument => &INSTRUMENTS,
    }
}

pub fn category_of(component: ComponentId) -> ComponentCategory {
    component.category()
}

/// Resolve a canonical code, ignoring ASCII case and surrounding whitespace.
pub fn parse_component(code: &str) -> Result<ComponentId, CatalogError> {
    let wanted = code.trim().to_ascii_uppercase();
    if let Some(id) = ComponentId::all().find(|c| c.code() == wanted) {
        return Ok(id);
    }
    let nearest = ComponentId::all()
        .min_by_key(|c| strsim::levenshtein(c.code(), &wanted))
        .map(ComponentId::code)
        .unwrap_or("");
    Err(CatalogError::UnknownCode {
        code: code.to_string(),
        nearest,
    })
}

/// Versioned JSON document describing the full taxonomy.
#[derive(Debug, Clone, Serialize)]
pub struct TaxonomyDump {
    pub schema_version: &'static str,
    pub kinds: Vec<KindDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KindDump {
    pub kind: ComponentKind,
    pub categories: Vec<ComponentCategory>,
    pub components: Vec<ComponentDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentDump {
    pub code: &'static str,
    pub display_name: &'static str,
    pub category: ComponentCategory,
}

pub fn dump() -> TaxonomyDump {
    TaxonomyDump {
        schema_version: "1",
        kinds: ComponentKind::ALL
            .iter()
            .map(|&kind| KindDump {
                kind,
                categories: ComponentCategory::of_kind(kind).to_vec(),
                components: catalog(kind)
                    .iter()
                    .map(|c| ComponentDump {
                        code: c.code(),
                        display_name: c.display_name(),
                        category: c.category(),
                    })
                    .collect(),
            })
            .collect(),
    }
}
