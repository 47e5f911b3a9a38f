//! Strategic-alignment analytics over coded corpora of national AI strategies.
//!
//! A corpus records, for each strategy, which strategic objectives, foresight
//! methods and implementation instruments it contains and how strongly each
//! cross-kind pair is linked in the text. From that the crate derives:
//!
//! - alignment matrices and coherence indices per strategy ([`alignment`]),
//! - inter-coder agreement and consensus merging ([`reliability`], [`corpus`]),
//! - component networks with centrality and community structure ([`network`]),
//! - cross-strategy prevalence, group profiles, trends and correlations
//!   ([`analytics`]),
//! - deterministic SVG figures and graph exports ([`render`]).
//!
//! ```
//! use coherence_atlas::corpus::{CodedStrategy, ComponentCoding, StrategyMeta, Region};
//! use coherence_atlas::taxonomy::{parse_component, GovernanceModel};
//! use coherence_atlas::alignment::objective_coverage_index;
//!
//! let mut s = CodedStrategy::new(StrategyMeta {
//!     country: "Atlantis".into(),
//!     strategy_title: "National AI Plan".into(),
//!     publication_year: 2019,
//!     governance_model: GovernanceModel::Hybrid,
//!     region: Region::Europe,
//! });
//! let econ = parse_component("OBJ.ECON_COMP").unwrap();
//! s.codings.push(ComponentCoding::new(econ, 3));
//! assert_eq!(objective_coverage_index(&s), 1.0 / 12.0);
//! ```

pub mod alignment;
pub mod analytics;
pub mod cli;
pub mod corpus;
pub mod network;
pub mod reliability;
pub mod render;
pub mod taxonomy;
