//! Document model for partial and complete service descriptions.
//!
//! A [`ServiceDescription`] is a graph of typed node templates whose
//! requirements are bound to capability-providing targets. Descriptions may
//! be partial: requirements left unbound are the blanks a bidder fills in.
//! Catalogs ([`ProviderCatalog`]) list the implementations a provider can
//! substitute for those blanks, together with hourly rates.
//!
//! The [`encode`] module bridges descriptions and catalogs into the
//! requirement/capability matrices of `tenderbroker-matching`; the
//! [`constraint`] module evaluates ad-hoc match expressions; and
//! [`coprocessor`] interprets the structured `gpu.*` tag profile.

mod catalog;
pub mod constraint;
pub mod coprocessor;
mod document;
pub mod encode;
mod error;

pub use catalog::{CatalogError, NodeTypeImplementation, ProviderCatalog, Rate, RateError};
pub use document::{
    parse_description, serialize_description, NodeTemplate, NodeType, OpenRequirement,
    Relationship, RelationshipKind, ServiceDescription, Tags, FORMAT_VERSION,
};
pub use error::{ModelError, SemanticViolation};
