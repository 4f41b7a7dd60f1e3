//! Bid matching between supplier capabilities and tender requirements.
//!
//! Suppliers and tenders are described over a shared [`AttributeSpace`] of
//! `m` attributes with up to `p` realizations each. A supplier is a binary
//! [`CapabilityMatrix`]; a tender is a tri-state [`RequirementMatrix`]
//! (`+1` desired, `0` not desired, `-1` unspecified). Matching reduces to
//! per-attribute dot products collected in a [`MatchingVector`], and a
//! supplier bids only when no component is zero.
//!
//! The quantification helpers ([`unspecified_count`], frequency matrices,
//! [`satisfaction_probability`]) characterize a population of suppliers and
//! tenders as a whole.

mod error;
mod matrix;
mod quantify;
mod space;

pub use error::{MatchingError, SpaceError};
pub use matrix::{
    match_vector, validate_requirement_matrix, CapabilityMatrix, MatchingVector,
    RequirementMatrix, RowViolation, ValidationReport,
};
pub use quantify::{
    acceptance_frequency, satisfaction_probability, support_frequency, unspecified_count,
    Satisfaction, SupplierRegistry, TenderSeries,
};
pub use space::{AttributeDef, AttributeSpace};
