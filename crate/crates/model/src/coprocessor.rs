//! Structured coprocessor constraints carried in `gpu.*` tags.
//!
//! Tender-side tags describe what acceleration a node wants:
//!
//! ```text
//! gpu.support          required | optional | none
//! gpu.cudaSupport      true            (shorthand for gpu.api = CUDA)
//! gpu.api              <api name>
//! gpu.minCudaVersion   3.0
//! gpu.minNumCores      448
//! gpu.maxNumCores      5000
//! gpu.multiCardSupport true
//! ```
//!
//! Offering-side tags describe what an implementation actually attaches:
//! `gpu.api`, `gpu.apiVersion`, `gpu.coresPerCard`, `gpu.cards`. Other
//! coprocessor families (MIC, FPGA) have no built-in schema here; their
//! tags pass through untouched.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::document::Tags;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagError {
    #[error("tag `{tag}` has invalid value `{value}`: {reason}")]
    Invalid {
        tag: String,
        value: String,
        reason: String,
    },
    #[error("gpu.minNumCores {min} exceeds gpu.maxNumCores {max}")]
    CoreBoundsInverted { min: u64, max: u64 },
}

/// Dotted numeric version, compared component-wise with implicit zero
/// padding ("3" == "3.0", "3.10" > "3.9").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiVersion(Vec<u32>);

impl ApiVersion {
    pub fn components(&self) -> &[u32] {
        &self.0
    }
}

impl std::str::FromStr for ApiVersion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.is_empty() {
            return Err("empty version".into());
        }
        let parts: Result<Vec<u32>, _> = s.split('.').map(|p| p.parse::<u32>()).collect();
        parts
            .map(ApiVersion)
            .map_err(|_| format!("`{s}` is not a dotted numeric version"))
    }
}

impl std::fmt::Display for ApiVersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl Ord for ApiVersion {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let len = self.0.len().max(other.0.len());
        for i in 0..len {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for ApiVersion {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GpuSupport {
    Required,
    Optional,
    None,
}

/// A node's acceleration profile, parsed from its tender-side tags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoprocessorConstraint {
    pub support: GpuSupport,
    /// Accepted API; `None` accepts any accelerator API.
    pub api: Option<String>,
    pub min_api_version: Option<ApiVersion>,
    pub min_cores: Option<u64>,
    pub max_cores: Option<u64>,
    pub multi_card_allowed: bool,
}

impl CoprocessorConstraint {
    /// Extracts the constraint from a tag map. Returns `Ok(None)` when the
    /// node declares no `gpu.support`, i.e. carries no acceleration
    /// profile at all.
    pub fn from_tags(tags: &Tags) -> Result<Option<Self>, TagError> {
        let Some(support_text) = tags.get("gpu.support") else {
            return Ok(None);
        };
        let support = match support_text.as_str() {
            "required" => GpuSupport::Required,
            "optional" => GpuSupport::Optional,
            "none" => GpuSupport::None,
            other => {
                return Err(TagError::Invalid {
                    tag: "gpu.support".into(),
                    value: other.into(),
                    reason: "expected required, optional, or none".into(),
                })
            }
        };
        let api = if tags.get("gpu.cudaSupport").map(String::as_str) == Some("true") {
            Some("CUDA".to_string())
        } else {
            tags.get("gpu.api").cloned()
        };
        let min_api_version = tags
            .get("gpu.minCudaVersion")
            .map(|v| parse_version("gpu.minCudaVersion", v))
            .transpose()?;
        let min_cores = tags
            .get("gpu.minNumCores")
            .map(|v| parse_u64("gpu.minNumCores", v))
            .transpose()?;
        let max_cores = tags
            .get("gpu.maxNumCores")
            .map(|v| parse_u64("gpu.maxNumCores", v))
            .transpose()?;
        if let (Some(min), Some(max)) = (min_cores, max_cores) {
            if min > max {
                return Err(TagError::CoreBoundsInverted { min, max });
            }
        }
        let multi_card_allowed =
            tags.get("gpu.multiCardSupport").map(String::as_str) == Some("true");
        Ok(Some(Self {
            support,
            api,
            min_api_version,
            min_cores,
            max_cores,
            multi_card_allowed,
        }))
    }
}

/// An accelerator actually on offer, parsed from implementation tags.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceleratorFacts {
    pub api: String,
    pub api_version: Option<ApiVersion>,
    pub cores_per_card: Option<u64>,
    pub cards: u64,
}

impl AcceleratorFacts {
    /// Returns `Ok(None)` when the tags advertise no accelerator.
    pub fn from_tags(tags: &Tags) -> Result<Option<Self>, TagError> {
        let Some(api) = tags.get("gpu.api") else {
            return Ok(None);
        };
        let api_version = tags
            .get("gpu.apiVersion")
            .map(|v| parse_version("gpu.apiVersion", v))
            .transpose()?;
        let cores_per_card = tags
            .get("gpu.coresPerCard")
            .map(|v| parse_u64("gpu.coresPerCard", v))
            .transpose()?;
        let cards = tags
            .get("gpu.cards")
            .map(|v| parse_u64("gpu.cards", v))
            .transpose()?
            .unwrap_or(1);
        Ok(Some(Self {
            api: api.clone(),
            api_version,
            cores_per_card,
            cards,
        }))
    }
}

fn parse_version(tag: &str, value: &str) -> Result<ApiVersion, TagError> {
    value.parse().map_err(|reason| TagError::Invalid {
        tag: tag.to_string(),
        value: value.to_string(),
        reason,
    })
}

fn parse_u64(tag: &str, value: &str) -> Result<u64, TagError> {
    value.parse().map_err(|_| TagError::Invalid {
        tag: tag.to_string(),
        value: value.to_string(),
        reason: "expected a non-negative integer".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintOutcome {
    /// Accelerator offered and satisfying the profile.
    Match,
    /// The node runs fine without an accelerator and none (or none
    /// suitable) is offered.
    MatchWithoutAccelerator,
    NoMatch,
}

/// Evaluates a node's acceleration profile against an offering's fact tags.
///
/// Core counts aggregate across cards only when the profile allows
/// multi-card configurations; otherwise a single card must carry the
/// required cores on its own.
pub fn eval_coprocessor_constraint(
    constraint: &CoprocessorConstraint,
    facts: &Tags,
) -> Result<ConstraintOutcome, TagError> {
    let offered = AcceleratorFacts::from_tags(facts)?;
    let accelerator_fits = match &offered {
        None => false,
        Some(acc) => accelerator_satisfies(constraint, acc),
    };
    Ok(match (accelerator_fits, constraint.support) {
        (_, GpuSupport::None) => ConstraintOutcome::MatchWithoutAccelerator,
        (true, _) => ConstraintOutcome::Match,
        (false, GpuSupport::Optional) => ConstraintOutcome::MatchWithoutAccelerator,
        (false, GpuSupport::Required) => ConstraintOutcome::NoMatch,
    })
}

fn accelerator_satisfies(constraint: &CoprocessorConstraint, acc: &AcceleratorFacts) -> bool {
    if let Some(api) = &constraint.api {
        if api != &acc.api {
            return false;
        }
    }
    if let Some(min_version) = &constraint.min_api_version {
        match &acc.api_version {
            Some(v) if v >= min_version => {}
            _ => return false,
        }
    }
    if constraint.min_cores.is_some() || constraint.max_cores.is_some() {
        let Some(per_card) = acc.cores_per_card else {
            return false;
        };
        let effective = if constraint.multi_card_allowed {
            per_card * acc.cards
        } else {
            per_card
        };
        if let Some(min) = constraint.min_cores {
            if effective < min {
                return false;
            }
        }
        if let Some(max) = constraint.max_cores {
            if effective > max {
                return false;
            }
        }
    }
    true
}
