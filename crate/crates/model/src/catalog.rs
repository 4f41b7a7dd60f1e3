use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::document::{NodeType, Tags};

/// Hourly rate held in exact millionths, so sums and card-count multiples
/// never pick up float residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rate(u64);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RateError {
    #[error("rate must be a non-negative finite number")]
    Invalid,
    #[error("rate `{0}` is not a decimal number")]
    Unparsable(String),
}

impl Rate {
    pub const ZERO: Rate = Rate(0);

    pub fn from_micros(micros: u64) -> Self {
        Rate(micros)
    }

    pub fn micros(self) -> u64 {
        self.0
    }

    pub fn checked_add(self, other: Rate) -> Option<Rate> {
        self.0.checked_add(other.0).map(Rate)
    }

    pub fn times(self, count: u64) -> Rate {
        Rate(self.0 * count)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 1e6
    }
}

impl TryFrom<f64> for Rate {
    type Error = RateError;
    fn try_from(v: f64) -> Result<Self, RateError> {
        if !v.is_finite() || v < 0.0 || v > u64::MAX as f64 / 1e6 {
            return Err(RateError::Invalid);
        }
        Ok(Rate((v * 1e6).round() as u64))
    }
}

impl From<Rate> for f64 {
    fn from(r: Rate) -> f64 {
        r.as_f64()
    }
}

impl std::str::FromStr for Rate {
    type Err = RateError;
    fn from_str(s: &str) -> Result<Self, RateError> {
        let v: f64 = s.parse().map_err(|_| RateError::Unparsable(s.to_string()))?;
        Rate::try_from(v)
    }
}

impl std::fmt::Display for Rate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let whole = self.0 / 1_000_000;
        let frac = self.0 % 1_000_000;
        if frac == 0 {
            return write!(f, "{whole}");
        }
        let digits = format!("{frac:06}");
        write!(f, "{whole}.{}", digits.trim_end_matches('0'))
    }
}

/// One concrete way a provider can stand in for a node type: which
/// capabilities it offers, which transitive requirements it drags in, and
/// whether it is a self-contained managed service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTypeImplementation {
    pub name: String,
    #[serde(rename = "implements")]
    pub implements_type: String,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub capabilities: BTreeSet<String>,
    #[serde(default, rename = "induces", skip_serializing_if = "BTreeSet::is_empty")]
    pub induced_requirements: BTreeSet<String>,
    #[serde(default, rename = "managed")]
    pub managed_service: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: Tags,
}

impl NodeTypeImplementation {
    /// The type name it implements counts as a provided capability.
    pub fn satisfies(&self, capability: &str) -> bool {
        self.implements_type == capability || self.capabilities.contains(capability)
    }

    /// View of this implementation as a node type, for resolving templates
    /// in bid documents that are typed directly by implementation names.
    pub fn as_node_type(&self) -> NodeType {
        let mut capabilities = self.capabilities.clone();
        capabilities.insert(self.implements_type.clone());
        NodeType {
            name: self.name.clone(),
            capabilities,
            requirements: self.induced_requirements.clone(),
            tags: self.tags.clone(),
        }
    }
}

/// Everything one provider can offer, with hourly prices per implementation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderCatalog {
    pub format_version: u32,
    pub provider_id: String,
    #[serde(default)]
    pub implementations: Vec<NodeTypeImplementation>,
    /// implementation name -> hourly rate
    #[serde(default, rename = "prices")]
    pub price_table: BTreeMap<String, Rate>,
}

/// Errors from parsing or validating catalog documents.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("document is not valid UTF-8")]
    NotUtf8,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u32),
    #[error("duplicate implementation `{0}`")]
    DuplicateImplementation(String),
    #[error("managed implementation `{0}` must not induce requirements")]
    ManagedWithInducedRequirements(String),
}

impl ProviderCatalog {
    pub fn new(provider_id: impl Into<String>) -> Self {
        Self {
            format_version: crate::document::FORMAT_VERSION,
            provider_id: provider_id.into(),
            implementations: Vec::new(),
            price_table: BTreeMap::new(),
        }
    }

    pub fn implementation(&self, name: &str) -> Option<&NodeTypeImplementation> {
        self.implementations.iter().find(|i| i.name == name)
    }

    /// Implementations able to satisfy `capability`, in name order so that
    /// every consumer enumerates branches identically.
    pub fn providers_of(&self, capability: &str) -> Vec<&NodeTypeImplementation> {
        let mut found: Vec<&NodeTypeImplementation> = self
            .implementations
            .iter()
            .filter(|i| i.satisfies(capability))
            .collect();
        found.sort_by(|a, b| a.name.cmp(&b.name));
        found
    }

    pub fn price(&self, implementation: &str) -> Option<Rate> {
        self.price_table.get(implementation).copied()
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let mut names = std::collections::HashSet::new();
        for imp in &self.implementations {
            if !names.insert(imp.name.as_str()) {
                return Err(CatalogError::DuplicateImplementation(imp.name.clone()));
            }
            if imp.managed_service && !imp.induced_requirements.is_empty() {
                return Err(CatalogError::ManagedWithInducedRequirements(
                    imp.name.clone(),
                ));
            }
        }
        Ok(())
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, CatalogError> {
        let text = std::str::from_utf8(bytes).map_err(|_| CatalogError::NotUtf8)?;
        let catalog: ProviderCatalog =
            serde_json::from_str(text).map_err(|e| CatalogError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        if catalog.format_version != crate::document::FORMAT_VERSION {
            return Err(CatalogError::UnsupportedVersion(catalog.format_version));
        }
        catalog.validate()?;
        Ok(catalog)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_arithmetic_is_exact() {
        let a: Rate = "0.10".parse().unwrap();
        let b: Rate = "0.25".parse().unwrap();
        let sum = a.checked_add(b).unwrap();
        assert_eq!(sum, "0.35".parse().unwrap());
        assert_eq!(sum.to_string(), "0.35");
        assert_eq!(Rate::ZERO.to_string(), "0");
        assert_eq!("0.50".parse::<Rate>().unwrap().times(2).to_string(), "1");
    }

    #[test]
    fn rate_rejects_negatives() {
        assert!(Rate::try_from(-0.5).is_err());
        assert!(serde_json::from_str::<Rate>("-1.0").is_err());
    }

    #[test]
    fn rate_round_trips_through_json() {
        for text in ["0.1", "0.35", "12.345678", "0"] {
            let rate: Rate = serde_json::from_str(text).unwrap();
            let back: Rate = serde_json::from_str(&serde_json::to_string(&rate).unwrap()).unwrap();
            assert_eq!(rate, back);
        }
    }

    #[test]
    fn implements_type_counts_as_capability() {
        let imp = NodeTypeImplementation {
            name: "vm_small".into(),
            implements_type: "virtual_machine".into(),
            capabilities: BTreeSet::new(),
            induced_requirements: BTreeSet::new(),
            managed_service: false,
            tags: Tags::new(),
        };
        assert!(imp.satisfies("virtual_machine"));
        assert!(!imp.satisfies("web_server"));
        assert!(imp.as_node_type().capabilities.contains("virtual_machine"));
    }

    #[test]
    fn managed_service_must_be_self_contained() {
        let mut catalog = ProviderCatalog::new("p");
        catalog.implementations.push(NodeTypeImplementation {
            name: "managed_db".into(),
            implements_type: "mysql_host".into(),
            capabilities: BTreeSet::new(),
            induced_requirements: ["virtual_machine".to_string()].into(),
            managed_service: true,
            tags: Tags::new(),
        });
        assert!(matches!(
            catalog.validate(),
            Err(CatalogError::ManagedWithInducedRequirements(_))
        ));
    }
}
