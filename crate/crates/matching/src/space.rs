use serde::{Deserialize, Serialize};

use crate::error::SpaceError;

/// One attribute and its named realizations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDef {
    pub name: String,
    pub realizations: Vec<String>,
}

impl AttributeDef {
    pub fn new(name: impl Into<String>, realizations: Vec<String>) -> Self {
        Self {
            name: name.into(),
            realizations,
        }
    }
}

/// The universe of `m` attributes, each with at most `p` realizations.
///
/// Attributes with fewer than `p` realizations occupy full matrix rows;
/// the trailing positions are padding that no supplier supports and no
/// tender desires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDoc", into = "SpaceDoc")]
pub struct AttributeSpace {
    attributes: Vec<AttributeDef>,
    p: usize,
}

impl AttributeSpace {
    pub fn new(attributes: Vec<AttributeDef>, p: usize) -> Result<Self, SpaceError> {
        if attributes.is_empty() {
            return Err(SpaceError::NoAttributes);
        }
        if p == 0 {
            return Err(SpaceError::ZeroWidth);
        }
        let mut seen = std::collections::HashSet::new();
        for attr in &attributes {
            if !seen.insert(attr.name.as_str()) {
                return Err(SpaceError::DuplicateAttribute(attr.name.clone()));
            }
            if attr.realizations.is_empty() {
                return Err(SpaceError::EmptyAttribute {
                    attribute: attr.name.clone(),
                });
            }
            if attr.realizations.len() > p {
                return Err(SpaceError::TooManyRealizations {
                    attribute: attr.name.clone(),
                    count: attr.realizations.len(),
                    p,
                });
            }
            let mut reals = std::collections::HashSet::new();
            for r in &attr.realizations {
                if !reals.insert(r.as_str()) {
                    return Err(SpaceError::DuplicateRealization {
                        attribute: attr.name.clone(),
                        realization: r.clone(),
                    });
                }
            }
        }
        Ok(Self { attributes, p })
    }

    /// Builds a space whose width is the widest attribute.
    pub fn fitted(attributes: Vec<AttributeDef>) -> Result<Self, SpaceError> {
        let p = attributes
            .iter()
            .map(|a| a.realizations.len())
            .max()
            .unwrap_or(0);
        Self::new(attributes, p.max(1))
    }

    pub fn m(&self) -> usize {
        self.attributes.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn attributes(&self) -> &[AttributeDef] {
        &self.attributes
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Number of real (non-padding) realizations of attribute `i`.
    pub fn realization_count(&self, i: usize) -> usize {
        self.attributes[i].realizations.len()
    }

    pub fn realization_index(&self, attribute: usize, name: &str) -> Option<usize> {
        self.attributes[attribute]
            .realizations
            .iter()
            .position(|r| r == name)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    p: usize,
    attributes: Vec<AttributeDef>,
}

impl TryFrom<SpaceDoc> for AttributeSpace {
    type Error = SpaceError;
    fn try_from(doc: SpaceDoc) -> Result<Self, SpaceError> {
        AttributeSpace::new(doc.attributes, doc.p)
    }
}

impl From<AttributeSpace> for SpaceDoc {
    fn from(space: AttributeSpace) -> Self {
        SpaceDoc {
            p: space.p,
            attributes: space.attributes,
        }
    }
}
