//! Encoding of service descriptions and provider catalogs into the
//! requirement/capability matrices used for bid matching.
//!
//! Each node type a tender leaves open (directly or through transitive
//! requirements of candidate implementations) becomes one attribute; the
//! realizations of an attribute are all implementation names, across every
//! catalog, able to stand in for it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use tenderbroker_matching::{
    AttributeDef, AttributeSpace, CapabilityMatrix, RequirementMatrix, SpaceError,
};

use crate::catalog::ProviderCatalog;
use crate::document::ServiceDescription;
use crate::error::ModelError;

/// Placeholder realization for an attribute no registered catalog can
/// realize. It matches no implementation name, so suppliers score zero on
/// the attribute and correctly fall out of eligibility.
pub const UNREALIZED: &str = "__unrealized__";

/// Document-level tag prefix a tender uses to name the implementations it
/// will accept for an attribute, e.g.
/// `"accepts.mysql_host": "managed_mysql,rds_mysql"`.
pub const ACCEPTS_TAG_PREFIX: &str = "accepts.";

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("node type `{0}` is not an attribute of the space")]
    UnknownAttribute(String),
    #[error("attribute `{attribute}` has no realization named `{name}`")]
    UnknownRealization { attribute: String, name: String },
}

/// Assembles the attribute space for a tender: the union of node types the
/// tender leaves open or pins, closed over the transitive requirements of
/// every catalog implementation that could be drawn in, with realizations
/// collected across all registered catalogs.
pub fn build_attribute_space(
    desc: &ServiceDescription,
    catalogs: &[&ProviderCatalog],
) -> Result<AttributeSpace, EncodeError> {
    let vocabulary = catalog_vocabulary(catalogs);
    let mut queue: VecDeque<String> = VecDeque::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();

    for open in desc.open_requirements(&vocabulary)? {
        if seen.insert(open.requirement.clone()) {
            queue.push_back(open.requirement);
        }
    }
    // Node types pinned by the description to a concrete implementation.
    for template in &desc.templates {
        for catalog in catalogs {
            if let Some(imp) = catalog.implementation(&template.type_name) {
                if seen.insert(imp.implements_type.clone()) {
                    queue.push_back(imp.implements_type.clone());
                }
            }
        }
    }

    let mut attributes: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    while let Some(capability) = queue.pop_front() {
        let realizations = attributes.entry(capability.clone()).or_default();
        for catalog in catalogs {
            for imp in catalog.providers_of(&capability) {
                realizations.insert(imp.name.clone());
                for induced in &imp.induced_requirements {
                    if seen.insert(induced.clone()) {
                        queue.push_back(induced.clone());
                    }
                }
            }
        }
    }

    let defs: Vec<AttributeDef> = attributes
        .into_iter()
        .map(|(name, realizations)| {
            let realizations = if realizations.is_empty() {
                vec![UNREALIZED.to_string()]
            } else {
                realizations.into_iter().collect()
            };
            AttributeDef::new(name, realizations)
        })
        .collect();
    Ok(AttributeSpace::fitted(defs)?)
}

/// Encodes a description as a requirement matrix over the given space.
///
/// Attribute rows are derived per node type:
/// - pinned by a template typed with one of its realizations -> specified
///   row with 1 at each pinned implementation;
/// - listed in an `accepts.<attribute>` document tag -> specified row with
///   1 at each accepted implementation;
/// - otherwise (open or transitively required) -> fully unspecified row.
///
/// `extra_vocabulary` resolves implementation-typed templates, as in
/// [`ServiceDescription::open_requirements`]; plain tenders pass `&[]`.
pub fn encode_tender(
    desc: &ServiceDescription,
    space: &AttributeSpace,
    extra_vocabulary: &[crate::document::NodeType],
) -> Result<RequirementMatrix, EncodeError> {
    let open = desc.open_requirements(extra_vocabulary)?;
    for o in &open {
        if space.attribute_index(&o.requirement).is_none() {
            return Err(EncodeError::UnknownAttribute(o.requirement.clone()));
        }
    }

    let mut rows = Vec::with_capacity(space.m());
    for (i, attr) in space.attributes().iter().enumerate() {
        let mut desired: BTreeSet<usize> = BTreeSet::new();
        for template in &desc.templates {
            if let Some(j) = space.realization_index(i, &template.type_name) {
                desired.insert(j);
            }
        }
        if desired.is_empty() {
            if let Some(accepted) = desc.tags.get(&format!("{ACCEPTS_TAG_PREFIX}{}", attr.name)) {
                for name in accepted.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let j = space.realization_index(i, name).ok_or_else(|| {
                        EncodeError::UnknownRealization {
                            attribute: attr.name.clone(),
                            name: name.to_string(),
                        }
                    })?;
                    desired.insert(j);
                }
            }
        }
        let row = if desired.is_empty() {
            vec![-1i8; space.p()]
        } else {
            let mut row = vec![0i8; space.p()];
            for j in desired {
                row[j] = 1;
            }
            row
        };
        rows.push(row);
    }
    Ok(RequirementMatrix::new(desc.id.clone(), rows).expect("rows are rectangular"))
}

/// Catalog implementations viewed as node types, for resolving templates
/// in completed (bid) documents.
pub fn catalog_vocabulary(catalogs: &[&ProviderCatalog]) -> Vec<crate::document::NodeType> {
    catalogs
        .iter()
        .flat_map(|c| c.implementations.iter().map(|i| i.as_node_type()))
        .collect()
}

/// A catalog rendered as a capability matrix, with the names of any
/// implementations that fell outside the space.
#[derive(Debug, Clone)]
pub struct CatalogEncoding {
    pub matrix: CapabilityMatrix,
    /// Implementations the space does not know; ignored, not an error.
    pub ignored: Vec<String>,
}

/// Encodes a catalog as a capability matrix: entry (i,j) is 1 exactly when
/// the catalog carries the implementation named by realization j of
/// attribute i.
pub fn encode_catalog(catalog: &ProviderCatalog, space: &AttributeSpace) -> CatalogEncoding {
    let mut rows = vec![vec![0u8; space.p()]; space.m()];
    let mut placed: BTreeSet<&str> = BTreeSet::new();
    for (i, _) in space.attributes().iter().enumerate() {
        for imp in &catalog.implementations {
            if let Some(j) = space.realization_index(i, &imp.name) {
                rows[i][j] = 1;
                placed.insert(imp.name.as_str());
            }
        }
    }
    let ignored = catalog
        .implementations
        .iter()
        .filter(|imp| !placed.contains(imp.name.as_str()))
        .map(|imp| imp.name.clone())
        .collect();
    CatalogEncoding {
        matrix: CapabilityMatrix::new(catalog.provider_id.clone(), rows)
            .expect("entries are binary"),
        ignored,
    }
}
