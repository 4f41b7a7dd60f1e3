use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, SemanticViolation};

/// Arbitrary name/value annotations. Only the `gpu.*` keys carry built-in
/// semantics; everything else is opaque pass-through.
pub type Tags = BTreeMap<String, String>;

/// The document format version this build reads and writes.
pub const FORMAT_VERSION: u32 = 1;

/// A reusable component contract: the capabilities a node of this type
/// offers and the requirements it must have bound before it can run.
/// Capability and requirement names share one vocabulary, so a requirement
/// `web_server` is met by any node whose type lists `web_server` among its
/// capabilities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeType {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub capabilities: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub requirements: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: Tags,
}

/// One node in a topology: an instance of a node type, optionally grouped
/// into a tier, with zero or more of its requirements bound to other nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTemplate {
    pub id: String,
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tier: Option<String>,
    /// requirement name -> id of the node satisfying it; unbound
    /// requirements are simply absent.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub requirements: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: Tags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationshipKind {
    HostedOn,
    DependsOn,
    ConnectsTo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relationship {
    pub source: String,
    pub target: String,
    pub kind: RelationshipKind,
}

/// A service topology, partial or complete. The `node_types` section is the
/// document's own vocabulary; templates may additionally be typed by
/// catalog implementation names once a bidder has filled in the blanks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceDescription {
    pub format_version: u32,
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub node_types: Vec<NodeType>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub templates: Vec<NodeTemplate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relationships: Vec<Relationship>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: Tags,
}

/// A requirement with no bound, capability-providing target yet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpenRequirement {
    pub node_id: String,
    pub requirement: String,
}

impl ServiceDescription {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            id: id.into(),
            node_types: Vec::new(),
            templates: Vec::new(),
            relationships: Vec::new(),
            tags: Tags::new(),
        }
    }

    pub fn template(&self, id: &str) -> Option<&NodeTemplate> {
        self.templates.iter().find(|t| t.id == id)
    }

    pub fn node_type(&self, name: &str) -> Option<&NodeType> {
        self.node_types.iter().find(|t| t.name == name)
    }

    /// Structural checks: unique ids, resolvable references, and an acyclic
    /// hosted_on subgraph. Type resolution is deliberately not checked here
    /// because bid documents are typed against catalog vocabularies that
    /// only exist at evaluation time.
    pub fn validate(&self) -> Result<(), ModelError> {
        let mut violations = Vec::new();

        let mut ids = HashSet::new();
        for t in &self.templates {
            if !ids.insert(t.id.as_str()) {
                violations.push(SemanticViolation::DuplicateTemplateId(t.id.clone()));
            }
        }
        let mut names = HashSet::new();
        for nt in &self.node_types {
            if !names.insert(nt.name.as_str()) {
                violations.push(SemanticViolation::DuplicateNodeType(nt.name.clone()));
            }
        }

        for r in &self.relationships {
            for end in [&r.source, &r.target] {
                if !ids.contains(end.as_str()) {
                    violations.push(SemanticViolation::DanglingRelationshipEnd(end.clone()));
                }
            }
        }
        for t in &self.templates {
            for (req, target) in &t.requirements {
                if !ids.contains(target.as_str()) {
                    violations.push(SemanticViolation::DanglingRequirementTarget {
                        template: t.id.clone(),
                        requirement: req.clone(),
                        target: target.clone(),
                    });
                }
            }
        }

        if violations.is_empty() {
            if let Some(node) = self.find_hosted_on_cycle() {
                violations.push(SemanticViolation::HostedOnCycle(node));
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Semantic(violations))
        }
    }

    /// Returns a node on a hosted_on cycle, if one exists.
    fn find_hosted_on_cycle(&self) -> Option<String> {
        let mut edges: HashMap<&str, Vec<&str>> = HashMap::new();
        for r in &self.relationships {
            if r.kind == RelationshipKind::HostedOn {
                edges.entry(&r.source).or_default().push(&r.target);
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: HashMap<&str, u8> = HashMap::new();
        fn visit<'a>(
            node: &'a str,
            edges: &HashMap<&'a str, Vec<&'a str>>,
            state: &mut HashMap<&'a str, u8>,
        ) -> Option<String> {
            match state.get(node) {
                Some(1) => return Some(node.to_string()),
                Some(2) => return None,
                _ => {}
            }
            state.insert(node, 1);
            if let Some(next) = edges.get(node) {
                for n in next {
                    if let Some(cycle) = visit(n, edges, state) {
                        return Some(cycle);
                    }
                }
            }
            state.insert(node, 2);
            None
        }
        let sources: Vec<&str> = edges.keys().copied().collect();
        for s in sources {
            if let Some(cycle) = visit(s, &edges, &mut state) {
                return Some(cycle);
            }
        }
        None
    }

    /// Every (node, requirement) pair lacking a bound target that provides
    /// the corresponding capability. The description is complete exactly
    /// when this list is empty.
    ///
    /// `extra_vocabulary` augments the document's own node types; pass
    /// catalog implementations (converted via
    /// [`crate::NodeTypeImplementation::as_node_type`]) when checking bids.
    pub fn open_requirements(
        &self,
        extra_vocabulary: &[NodeType],
    ) -> Result<Vec<OpenRequirement>, ModelError> {
        let mut vocab: HashMap<&str, &NodeType> = HashMap::new();
        for nt in extra_vocabulary {
            vocab.insert(nt.name.as_str(), nt);
        }
        // The document's own declarations win on name clashes.
        for nt in &self.node_types {
            vocab.insert(nt.name.as_str(), nt);
        }

        let mut open = Vec::new();
        for t in &self.templates {
            let ty = vocab
                .get(t.type_name.as_str())
                .ok_or_else(|| ModelError::UnresolvableType {
                    template: t.id.clone(),
                    type_name: t.type_name.clone(),
                })?;
            for req in &ty.requirements {
                let satisfied = t
                    .requirements
                    .get(req)
                    .and_then(|target| self.template(target))
                    .and_then(|target| vocab.get(target.type_name.as_str()))
                    .is_some_and(|target_ty| target_ty.capabilities.contains(req));
                if !satisfied {
                    open.push(OpenRequirement {
                        node_id: t.id.clone(),
                        requirement: req.clone(),
                    });
                }
            }
        }
        Ok(open)
    }

    /// True when no requirement is left open under the given vocabulary.
    pub fn is_complete(&self, extra_vocabulary: &[NodeType]) -> Result<bool, ModelError> {
        Ok(self.open_requirements(extra_vocabulary)?.is_empty())
    }
}

/// Parses and structurally validates a description document.
pub fn parse_description(bytes: &[u8]) -> Result<ServiceDescription, ModelError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ModelError::NotUtf8)?;
    let desc: ServiceDescription =
        serde_json::from_str(text).map_err(|e| ModelError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    if desc.format_version != FORMAT_VERSION {
        return Err(ModelError::UnsupportedVersion(desc.format_version));
    }
    desc.validate()?;
    Ok(desc)
}

/// Serializes a description deterministically (two calls yield identical
/// bytes) such that `parse(serialize(d))` structurally equals `d`.
pub fn serialize_description(desc: &ServiceDescription) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(desc).expect("description serialization");
    bytes.push(b'\n');
    bytes
}
