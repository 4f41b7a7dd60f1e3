use thiserror::Error;

/// Errors from parsing or validating service documents.
#[derive(Debug, Error)]
pub enum ModelError {
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
    #[error("invalid document: {}", format_violations(.0))]
    Semantic(Vec<SemanticViolation>),
    #[error("template `{template}` has unresolvable type `{type_name}`")]
    UnresolvableType { template: String, type_name: String },
}

fn format_violations(violations: &[SemanticViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A structural rule breach inside an otherwise well-formed document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticViolation {
    #[error("duplicate template id `{0}`")]
    DuplicateTemplateId(String),
    #[error("duplicate node type `{0}`")]
    DuplicateNodeType(String),
    #[error("relationship references unknown node `{0}`")]
    DanglingRelationshipEnd(String),
    #[error("template `{template}` binds requirement `{requirement}` to unknown node `{target}`")]
    DanglingRequirementTarget {
        template: String,
        requirement: String,
        target: String,
    },
    #[error("hosted_on relationships form a cycle through `{0}`")]
    HostedOnCycle(String),
}
