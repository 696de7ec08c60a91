//! Policy data model, XML parsing and serialization, and validation.

mod model;
mod parse;
mod serialize;
mod validate;

pub use model::*;
pub use parse::{parse_policy, parse_policy_with_warnings};
pub use serialize::policy_to_xml;
pub use validate::{is_supported_combining_algorithm, validate_policy, Violation, ViolationKind};

/// Non-fatal parse finding, such as an ignored attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolicyError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("{path} (line {line}): {reason}")]
    Schema {
        path: String,
        line: u32,
        reason: String,
    },
    #[error("policy violates {} invariant(s): {}", .0.len(), join(.0))]
    Invariant(Vec<Violation>),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
