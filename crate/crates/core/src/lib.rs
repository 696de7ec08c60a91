//! Graph-aware attribute-based authorization: policies with path patterns,
//! requests carrying paths, a native pattern matcher and a decision point.

pub mod compiler;
pub mod graph;
pub mod matcher;
pub mod pdp;
pub mod policy;
pub mod request;
pub mod uri;
pub(crate) mod xml;

pub use compiler::{compile_request_path, compile_rule_pattern, emit_cypher, QueryPlan};
pub use graph::{GraphSnapshot, PropertyGraph, PropertyValue};
pub use policy::{parse_policy, Policy};
pub use request::{parse_request, Request};
pub use pdp::{render_response_xml, Decision, Pdp, Response};
