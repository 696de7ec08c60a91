//! Native evaluation of query plans over a property graph: trail search,
//! filter evaluation and the rule/request intersection check.
//!
//! Matches follow Cypher path semantics: an edge occurs at most once per
//! match, vertices may repeat.

mod filter;
mod intersect;
mod oracle;
mod search;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::compiler::QueryPlan;
use crate::graph::PropertyGraph;

pub use filter::eval_filter;
pub use intersect::check_intersection;
pub use oracle::{enumerate_trails_oracle, filter_trails_oracle};

pub const DEFAULT_VARLEN_CAP: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    /// Hop limit for variable-length steps without a maximum.
    pub varlen_cap: u32,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            varlen_cap: DEFAULT_VARLEN_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathBinding {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    /// Binding name to vertex or edge id.
    pub vars: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("unresolved binding `{0}`")]
    UnresolvedBinding(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("function `{function}` expects 2 arguments, got {got}")]
    Arity { function: String, got: usize },
    #[error("a condition argument must be an Apply")]
    NotBoolean,
    #[error("a comparison argument must be an attribute or a value")]
    NotScalar,
}

/// Calls `visit` for every match of `plan` in deterministic order until it
/// returns `Break`.
pub fn for_each_match(
    graph: &PropertyGraph,
    plan: &QueryPlan,
    opts: &MatchOptions,
    mut visit: impl FnMut(PathBinding) -> ControlFlow<()>,
) {
    let _ = search::search(graph, plan, opts, |t| visit(t.to_binding(graph, plan)));
}

/// Every match of `plan`'s steps, ignoring its filter.
pub fn match_plan(graph: &PropertyGraph, plan: &QueryPlan, opts: &MatchOptions) -> Vec<PathBinding> {
    let mut out = Vec::new();
    for_each_match(graph, plan, opts, |b| {
        out.push(b);
        ControlFlow::Continue(())
    });
    out
}
