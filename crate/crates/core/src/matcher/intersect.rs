use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::compiler::QueryPlan;
use crate::graph::{EdgeIdx, PropertyGraph, VertexIdx};
use crate::policy::{BindingKind, ConditionExpr};

use super::filter::eval_with;
use super::search::{search, Trail};
use super::{MatchError, MatchOptions};

/// Where each plan binding lives: the vertex or edge step index.
pub(crate) fn binding_slots(plan: &QueryPlan) -> HashMap<&str, (BindingKind, usize)> {
    let mut slots = HashMap::new();
    for (i, v) in plan.vertices.iter().enumerate() {
        if let Some(b) = &v.binding {
            slots.insert(b.as_str(), (BindingKind::Vertex, i));
        }
    }
    for (j, e) in plan.edges.iter().enumerate() {
        if let (Some(b), true) = (&e.binding, e.is_single_hop()) {
            slots.insert(b.as_str(), (BindingKind::Edge, j));
        }
    }
    slots
}

/// Evaluates the plan filter on one trail.
pub(crate) fn filter_holds(
    graph: &PropertyGraph,
    plan: &QueryPlan,
    slots: &HashMap<&str, (BindingKind, usize)>,
    trail: &Trail,
) -> Result<bool, MatchError> {
    let Some(filter) = &plan.filter else {
        return Ok(true);
    };
    let resolve = |name: &str, kind: BindingKind| match slots.get(name) {
        Some(&(k, i)) if k == kind => Some(match kind {
            BindingKind::Vertex => &graph.vertex(trail.vertices[trail.vertex_pos[i]]).properties,
            BindingKind::Edge => &graph.edge(trail.edges[trail.edge_pos[i]]).properties,
        }),
        _ => None,
    };
    eval_with(filter, &resolve)
}

/// Rejects filters that cannot evaluate on any binding of `plan`, so that
/// such errors surface even when the plan has no matches.
fn check_filter(plan: &QueryPlan) -> Result<(), MatchError> {
    let Some(filter) = &plan.filter else {
        return Ok(());
    };
    let slots = binding_slots(plan);
    let mut err = None;
    filter.visit(&mut |node| {
        if err.is_some() {
            return;
        }
        if let ConditionExpr::Designator { binding, kind, .. } = node {
            if slots.get(binding.as_str()).map(|s| s.0) != Some(*kind) {
                err = Some(MatchError::UnresolvedBinding(binding.clone()));
            }
        }
        if let ConditionExpr::Apply { function_id, .. } = node {
            if crate::compiler::Function::from_uri(function_id).is_none() {
                err = Some(MatchError::UnknownFunction(function_id.clone()));
            }
        }
    });
    err.map_or(Ok(()), Err)
}

struct Members {
    vertices: Vec<VertexIdx>,
    edges: Vec<EdgeIdx>,
}

fn members(trail: &Trail) -> Members {
    let mut vertices = trail.vertices.clone();
    vertices.sort_unstable();
    vertices.dedup();
    let mut edges = trail.edges.clone();
    edges.sort_unstable();
    Members { vertices, edges }
}

fn contained(request: &Members, rule: &Members) -> bool {
    request.vertices.iter().all(|v| rule.vertices.binary_search(v).is_ok())
        && request.edges.iter().all(|e| rule.edges.binary_search(e).is_ok())
}

/// True iff some filter-passing match of `rule` contains every vertex and
/// edge of some match of `request`. Stops at the first witness.
pub fn check_intersection(
    graph: &PropertyGraph,
    rule: &QueryPlan,
    request: &QueryPlan,
    opts: &MatchOptions,
) -> Result<bool, MatchError> {
    check_filter(rule)?;

    let mut requested = Vec::new();
    let _ = search(graph, request, opts, |t| {
        requested.push(members(t));
        ControlFlow::Continue(())
    });
    if requested.is_empty() {
        return Ok(false);
    }

    let slots = binding_slots(rule);
    let mut outcome = Ok(false);
    let _ = search(graph, rule, opts, |t| match filter_holds(graph, rule, &slots, t) {
        Err(e) => {
            outcome = Err(e);
            ControlFlow::Break(())
        }
        Ok(false) => ControlFlow::Continue(()),
        Ok(true) => {
            let m = members(t);
            if requested.iter().any(|r| contained(r, &m)) {
                outcome = Ok(true);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        }
    });
    outcome
}
