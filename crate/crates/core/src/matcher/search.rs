use std::ops::ControlFlow;

use crate::compiler::{EdgeStep, QueryPlan, VertexStep};
use crate::graph::{EdgeIdx, Properties, PropertyGraph, VertexIdx};
use crate::policy::{ConstraintSet, Direction, MatchFunction};

use super::{MatchOptions, PathBinding};

/// A match in index form. `vertex_pos[i]` is the position in `vertices` of
/// plan vertex `i`; `edge_pos[j]` is the position in `edges` of the first
/// hop of plan edge `j`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Trail {
    pub vertices: Vec<VertexIdx>,
    pub edges: Vec<EdgeIdx>,
    pub vertex_pos: Vec<usize>,
    pub edge_pos: Vec<usize>,
}

impl Trail {
    pub fn to_binding(&self, graph: &PropertyGraph, plan: &QueryPlan) -> PathBinding {
        let mut b = PathBinding {
            vertices: self.vertices.iter().map(|&v| graph.vertex(v).id.clone()).collect(),
            edges: self.edges.iter().map(|&e| graph.edge(e).id.clone()).collect(),
            vars: Default::default(),
        };
        for (i, step) in plan.vertices.iter().enumerate() {
            if let Some(name) = &step.binding {
                let v = self.vertices[self.vertex_pos[i]];
                b.vars.insert(name.clone(), graph.vertex(v).id.clone());
            }
        }
        for (j, step) in plan.edges.iter().enumerate() {
            if let (Some(name), true) = (&step.binding, step.is_single_hop()) {
                let e = self.edges[self.edge_pos[j]];
                b.vars.insert(name.clone(), graph.edge(e).id.clone());
            }
        }
        b
    }
}

pub(crate) fn pins_hold(props: &Properties, pins: &[(String, String)]) -> bool {
    pins.iter()
        .all(|(k, v)| props.get(k).is_some_and(|p| p.as_text() == v.as_str()))
}

pub(crate) fn constraints_hold(props: &Properties, set: &ConstraintSet) -> bool {
    set.evaluate::<()>(|m| {
        Ok(match (MatchFunction::from_uri(&m.match_id), props.get(&m.attribute_id)) {
            (Some(f), Some(p)) => f.matches(&m.literal, &p.as_text()),
            _ => false,
        })
    })
    .unwrap_or(false)
}

fn vertex_ok(graph: &PropertyGraph, step: &VertexStep, v: VertexIdx) -> bool {
    let rec = graph.vertex(v);
    step.label.as_ref().is_none_or(|l| *l == rec.label)
        && pins_hold(&rec.properties, &step.pins)
        && constraints_hold(&rec.properties, &step.constraints)
}

fn edge_ok(graph: &PropertyGraph, step: &EdgeStep, e: EdgeIdx) -> bool {
    let rec = graph.edge(e);
    step.edge_type.as_ref().is_none_or(|t| *t == rec.edge_type)
        && pins_hold(&rec.properties, &step.pins)
        && constraints_hold(&rec.properties, &step.constraints)
}

/// Upper hop bound actually searched for `step`.
pub(crate) fn effective_max(step: &EdgeStep, opts: &MatchOptions) -> u32 {
    step.max_len
        .unwrap_or_else(|| step.min_len.max(opts.varlen_cap))
}

/// Start candidates for the first vertex step, narrowed through the
/// graph's label and property indexes. Always in id order.
fn start_candidates(graph: &PropertyGraph, step: &VertexStep) -> Vec<VertexIdx> {
    if let Some((k, v)) = step.pins.first() {
        return graph.vertices_with_property(k, v).to_vec();
    }
    if let Some(l) = &step.label {
        return graph.vertices_with_label(l).to_vec();
    }
    if let Some(&(k, v)) = step
        .constraints
        .required_equalities()
        .as_deref()
        .and_then(|eqs| eqs.first())
    {
        return graph.vertices_with_property(k, v).to_vec();
    }
    graph.vertex_indices().collect()
}

/// Hops leaving `cur` along `direction`, in edge-id order. A self-loop is
/// listed once.
fn incident(graph: &PropertyGraph, cur: VertexIdx, direction: Direction) -> Vec<(EdgeIdx, VertexIdx)> {
    let out = graph.outgoing(cur).iter().map(|&e| (e, graph.endpoints(e).1));
    let inc = graph.incoming(cur).iter().map(|&e| (e, graph.endpoints(e).0));
    match direction {
        Direction::From => out.collect(),
        Direction::To => inc.collect(),
        Direction::Any => {
            let mut all: Vec<_> = out.chain(inc).collect();
            all.sort_by(|a, b| graph.edge(a.0).id.cmp(&graph.edge(b.0).id));
            all.dedup_by_key(|h| h.0);
            all
        }
    }
}

struct Search<'a, F> {
    graph: &'a PropertyGraph,
    plan: &'a QueryPlan,
    opts: &'a MatchOptions,
    used: Vec<bool>,
    trail: Trail,
    visit: F,
}

/// Depth-first enumeration of every trail matching `plan`. `visit` may stop
/// the search early by returning `Break`.
pub(crate) fn search<F>(
    graph: &PropertyGraph,
    plan: &QueryPlan,
    opts: &MatchOptions,
    visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&Trail) -> ControlFlow<()>,
{
    let Some(first) = plan.vertices.first() else {
        return ControlFlow::Continue(());
    };
    let mut s = Search {
        graph,
        plan,
        opts,
        used: vec![false; graph.edge_count()],
        trail: Trail::default(),
        visit,
    };
    for v in start_candidates(graph, first) {
        if !vertex_ok(graph, first, v) {
            continue;
        }
        s.trail.vertices.push(v);
        s.trail.vertex_pos.push(0);
        let r = s.after_vertex(0);
        s.trail.vertex_pos.pop();
        s.trail.vertices.pop();
        r?;
    }
    ControlFlow::Continue(())
}

impl<F: FnMut(&Trail) -> ControlFlow<()>> Search<'_, F> {
    fn after_vertex(&mut self, i: usize) -> ControlFlow<()> {
        if i == self.plan.edges.len() {
            return (self.visit)(&self.trail);
        }
        self.trail.edge_pos.push(self.trail.edges.len());
        let r = self.hop(i, 1);
        self.trail.edge_pos.pop();
        r
    }

    fn hop(&mut self, j: usize, k: u32) -> ControlFlow<()> {
        let step = &self.plan.edges[j];
        let max = effective_max(step, self.opts);
        let cur = *self.trail.vertices.last().expect("trail has a vertex");
        for (e, next) in incident(self.graph, cur, step.direction) {
            if self.used[e.0 as usize] || !edge_ok(self.graph, step, e) {
                continue;
            }
            self.used[e.0 as usize] = true;
            self.trail.edges.push(e);
            self.trail.vertices.push(next);

            let mut r = ControlFlow::Continue(());
            if k >= step.min_len && vertex_ok(self.graph, &self.plan.vertices[j + 1], next) {
                self.trail.vertex_pos.push(self.trail.vertices.len() - 1);
                r = self.after_vertex(j + 1);
                self.trail.vertex_pos.pop();
            }
            if r.is_continue() && k < max {
                r = self.hop(j, k + 1);
            }

            self.trail.vertices.pop();
            self.trail.edges.pop();
            self.used[e.0 as usize] = false;
            r?;
        }
        ControlFlow::Continue(())
    }
}
