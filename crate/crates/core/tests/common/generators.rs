//! Random graphs, plans and filters for the matcher property suites.

use graphpdp_core::compiler::{EdgeStep, VertexStep};
use graphpdp_core::graph::{EdgeRecord, VertexRecord};
use graphpdp_core::matcher::PathBinding;
use graphpdp_core::policy::{ConditionExpr, ConstraintSet, Direction, MatchConstraint};
use graphpdp_core::{uri, PropertyGraph, QueryPlan};
use proptest::prelude::*;

use super::plan_max_edges;

pub const LABELS: [&str; 3] = ["A", "B", "C"];
pub const TYPES: [&str; 3] = ["X", "Y", "Z"];
/// Total hop budget of a generated plan, which bounds oracle enumeration.
pub const PLAN_EDGE_BUDGET: usize = 5;

#[derive(Debug, Clone)]
pub struct GraphSpec {
    pub vertices: Vec<(usize, Option<u8>, Option<u8>)>,
    pub edges: Vec<(usize, usize, usize, Option<u8>)>,
}

pub fn graph_spec() -> impl Strategy<Value = GraphSpec> {
    (1usize..=12).prop_flat_map(|n| {
        let vertex = (0..LABELS.len(), proptest::option::of(0u8..3), proptest::option::of(0u8..3));
        let edge = (0..n, 0..n, 0..TYPES.len(), proptest::option::of(0u8..3));
        (
            proptest::collection::vec(vertex, n),
            proptest::collection::vec(edge, 0..=16),
        )
            .prop_map(|(vertices, edges)| GraphSpec { vertices, edges })
    })
}

pub fn vid(i: usize) -> String {
    format!("v{i:02}")
}

pub fn build(spec: &GraphSpec) -> PropertyGraph {
    let mut g = PropertyGraph::new();
    for (i, (label, p, q)) in spec.vertices.iter().enumerate() {
        let mut v = VertexRecord::new(vid(i), LABELS[*label]).with_property("k", vid(i));
        if let Some(p) = p {
            v = v.with_property("p", p.to_string());
        }
        if let Some(q) = q {
            v = v.with_property("q", i64::from(*q));
        }
        g.add_vertex(v).unwrap();
    }
    for (i, (from, to, t, p)) in spec.edges.iter().enumerate() {
        let mut e = EdgeRecord::new(format!("e{i:02}"), TYPES[*t], vid(*from), vid(*to));
        if let Some(p) = p {
            e = e.with_property("p", p.to_string());
        }
        g.add_edge(e).unwrap();
    }
    g
}

pub fn constraint(spec: Option<(bool, u8, bool)>, category: &str) -> ConstraintSet {
    match spec {
        None => ConstraintSet::default(),
        Some((on_q, value, ignore_case)) => {
            let mut m = MatchConstraint::string_equal(if on_q { "q" } else { "p" }, category, &value.to_string());
            if ignore_case {
                m.match_id = uri::STRING_EQUAL_IGNORE_CASE.to_owned();
            }
            ConstraintSet::conjunction(vec![m])
        }
    }
}

pub fn constraint_spec() -> impl Strategy<Value = Option<(bool, u8, bool)>> {
    proptest::option::weighted(0.3, (any::<bool>(), 0u8..3, any::<bool>()))
}

pub fn vertex_step() -> impl Strategy<Value = VertexStep> {
    (
        proptest::option::weighted(0.4, 0..LABELS.len()),
        constraint_spec(),
    )
        .prop_map(|(label, c)| VertexStep {
            label: label.map(|l| LABELS[l].to_owned()),
            constraints: constraint(c, uri::PATH_VERTEX_CATEGORY),
            ..VertexStep::default()
        })
}

pub fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::From), Just(Direction::To), Just(Direction::Any)]
}

pub fn edge_step() -> impl Strategy<Value = EdgeStep> {
    (
        proptest::option::weighted(0.4, 0..TYPES.len()),
        direction(),
        1u32..=3,
        prop_oneof![3 => (0u32..=2).prop_map(Some), 1 => Just(None)],
        proptest::option::weighted(0.2, (Just(false), 0u8..3, any::<bool>())),
    )
        .prop_map(|(t, direction, min, extra, c)| EdgeStep {
            edge_type: t.map(|t| TYPES[t].to_owned()),
            direction,
            min_len: min,
            max_len: extra.map(|x| (min + x).min(3)),
            constraints: constraint(c, uri::PATH_EDGE_CATEGORY),
            ..EdgeStep::default()
        })
}

/// Rule plan with bindings `n{i}` on every vertex and `r{i}` on single-hop
/// edges, plus a cap for unbounded steps.
pub fn plan_and_cap() -> impl Strategy<Value = (QueryPlan, u32)> {
    (2usize..=4)
        .prop_flat_map(|k| {
            (
                proptest::collection::vec(vertex_step(), k),
                proptest::collection::vec(edge_step(), k - 1),
                1u32..=3,
            )
        })
        .prop_map(|(mut vertices, edges, cap)| {
            for (i, v) in vertices.iter_mut().enumerate() {
                v.binding = Some(format!("n{i}"));
            }
            let edges: Vec<EdgeStep> = edges
                .into_iter()
                .enumerate()
                .map(|(i, mut e)| {
                    if e.min_len > e.max_len.unwrap_or(u32::MAX) {
                        e.min_len = e.max_len.unwrap();
                    }
                    if e.is_single_hop() {
                        e.binding = Some(format!("r{i}"));
                    }
                    e
                })
                .collect();
            let resource_index = 2 * (vertices.len() - 1);
            (
                QueryPlan {
                    vertices,
                    edges,
                    filter: None,
                    subject_index: 0,
                    resource_index,
                },
                cap,
            )
        })
        .prop_filter("plan within the oracle budget", |(p, cap)| {
            plan_max_edges(p, *cap) <= PLAN_EDGE_BUDGET
        })
}

pub fn comparison(binding: String, edge: bool, function: &str, value: u8, on_q: bool) -> ConditionExpr {
    let attr = if on_q && !edge { "q" } else { "p" };
    let designator = if edge {
        ConditionExpr::edge_property(&binding, attr)
    } else {
        ConditionExpr::vertex_property(&binding, attr)
    };
    ConditionExpr::apply(function, vec![designator, ConditionExpr::text(&value.to_string())])
}

pub const COMPARATORS: [&str; 4] = [
    "xacml4g:1.0:function:equal",
    "xacml4g:1.0:function:not-equal",
    "xacml4g:1.0:function:greater-than",
    "xacml4g:1.0:function:less-than-or-equal",
];

/// A filter over the bindings that `plan` declares.
pub fn filter_for(plan: &QueryPlan) -> impl Strategy<Value = Option<ConditionExpr>> {
    let mut bindings: Vec<(String, bool)> =
        plan.vertices.iter().filter_map(|v| v.binding.clone()).map(|b| (b, false)).collect();
    bindings.extend(plan.edges.iter().filter_map(|e| e.binding.clone()).map(|b| (b, true)));
    let n = bindings.len();
    let leaf = (0..n, 0..COMPARATORS.len(), 0u8..3, any::<bool>()).prop_map(move |(b, f, v, q)| {
        let (name, edge) = bindings[b].clone();
        comparison(name, edge, COMPARATORS[f], v, q)
    });
    proptest::option::weighted(
        0.6,
        prop_oneof![
            leaf.clone(),
            (leaf.clone(), leaf, any::<bool>()).prop_map(|(a, b, or)| ConditionExpr::apply(
                if or { "xacml4g:1.0:function:or" } else { "xacml4g:1.0:function:and" },
                vec![a, b],
            )),
        ],
    )
}

pub fn sorted(mut v: Vec<PathBinding>) -> Vec<PathBinding> {
    v.sort();
    v
}

pub fn request_plan(pins: &[String], edge_type: Option<&str>) -> QueryPlan {
    let vertices: Vec<VertexStep> = pins
        .iter()
        .map(|k| VertexStep {
            pins: vec![("k".to_owned(), k.clone())],
            ..VertexStep::default()
        })
        .collect();
    let edges = (1..vertices.len())
        .map(|_| EdgeStep {
            edge_type: edge_type.map(str::to_owned),
            ..EdgeStep::default()
        })
        .collect();
    let resource_index = 2 * (vertices.len() - 1);
    QueryPlan {
        vertices,
        edges,
        filter: None,
        subject_index: 0,
        resource_index,
    }
}
