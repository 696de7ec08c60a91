//! Brute-force reference implementations used to check the matcher. They
//! share no search code with it: trails are enumerated exhaustively and
//! plans are checked against each trail by trying every split of the trail
//! into segments.

use crate::compiler::QueryPlan;
use crate::graph::{EdgeIdx, PropertyGraph, VertexIdx};
use crate::policy::{Direction, MatchFunction};

use super::PathBinding;

const MAX_ORACLE_EDGES: usize = 8;

/// Every trail with `0..=max_edges` edges, in both orientations, ordered by
/// start vertex id and then by edge id at each extension.
///
/// # Panics
/// If `max_edges` exceeds 8.
pub fn enumerate_trails_oracle(graph: &PropertyGraph, max_edges: usize) -> Vec<PathBinding> {
    assert!(max_edges <= MAX_ORACLE_EDGES, "oracle is limited to 8 edges");
    let mut out = Vec::new();
    for v in graph.vertex_indices() {
        let mut vs = vec![v];
        let mut es = Vec::new();
        extend(graph, max_edges, &mut vs, &mut es, &mut out);
    }
    out
}

fn extend(
    graph: &PropertyGraph,
    max_edges: usize,
    vs: &mut Vec<VertexIdx>,
    es: &mut Vec<EdgeIdx>,
    out: &mut Vec<PathBinding>,
) {
    out.push(PathBinding {
        vertices: vs.iter().map(|&v| graph.vertex(v).id.clone()).collect(),
        edges: es.iter().map(|&e| graph.edge(e).id.clone()).collect(),
        vars: Default::default(),
    });
    if es.len() == max_edges {
        return;
    }
    let cur = *vs.last().unwrap();
    let mut next: Vec<(EdgeIdx, VertexIdx)> = graph
        .edge_indices()
        .filter_map(|e| {
            let (from, to) = graph.endpoints(e);
            if from == cur {
                Some((e, to))
            } else if to == cur {
                Some((e, from))
            } else {
                None
            }
        })
        .collect();
    next.sort_by(|a, b| graph.edge(a.0).id.cmp(&graph.edge(b.0).id));
    for (e, w) in next {
        if es.contains(&e) {
            continue;
        }
        es.push(e);
        vs.push(w);
        extend(graph, max_edges, vs, es, out);
        vs.pop();
        es.pop();
    }
}

/// All bindings of `plan`'s steps among `trails`; the plan filter is not
/// applied. Variable segments without an upper bound are limited to `cap`
/// hops.
pub fn filter_trails_oracle(
    graph: &PropertyGraph,
    trails: &[PathBinding],
    plan: &QueryPlan,
    cap: u32,
) -> Vec<PathBinding> {
    let mut out = Vec::new();
    for t in trails {
        let mut lengths = Vec::new();
        compositions(graph, t, plan, cap, 0, 0, &mut lengths, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn compositions(
    graph: &PropertyGraph,
    trail: &PathBinding,
    plan: &QueryPlan,
    cap: u32,
    step: usize,
    used: usize,
    lengths: &mut Vec<usize>,
    out: &mut Vec<PathBinding>,
) {
    if step == plan.edges.len() {
        if used == trail.edges.len() {
            out.extend(check(graph, trail, plan, lengths));
        }
        return;
    }
    let e = &plan.edges[step];
    let max = e.max_len.unwrap_or(cap.max(e.min_len));
    for len in e.min_len..=max {
        let len = len as usize;
        if used + len > trail.edges.len() {
            break;
        }
        lengths.push(len);
        compositions(graph, trail, plan, cap, step + 1, used + len, lengths, out);
        lengths.pop();
    }
}

fn text_eq(props: &crate::graph::Properties, k: &str, v: &str) -> bool {
    props.get(k).map(|p| p.as_text().into_owned()) == Some(v.to_owned())
}

fn set_holds(props: &crate::graph::Properties, set: &crate::policy::ConstraintSet) -> bool {
    set.any_of.iter().all(|any| {
        any.all_of.iter().any(|all| {
            all.matches.iter().all(|m| {
                let Some(p) = props.get(&m.attribute_id) else {
                    return false;
                };
                match MatchFunction::from_uri(&m.match_id) {
                    Some(MatchFunction::StringEqual) => p.as_text() == m.literal.as_str(),
                    Some(MatchFunction::StringEqualIgnoreCase) => {
                        p.as_text().to_lowercase() == m.literal.to_lowercase()
                    }
                    None => false,
                }
            })
        })
    })
}

fn check(
    graph: &PropertyGraph,
    trail: &PathBinding,
    plan: &QueryPlan,
    lengths: &[usize],
) -> Option<PathBinding> {
    let mut binding = PathBinding {
        vertices: trail.vertices.clone(),
        edges: trail.edges.clone(),
        vars: Default::default(),
    };
    let mut pos = 0;
    for (i, vstep) in plan.vertices.iter().enumerate() {
        let v = graph.vertex(graph.vertex_by_id(&trail.vertices[pos]).unwrap());
        if vstep.label.as_ref().is_some_and(|l| *l != v.label)
            || !vstep.pins.iter().all(|(k, val)| text_eq(&v.properties, k, val))
            || !set_holds(&v.properties, &vstep.constraints)
        {
            return None;
        }
        if let Some(b) = &vstep.binding {
            binding.vars.insert(b.clone(), v.id.clone());
        }
        let Some(estep) = plan.edges.get(i) else {
            break;
        };
        for hop in 0..lengths[i] {
            let eid = &trail.edges[pos + hop];
            let e = graph.edge(graph.edge_by_id(eid).unwrap());
            let (a, b) = (&trail.vertices[pos + hop], &trail.vertices[pos + hop + 1]);
            let forward = e.from == *a && e.to == *b;
            let backward = e.to == *a && e.from == *b;
            let oriented = match estep.direction {
                Direction::From => forward,
                Direction::To => backward,
                Direction::Any => forward || backward,
            };
            if !oriented
                || estep.edge_type.as_ref().is_some_and(|t| *t != e.edge_type)
                || !estep.pins.iter().all(|(k, val)| text_eq(&e.properties, k, val))
                || !set_holds(&e.properties, &estep.constraints)
            {
                return None;
            }
        }
        if let (Some(b), 1) = (&estep.binding, lengths[i]) {
            if estep.is_single_hop() {
                binding.vars.insert(b.clone(), trail.edges[pos].clone());
            }
        }
        pos += lengths[i];
    }
    Some(binding)
}
