#![allow(dead_code)]

pub mod cypher;
pub mod generators;

use std::fs;
use std::path::PathBuf;

use graphpdp_core::graph::load_json;
use graphpdp_core::{parse_policy, parse_request, Policy, PropertyGraph, Request};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")).join(rel)
}

pub fn read(rel: &str) -> String {
    fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn demo_policy() -> Policy {
    parse_policy(&read("demo/policies/pmUserToDataObject.xml")).expect("demo policy parses")
}

pub fn demo_request() -> Request {
    parse_request(&read("demo/request.xml")).expect("demo request parses")
}

pub fn demo_graph() -> PropertyGraph {
    load_json(&read("demo/graph.json")).expect("demo graph loads")
}

use std::collections::BTreeSet;

use graphpdp_core::matcher::{
    enumerate_trails_oracle, eval_filter, filter_trails_oracle, MatchError, PathBinding,
};
use graphpdp_core::QueryPlan;

/// Upper bound on the number of edges a binding of `plan` can have.
pub fn plan_max_edges(plan: &QueryPlan, cap: u32) -> usize {
    plan.edges
        .iter()
        .map(|e| e.max_len.unwrap_or(cap.max(e.min_len)) as usize)
        .sum()
}

/// All bindings of `plan` found by brute-force trail enumeration, with the
/// plan filter applied.
pub fn oracle_matches(
    graph: &PropertyGraph,
    plan: &QueryPlan,
    cap: u32,
) -> Result<Vec<PathBinding>, MatchError> {
    let trails = enumerate_trails_oracle(graph, plan_max_edges(plan, cap));
    let mut out = Vec::new();
    for b in filter_trails_oracle(graph, &trails, plan, cap) {
        let keep = match &plan.filter {
            Some(f) => eval_filter(&b, f, graph)?,
            None => true,
        };
        if keep {
            out.push(b);
        }
    }
    Ok(out)
}

/// Double loop over oracle bindings of both plans: is some request binding
/// element-wise contained in a filter-passing rule binding?
pub fn oracle_intersection(
    graph: &PropertyGraph,
    rule: &QueryPlan,
    request: &QueryPlan,
    cap: u32,
) -> Result<bool, MatchError> {
    let rule_bindings = oracle_matches(graph, rule, cap)?;
    let mut request_plan = request.clone();
    request_plan.filter = None;
    let request_bindings = oracle_matches(graph, &request_plan, cap)?;
    for b1 in &rule_bindings {
        let v1: BTreeSet<&String> = b1.vertices.iter().collect();
        let e1: BTreeSet<&String> = b1.edges.iter().collect();
        for b2 in &request_bindings {
            if b2.vertices.iter().all(|v| v1.contains(v)) && b2.edges.iter().all(|e| e1.contains(e)) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
