//! Generated fixtures for latency measurements.
//!
//! The chain fixture is a directed line of `nodes` vertices joined by `next`
//! edges, one policy whose rule admits any forward walk of up to
//! [`CHAIN_MAX_HOPS`] hops, and requests naming walks of a chosen length.

use graphpdp_core::graph::{EdgeRecord, VertexRecord};
use graphpdp_core::{parse_policy, parse_request, uri, Policy, PropertyGraph, Request};

pub const CHAIN_MAX_HOPS: u32 = 5;

pub fn chain_key(i: usize) -> String {
    format!("n{i}")
}

pub fn chain_graph(len: usize) -> PropertyGraph {
    let mut g = PropertyGraph::new();
    for i in 0..len {
        g.add_vertex(VertexRecord::new(format!("nodes/{i:04}"), "nodes").with_property("_key", chain_key(i)))
            .expect("fresh id");
    }
    for i in 1..len {
        let e = EdgeRecord::new(
            format!("next/{i:04}"),
            "next",
            format!("nodes/{:04}", i - 1),
            format!("nodes/{i:04}"),
        );
        g.add_edge(e).expect("endpoints exist");
    }
    g
}

pub fn chain_policy_xml() -> String {
    format!(
        r#"<Policy xmlns="{xacml}" xmlns:g="{g}" PolicyId="chain" RuleCombiningAlgId="{alg}">
  <Rule Effect="Permit" RuleId="walk">
    <g:Pattern PatternId="forward">
      <g:Path>
        <g:Vertex Label="nodes" Category="{subject}"/>
        <g:Edge Type="next" Direction="from" MaxLength="{max}" Category="{edge}"/>
        <g:Vertex Label="nodes" Category="{resource}"/>
      </g:Path>
    </g:Pattern>
  </Rule>
</Policy>
"#,
        xacml = uri::XACML_NS,
        g = uri::XACML4G_NS,
        alg = uri::FIRST_APPLICABLE,
        subject = uri::SUBJECT_CATEGORY,
        edge = uri::PATH_EDGE_CATEGORY,
        resource = uri::RESOURCE_CATEGORY,
        max = CHAIN_MAX_HOPS,
    )
}

pub fn chain_policy() -> Policy {
    parse_policy(&chain_policy_xml()).expect("generated policy parses")
}

/// Request naming the walk of `hops` edges that starts at vertex `start`.
pub fn chain_request_xml(start: usize, hops: usize) -> String {
    let groups: String = (start..=start + hops)
        .map(|i| {
            let (category, id) = if i == start {
                (uri::SUBJECT_CATEGORY, uri::SUBJECT_ID)
            } else if i == start + hops {
                (uri::RESOURCE_CATEGORY, uri::RESOURCE_ID)
            } else {
                (uri::PATH_VERTEX_CATEGORY, uri::PATH_VERTEX_ID)
            };
            format!(
                r#"<Attributes Category="{category}"><Attribute AttributeId="{id}"><AttributeValue>_key:{}</AttributeValue></Attribute></Attributes>"#,
                chain_key(i)
            )
        })
        .collect();
    format!(
        r#"<Request xmlns="{}" xmlns:g="{}" ReturnPolicyIdList="true"><g:PathAttributes>{groups}</g:PathAttributes></Request>"#,
        uri::XACML_NS,
        uri::XACML4G_NS,
    )
}

pub fn chain_request(start: usize, hops: usize) -> Request {
    parse_request(&chain_request_xml(start, hops)).expect("generated request parses")
}
