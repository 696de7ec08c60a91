mod common;

use common::cypher::{self, Dir};
use common::*;
use graphpdp_core::compiler::compile_request_path;
use graphpdp_core::graph::{build_source_subset, load_csv, load_json, to_json, EdgeRecord, VertexRecord};
use graphpdp_core::matcher::{check_intersection, eval_filter, match_plan, MatchOptions, PathBinding};
use graphpdp_core::pdp::{evaluate_request, evaluate_rule, match_target, TargetMatch};
use graphpdp_core::policy::{
    ConditionExpr, ConstraintSet, Direction, EdgeLength, MatchConstraint, VertexCategory,
};
use graphpdp_core::{
    compile_rule_pattern, emit_cypher, parse_policy, parse_request, render_response_xml, uri,
    Decision, Pdp, PropertyGraph,
};

const DEMO_RESPONSE: &str = r#"<Response xmlns="urn:oasis:names:tc:xacml:3.0:core:schema:wd-17">
  <Result>
    <Decision>Permit</Decision>
    <Status>
      <StatusCode Value="urn:oasis:names:tc:xacml:1.0:status:ok"/>
    </Status>
    <PolicyIdentifierList>
      <PolicyIdReference>pmUserToDataObject</PolicyIdReference>
    </PolicyIdentifierList>
  </Result>
</Response>"#;

fn squash(xml: &str) -> String {
    xml.lines().map(str::trim).collect()
}

fn demo_rule_plan() -> graphpdp_core::QueryPlan {
    let policy = demo_policy();
    let rule = &policy.rules[0];
    compile_rule_pattern(rule.pattern.as_ref().unwrap(), rule.pattern_condition.as_ref()).unwrap()
}

#[test]
fn demo_policy_model() {
    let p = demo_policy();
    assert_eq!(p.policy_id, "pmUserToDataObject");
    assert_eq!(p.rule_combining_alg, uri::FIRST_APPLICABLE);
    assert!(p.target.is_none());
    let meta = p.meta.as_ref().unwrap();
    assert_eq!(meta.vertex_entities, ["dataObjects", "tasks"]);
    assert_eq!(
        meta.edge_entities,
        ["dataObjectRelations", "accessRelations", "taskDataRelations"]
    );

    let rule = p.rule("user_access_dataObj").unwrap();
    let pat = rule.pattern.as_ref().unwrap();
    assert_eq!(pat.pattern_id, "userToDataObjectAccess");
    assert_eq!(pat.vertices.len(), 3);
    assert_eq!(pat.vertices[0].category, VertexCategory::Subject);
    assert_eq!(pat.vertices[0].vertex_id.as_deref(), Some("s"));
    assert_eq!(pat.vertices[1].label.as_deref(), Some("tasks"));
    assert_eq!(pat.vertices[2].category, VertexCategory::Resource);
    assert_eq!(pat.edges[0].edge_type.as_deref(), Some("accessRelations"));
    assert_eq!(pat.edges[0].direction, Direction::From);
    assert_eq!(pat.edges[0].edge_id.as_deref(), Some("e"));
    assert_eq!(pat.edges[1].direction, Direction::Any);
    assert_eq!(pat.edges[1].length, EdgeLength::Range { min: None, max: Some(2) });

    let expected = ConditionExpr::apply(
        "xacml4g:1.0:function:or",
        vec![
            ConditionExpr::apply(
                "xacml4g:1.0:function:equal",
                vec![ConditionExpr::edge_property("e", "typeKind"), ConditionExpr::text("worksOn")],
            ),
            ConditionExpr::apply(
                "xacml4g:1.0:function:equal",
                vec![ConditionExpr::edge_property("e", "typeKind"), ConditionExpr::text("allocates")],
            ),
        ],
    );
    assert_eq!(rule.pattern_condition.as_ref(), Some(&expected));
}

#[test]
fn demo_request_model() {
    let r = demo_request();
    assert!(r.return_policy_id_list);
    assert_eq!(r.path.len(), 3);
    let keys: Vec<_> = r.bindings().map(|b| (b.property_name, b.property_value)).collect();
    assert_eq!(
        keys,
        [
            ("_key".to_owned(), "1196741133".to_owned()),
            ("_key".to_owned(), "1196741778".to_owned()),
            ("_key".to_owned(), "1196742142".to_owned()),
        ]
    );
    let actions: Vec<_> = r.attribute_values(uri::ACTION_CATEGORY, uri::ACTION_ID).collect();
    assert_eq!(actions, ["access-do"]);
}

#[test]
fn demo_plans_have_expected_shape() {
    let rule = demo_rule_plan();
    assert_eq!(rule.step_count(), 5);
    assert_eq!((rule.subject_index, rule.resource_index), (0, 4));
    assert_eq!(rule.edges[1].max_len, Some(2));

    let request = compile_request_path(&demo_request().path);
    assert_eq!(request.step_count(), 2 * 3 - 1);
    assert!(request.edges.iter().all(|e| e.is_single_hop() && e.direction == Direction::Any));
    assert_eq!(request.vertices[2].pins, [("_key".to_owned(), "1196742142".to_owned())]);
}

#[test]
fn demo_evaluates_to_expected_response() {
    let resp = Pdp::new([demo_policy()], MatchOptions::default())
        .evaluate(&demo_request(), Some(&demo_graph()));
    assert_eq!(resp.decision, Decision::Permit);
    assert_eq!(resp.status_code, uri::STATUS_OK);
    assert_eq!(resp.policy_ids, ["pmUserToDataObject"]);
    assert_eq!(squash(&render_response_xml(&resp)), squash(DEMO_RESPONSE));
}

#[test]
fn demo_intersection_agrees_with_oracle() {
    let g = demo_graph();
    let rule = demo_rule_plan();
    let request = compile_request_path(&demo_request().path);
    let opts = MatchOptions::default();
    assert_eq!(check_intersection(&g, &rule, &request, &opts), Ok(true));
    assert_eq!(oracle_intersection(&g, &rule, &request, opts.varlen_cap), Ok(true));
}

fn without_edge(g: &PropertyGraph, edge_id: &str) -> PropertyGraph {
    let mut out = PropertyGraph::new();
    for v in g.vertices() {
        out.add_vertex(v.clone()).unwrap();
    }
    for e in g.edges().filter(|e| e.id != edge_id) {
        out.add_edge(e.clone()).unwrap();
    }
    out
}

#[test]
fn disconnected_path_is_not_applicable() {
    let g = without_edge(&demo_graph(), "taskDataRelations/1");
    let policy = demo_policy();
    let request = demo_request();
    let decision = evaluate_rule(&policy.rules[0], &request, Some(&g), &MatchOptions::default());
    assert_eq!(decision, Decision::NotApplicable);

    let rule = demo_rule_plan();
    let req = compile_request_path(&request.path);
    assert_eq!(oracle_intersection(&g, &rule, &req, 8), Ok(false));

    let resp = evaluate_request(&[policy], &request, Some(&g));
    assert_eq!(resp.decision, Decision::NotApplicable);
    assert!(resp.policy_ids.is_empty());
}

#[test]
fn missing_graph_is_indeterminate() {
    let resp = evaluate_request(&[demo_policy()], &demo_request(), None);
    assert!(resp.decision.is_indeterminate());
    assert_eq!(resp.status_code, uri::STATUS_PROCESSING_ERROR);
    assert_eq!(resp.policy_ids, ["pmUserToDataObject"]);
    assert!(render_response_xml(&resp).contains("<StatusMessage>"));
}

#[test]
fn unresolved_binding_is_indeterminate() {
    let mut policy = demo_policy();
    policy.rules[0].pattern_condition = Some(ConditionExpr::apply(
        "xacml4g:1.0:function:equal",
        vec![ConditionExpr::edge_property("z", "typeKind"), ConditionExpr::text("worksOn")],
    ));
    let d = evaluate_rule(&policy.rules[0], &demo_request(), Some(&demo_graph()), &MatchOptions::default());
    match d {
        Decision::Indeterminate(reason) => assert!(reason.contains("`z`"), "{reason}"),
        other => panic!("expected Indeterminate, got {other}"),
    }
}

#[test]
fn unknown_function_forced_at_runtime_is_indeterminate() {
    let mut policy = demo_policy();
    policy.rules[0].pattern_condition = Some(ConditionExpr::apply(
        "xacml4g:1.0:function:regexp-match",
        vec![ConditionExpr::edge_property("e", "typeKind"), ConditionExpr::text("w.*")],
    ));
    let resp = evaluate_request(&[policy], &demo_request(), Some(&demo_graph()));
    assert!(resp.decision.is_indeterminate());
}

#[test]
fn zero_policies_not_applicable() {
    let resp = evaluate_request(&[], &demo_request(), Some(&demo_graph()));
    assert_eq!(resp.decision, Decision::NotApplicable);
    assert_eq!(resp.status_code, uri::STATUS_OK);
    assert!(resp.policy_ids.is_empty());
}

#[test]
fn policy_ids_only_when_requested() {
    let text = read("demo/request.xml").replace("ReturnPolicyIdList=\"true\"", "ReturnPolicyIdList=\"false\"");
    let request = parse_request(&text).unwrap();
    let resp = evaluate_request(&[demo_policy()], &request, Some(&demo_graph()));
    assert_eq!(resp.decision, Decision::Permit);
    assert!(resp.policy_ids.is_empty());
}

#[test]
fn rule_order_decides_conflict() {
    let g = demo_graph();
    let request = demo_request();
    for (dir, expected) in [("deny-first", Decision::Deny), ("deny-last", Decision::Permit)] {
        let policy = parse_policy(&read(&format!("conflict/{dir}/pmUserToDataObject.xml"))).unwrap();
        assert_eq!(policy.rules.len(), 2);
        let resp = evaluate_request(&[policy], &request, Some(&g));
        assert_eq!(resp.decision, expected, "{dir}");
        assert_eq!(resp.policy_ids, ["pmUserToDataObject"]);
    }
}

#[test]
fn target_matching_examples() {
    let request = demo_request();
    assert_eq!(match_target(None, &request), TargetMatch::Match);
    let action = |v: &str| {
        ConstraintSet::conjunction(vec![MatchConstraint::string_equal(uri::ACTION_ID, uri::ACTION_CATEGORY, v)])
    };
    assert_eq!(match_target(Some(&action("access-do")), &request), TargetMatch::Match);
    assert_eq!(match_target(Some(&action("delete")), &request), TargetMatch::NoMatch);
    let resource = ConstraintSet::conjunction(vec![MatchConstraint::string_equal(
        uri::RESOURCE_ID,
        uri::RESOURCE_CATEGORY,
        "1196742142",
    )]);
    assert_eq!(match_target(Some(&resource), &request), TargetMatch::Match);
    let mut bad = action("access-do");
    bad.any_of[0].all_of[0].matches[0].match_id = "urn:x:function:regexp".into();
    assert!(matches!(match_target(Some(&bad), &request), TargetMatch::Indeterminate(_)));
}

fn single_edge_binding(kind: Option<&str>) -> (PropertyGraph, PathBinding) {
    let mut g = PropertyGraph::new();
    g.add_vertex(VertexRecord::new("a", "dataObjects")).unwrap();
    g.add_vertex(VertexRecord::new("b", "tasks")).unwrap();
    let mut e = EdgeRecord::new("x", "accessRelations", "a", "b");
    if let Some(k) = kind {
        e = e.with_property("typeKind", k);
    }
    g.add_edge(e).unwrap();
    let b = PathBinding {
        vertices: vec!["a".into(), "b".into()],
        edges: vec!["x".into()],
        vars: [("e".to_owned(), "x".to_owned())].into(),
    };
    (g, b)
}

#[test]
fn demo_filter_examples() {
    let filter = demo_rule_plan().filter.unwrap();
    let (g, b) = single_edge_binding(Some("worksOn"));
    assert_eq!(eval_filter(&b, &filter, &g), Ok(true));
    let (g, b) = single_edge_binding(Some("observes"));
    assert_eq!(eval_filter(&b, &filter, &g), Ok(false));

    let level = ConditionExpr::apply(
        "xacml4g:1.0:function:greater-than",
        vec![ConditionExpr::edge_property("e", "level"), ConditionExpr::text("3")],
    );
    assert_eq!(eval_filter(&b, &level, &g), Ok(false));
}

#[test]
fn request_pinning_absent_vertex_does_not_intersect() {
    let text = read("demo/request.xml").replace("_key:1196741778", "_key:1196741800");
    let request = compile_request_path(&parse_request(&text).unwrap().path);
    let g = demo_graph();
    let rule = demo_rule_plan();
    assert_eq!(check_intersection(&g, &rule, &request, &MatchOptions::default()), Ok(false));
    assert_eq!(oracle_intersection(&g, &rule, &request, 8), Ok(false));
}

#[test]
fn demo_rule_matches_exactly_oracle_bindings() {
    let g = demo_graph();
    let mut rule = demo_rule_plan();
    rule.filter = None;
    let mut native = match_plan(&g, &rule, &MatchOptions::default());
    let mut oracle = oracle_matches(&g, &rule, 8).unwrap();
    native.sort();
    oracle.sort();
    assert!(!native.is_empty());
    assert_eq!(native, oracle);
}

const REFERENCE_QUERY: &str = r#"MATCH p1 = (s:dataObjects{typeCode:"pmUser"})-[e1:
  accessRelations]->(:tasks)-[*..2]-(:dataObjects)
MATCH p2 = ({_key:"1196741133"})-[]-
  ({_key:"1196741778"})-[]-({_key:"1196742142"})
WHERE e1.typeKind="worksOn" OR e1.typeKind=
  "allocates" AND ALL (x IN nodes(p2) WHERE x IN
  nodes(p1)) AND ALL (x IN relationships(p2) WHERE
  x IN relationships(p1))
RETURN p1 IS NOT NULL AS result"#;

/// The reference query with the filter parenthesized and without the
/// `dataObjects` labels that the policy never declares.
fn reference_query_adjusted() -> String {
    REFERENCE_QUERY
        .replace("(s:dataObjects{", "(s{")
        .replace("(:dataObjects)", "()")
        .replace("WHERE e1.typeKind", "WHERE (e1.typeKind")
        .replace("\"allocates\" AND", "\"allocates\") AND")
}

#[test]
fn demo_cypher_matches_reference_query() {
    let rule = demo_rule_plan();
    let request = compile_request_path(&demo_request().path);
    let emitted = emit_cypher(&rule, &request).unwrap();
    let ours = cypher::canonical(cypher::parse(&emitted).unwrap());
    let theirs = cypher::canonical(cypher::parse(&reference_query_adjusted()).unwrap());
    assert_eq!(ours, theirs, "emitted:\n{emitted}");

    let q = cypher::parse(&emitted).unwrap();
    assert_eq!(q.matches[0].rels[0].dir, Dir::Right);
    assert_eq!(q.matches[0].rels[1].length, (1, Some(2)));
    assert_eq!(q.matches[1].rels.len(), 2);
    assert!(q.matches[1].rels.iter().all(|r| r.dir == Dir::Both));
}

#[test]
fn reference_query_is_ambiguous_without_parentheses() {
    // Under Cypher precedence the OR captures the containment terms.
    let raw = cypher::parse(REFERENCE_QUERY).unwrap();
    assert!(matches!(raw.filter, Some(cypher::Expr::Or(..))));
    let fixed = cypher::parse(&reference_query_adjusted()).unwrap();
    assert!(matches!(fixed.filter, Some(cypher::Expr::And(..))));
}

#[test]
fn evaluation_and_emission_are_deterministic() {
    let pdp = Pdp::new([demo_policy()], MatchOptions::default());
    let g = demo_graph();
    let r = demo_request();
    let a = render_response_xml(&pdp.evaluate(&r, Some(&g)));
    let b = render_response_xml(&pdp.evaluate(&r, Some(&g)));
    assert_eq!(a, b);
    let req = compile_request_path(&r.path);
    assert_eq!(emit_cypher(&demo_rule_plan(), &req), emit_cypher(&demo_rule_plan(), &req));
}

#[test]
fn source_subset_equals_demo_graph() {
    let meta = demo_policy().meta.unwrap();
    let source = load_json(&read("demo/source.json")).unwrap();
    let subset = build_source_subset(&meta, &source);
    assert_eq!(to_json(&subset), to_json(&demo_graph()));

    let csv_source = load_csv(
        &read("demo/source-csv/vertices.csv"),
        &read("demo/source-csv/edges.csv"),
    )
    .unwrap();
    assert_eq!(text_view(&csv_source), text_view(&source));
}

/// Ids, labels, endpoints and properties read as text. CSV cells that look
/// numeric import as numbers, so a CSV source matches its JSON twin only
/// in this view.
fn text_view(g: &PropertyGraph) -> Vec<String> {
    let props = |p: &graphpdp_core::graph::Properties| {
        p.iter().map(|(k, v)| format!("{k}={}", v.as_text())).collect::<Vec<_>>().join(",")
    };
    g.vertices()
        .map(|v| format!("V {} {} {}", v.id, v.label, props(&v.properties)))
        .chain(g.edges().map(|e| {
            format!("E {} {} {}->{} {}", e.id, e.edge_type, e.from, e.to, props(&e.properties))
        }))
        .collect()
}

#[test]
fn subset_pipeline_matches_in_process_build() {
    let meta = demo_policy().meta.unwrap();
    let source = load_json(&read("demo/source.json")).unwrap();
    let written = to_json(&build_source_subset(&meta, &source));
    let reloaded = load_json(&written).unwrap();
    let pdp = Pdp::new([demo_policy()], MatchOptions::default());
    let r = demo_request();
    assert_eq!(
        pdp.evaluate(&r, Some(&reloaded)),
        pdp.evaluate(&r, Some(&build_source_subset(&meta, &source)))
    );
}
