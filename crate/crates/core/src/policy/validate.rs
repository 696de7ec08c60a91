use std::collections::{HashMap, HashSet};
use std::fmt;

use super::model::*;
use crate::compiler::Function;
use crate::uri;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A structural invariant of the policy model. Parsing fails on these.
    Invariant,
    UnknownFunction,
    UnsupportedMatchFunction,
    UnsupportedCombiningAlgorithm,
}

impl ViolationKind {
    pub fn is_structural(self) -> bool {
        self == ViolationKind::Invariant
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Element path, e.g. `/Policy/Rule[1]/Pattern`.
    pub path: String,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Default)]
struct Report {
    violations: Vec<Violation>,
}

impl Report {
    fn push(&mut self, path: &str, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.to_owned(),
            kind,
            message: message.into(),
        });
    }

    fn invariant(&mut self, path: &str, message: impl Into<String>) {
        self.push(path, ViolationKind::Invariant, message);
    }
}

pub fn is_supported_combining_algorithm(alg: &str) -> bool {
    matches!(
        alg,
        uri::FIRST_APPLICABLE | uri::DENY_OVERRIDES | uri::PERMIT_OVERRIDES
    )
}

/// Checks every model invariant and every function URI. An empty result
/// means the policy is fully valid.
pub fn validate_policy(policy: &Policy) -> Vec<Violation> {
    let mut r = Report::default();
    let root = "/Policy";

    if policy.policy_id.is_empty() {
        r.invariant(root, "PolicyId must not be empty");
    }
    if !is_supported_combining_algorithm(&policy.rule_combining_alg) {
        r.push(
            root,
            ViolationKind::UnsupportedCombiningAlgorithm,
            format!(
                "unsupported rule-combining algorithm `{}`",
                policy.rule_combining_alg
            ),
        );
    }
    if let Some(meta) = &policy.meta {
        check_meta(meta, &mut r);
    }
    if let Some(target) = &policy.target {
        check_constraints(target, &format!("{root}/Target"), &mut r);
    }

    let mut seen_rules = HashSet::new();
    for (i, rule) in policy.rules.iter().enumerate() {
        let path = format!("{root}/Rule[{}]", i + 1);
        if rule.rule_id.is_empty() {
            r.invariant(&path, "RuleId must not be empty");
        } else if !seen_rules.insert(rule.rule_id.as_str()) {
            r.invariant(&path, format!("duplicate RuleId `{}`", rule.rule_id));
        }
        check_rule(rule, &path, &mut r);
    }
    r.violations
}

fn check_meta(meta: &Meta, r: &mut Report) {
    let path = "/Policy/Meta";
    if meta.vertex_entities.is_empty() {
        r.invariant(path, "Meta needs at least one VertexEntity");
    }
    if meta.edge_entities.is_empty() {
        r.invariant(path, "Meta needs at least one EdgeEntity");
    }
    if meta
        .vertex_entities
        .iter()
        .chain(&meta.edge_entities)
        .any(|s| s.is_empty())
    {
        r.invariant(path, "Meta entity names must not be empty");
    }
}

fn check_constraints(set: &ConstraintSet, path: &str, r: &mut Report) {
    for m in set.all_matches() {
        if MatchFunction::from_uri(&m.match_id).is_none() {
            r.push(
                path,
                ViolationKind::UnsupportedMatchFunction,
                format!("unsupported match function `{}`", m.match_id),
            );
        }
        if m.attribute_id.is_empty() {
            r.invariant(path, "Match AttributeId must not be empty");
        }
    }
}

fn check_rule(rule: &Rule, path: &str, r: &mut Report) {
    if let Some(target) = &rule.target {
        check_constraints(target, &format!("{path}/Target"), r);
    }
    if rule.pattern_condition.is_some() && rule.pattern.is_none() {
        r.invariant(path, "PatternCondition requires a Pattern in the same rule");
    }
    let mut bindings = HashMap::new();
    if let Some(pattern) = &rule.pattern {
        bindings = check_pattern(pattern, &format!("{path}/Pattern"), r);
    }
    if let Some(cond) = &rule.pattern_condition {
        if rule.pattern.is_some() {
            check_condition(cond, &bindings, &format!("{path}/PatternCondition"), r);
        }
    }
}

/// Returns the declared binding names with the kind of element they name.
fn check_pattern(p: &Pattern, path: &str, r: &mut Report) -> HashMap<String, BindingKind> {
    if p.vertices.len() < 2 || p.edges.len() + 1 != p.vertices.len() {
        r.invariant(
            path,
            "pattern must alternate vertices and edges, starting and ending with a vertex",
        );
    }
    let subjects = p
        .vertices
        .iter()
        .filter(|v| v.category == VertexCategory::Subject)
        .count();
    if subjects != 1 {
        r.invariant(
            path,
            format!("pattern needs exactly one subject vertex, found {subjects}"),
        );
    }
    let resource_vertices = p
        .vertices
        .iter()
        .filter(|v| v.category == VertexCategory::Resource)
        .count();
    let resource_edges: Vec<usize> = p
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.category == EdgeCategory::Resource)
        .map(|(i, _)| i)
        .collect();
    let resources = resource_vertices + resource_edges.len();
    if resources != 1 {
        r.invariant(
            path,
            format!("pattern needs exactly one resource element, found {resources}"),
        );
    }
    if let Some(&i) = resource_edges.first() {
        if i + 1 != p.edges.len() {
            r.invariant(path, "a resource edge must be the last edge of the pattern");
        }
    }

    let mut bindings: HashMap<String, BindingKind> = HashMap::new();
    let mut declare = |name: &Option<String>, kind: BindingKind, el: &str, r: &mut Report| {
        if let Some(name) = name {
            if name.is_empty() {
                r.invariant(el, "binding names must not be empty");
            } else if bindings.insert(name.clone(), kind).is_some() {
                r.invariant(el, format!("binding `{name}` is declared more than once"));
            }
        }
    };

    for (i, v) in p.vertices.iter().enumerate() {
        let el = format!("{path}/Vertex[{}]", i + 1);
        declare(&v.vertex_id, BindingKind::Vertex, &el, r);
        if v.label.as_deref() == Some("") {
            r.invariant(&el, "Label must not be empty");
        }
        check_constraints(&v.constraints, &el, r);
    }
    for (i, e) in p.edges.iter().enumerate() {
        let el = format!("{path}/Edge[{}]", i + 1);
        declare(&e.edge_id, BindingKind::Edge, &el, r);
        if e.edge_type.as_deref() == Some("") {
            r.invariant(&el, "Type must not be empty");
        }
        match e.length {
            EdgeLength::Single => {}
            EdgeLength::Exact(n) if n < 1 => r.invariant(&el, "Length must be at least 1"),
            EdgeLength::Exact(_) => {}
            EdgeLength::Range { min, max } => {
                if min == Some(0) || max == Some(0) {
                    r.invariant(&el, "MinLength and MaxLength must be at least 1");
                }
                if let (Some(lo), Some(hi)) = (min, max) {
                    if lo > hi {
                        r.invariant(
                            &el,
                            format!("MinLength {lo} is greater than MaxLength {hi}"),
                        );
                    }
                }
            }
        }
        if e.edge_id.is_some() && !e.length.is_single_hop() {
            r.invariant(&el, "an EdgeId cannot name a variable-length segment");
        }
        check_constraints(&e.constraints, &el, r);
    }
    bindings
}

fn check_condition(
    expr: &ConditionExpr,
    bindings: &HashMap<String, BindingKind>,
    path: &str,
    r: &mut Report,
) {
    expr.visit(&mut |node| match node {
        ConditionExpr::Apply { function_id, args } => match Function::from_uri(function_id) {
            None => r.push(
                path,
                ViolationKind::UnknownFunction,
                format!("unknown function `{function_id}`"),
            ),
            Some(f) if f.is_logical() => {
                if args.iter().any(|a| !matches!(a, ConditionExpr::Apply { .. })) {
                    r.invariant(path, format!("arguments of `{function_id}` must be Apply elements"));
                }
            }
            Some(_) => {
                if args.len() != 2 || args.iter().any(|a| matches!(a, ConditionExpr::Apply { .. })) {
                    r.invariant(
                        path,
                        format!("`{function_id}` takes two attribute or value arguments"),
                    );
                }
            }
        },
        ConditionExpr::Designator {
            binding,
            kind,
            category,
            ..
        } => {
            match bindings.get(binding) {
                None => r.invariant(path, format!("unresolved binding `{binding}`")),
                Some(k) if k != kind => r.invariant(
                    path,
                    format!("binding `{binding}` names a {k:?}, not a {kind:?}"),
                ),
                Some(_) => {}
            }
            let expected = match kind {
                BindingKind::Vertex => uri::PATH_VERTEX_CATEGORY,
                BindingKind::Edge => uri::PATH_EDGE_CATEGORY,
            };
            if category != expected {
                r.invariant(
                    path,
                    format!("designator for `{binding}` must use category `{expected}`"),
                );
            }
        }
        ConditionExpr::Literal(_) => {}
    });
}
