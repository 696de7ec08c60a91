//! Rendering of a rule plan and a request plan as one Cypher intersection
//! query.
//!
//! Plain case-sensitive equalities on a step become an inline property map.
//! Any other step constraint becomes a `WHERE` predicate on a generated
//! binding. The rule filter is always parenthesized as a unit so that an
//! `OR` inside it cannot capture the containment terms.

use std::collections::HashSet;
use std::fmt::Write;

use super::plan::{EdgeStep, QueryPlan, VertexStep};
use super::{translate_function, CompileError, Function};
use crate::graph::PropertyValue;
use crate::policy::{ConditionExpr, ConstraintSet, Direction, MatchFunction};

pub fn emit_cypher(rule: &QueryPlan, request: &QueryPlan) -> Result<String, CompileError> {
    let mut names = Names::new(rule, request);
    let mut predicates = Vec::new();
    let p1 = pattern(rule, "v", "r", &mut names, &mut predicates);
    let p2 = pattern(request, "w", "q", &mut names, &mut predicates);

    let mut terms = Vec::new();
    if let Some(f) = &rule.filter {
        terms.push(format!("({})", expr(f)?));
    }
    terms.extend(predicates);
    terms.push("ALL (x IN nodes(p2) WHERE x IN nodes(p1))".to_owned());
    terms.push("ALL (x IN relationships(p2) WHERE x IN relationships(p1))".to_owned());

    let mut out = String::new();
    let _ = writeln!(out, "MATCH p1 = {p1}");
    let _ = writeln!(out, "MATCH p2 = {p2}");
    let _ = writeln!(out, "WHERE {}", terms.join("\n  AND "));
    out.push_str("RETURN p1 IS NOT NULL AS result\n");
    Ok(out)
}

/// Generates binding names that collide with no user binding.
struct Names {
    taken: HashSet<String>,
}

impl Names {
    fn new(rule: &QueryPlan, request: &QueryPlan) -> Self {
        let taken = [rule, request]
            .iter()
            .flat_map(|p| {
                p.vertices
                    .iter()
                    .filter_map(|v| v.binding.clone())
                    .chain(p.edges.iter().filter_map(|e| e.binding.clone()))
            })
            .collect();
        Names { taken }
    }

    fn fresh(&mut self, prefix: &str, i: usize) -> String {
        let mut name = format!("{prefix}{i}");
        while self.taken.contains(&name) {
            name.push('_');
        }
        self.taken.insert(name.clone());
        name
    }
}

fn pattern(
    plan: &QueryPlan,
    vertex_prefix: &str,
    edge_prefix: &str,
    names: &mut Names,
    predicates: &mut Vec<String>,
) -> String {
    let mut out = String::new();
    for (i, v) in plan.vertices.iter().enumerate() {
        out.push_str(&vertex(v, vertex_prefix, i + 1, names, predicates));
        if let Some(e) = plan.edges.get(i) {
            out.push_str(&edge(e, edge_prefix, i + 1, names, predicates));
        }
    }
    out
}

fn vertex(
    v: &VertexStep,
    prefix: &str,
    i: usize,
    names: &mut Names,
    predicates: &mut Vec<String>,
) -> String {
    let (map, residual) = inline_map(&v.constraints, &v.pins);
    let mut binding = v.binding.as_deref().map(identifier);
    if let Some(residual) = residual {
        let name = binding.get_or_insert_with(|| names.fresh(prefix, i)).clone();
        predicates.push(constraint_predicate(residual, &name));
    }
    let mut out = String::from("(");
    if let Some(b) = &binding {
        out.push_str(b);
    }
    if let Some(l) = &v.label {
        let _ = write!(out, ":{}", identifier(l));
    }
    out.push_str(&map);
    out.push(')');
    out
}

fn edge(
    e: &EdgeStep,
    prefix: &str,
    i: usize,
    names: &mut Names,
    predicates: &mut Vec<String>,
) -> String {
    let (map, residual) = inline_map(&e.constraints, &e.pins);
    let mut binding = e.binding.as_deref().map(identifier);
    if let Some(residual) = residual {
        let name = binding.get_or_insert_with(|| names.fresh(prefix, i)).clone();
        let pred = if e.is_single_hop() {
            constraint_predicate(residual, &name)
        } else {
            format!("ALL (y IN {name} WHERE {})", constraint_predicate(residual, "y"))
        };
        predicates.push(pred);
    }
    let mut inner = String::new();
    if let Some(b) = &binding {
        inner.push_str(b);
    }
    if let Some(t) = &e.edge_type {
        let _ = write!(inner, ":{}", identifier(t));
    }
    inner.push_str(&length(e.min_len, e.max_len));
    if !map.is_empty() {
        if !inner.is_empty() {
            inner.push(' ');
        }
        inner.push_str(&map);
    }
    match e.direction {
        Direction::From => format!("-[{inner}]->"),
        Direction::To => format!("<-[{inner}]-"),
        Direction::Any => format!("-[{inner}]-"),
    }
}

fn length(min: u32, max: Option<u32>) -> String {
    match (min, max) {
        (1, Some(1)) => String::new(),
        (n, Some(m)) if n == m => format!("*{n}"),
        (1, Some(m)) => format!("*..{m}"),
        (n, Some(m)) => format!("*{n}..{m}"),
        (n, None) => format!("*{n}.."),
    }
}

/// Splits step constraints into an inline `{k:"v"}` map and whatever must
/// go into `WHERE`.
fn inline_map<'a>(
    constraints: &'a ConstraintSet,
    pins: &[(String, String)],
) -> (String, Option<&'a ConstraintSet>) {
    let mut pairs: Vec<(&str, &str)> = pins.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    let residual = match constraints.required_equalities() {
        Some(eqs) => {
            pairs.extend(eqs);
            None
        }
        None => Some(constraints),
    };
    if pairs.is_empty() {
        return (String::new(), residual);
    }
    let body: Vec<String> = pairs
        .iter()
        .map(|(k, v)| format!("{}:{}", identifier(k), string_literal(v)))
        .collect();
    (format!("{{{}}}", body.join(", ")), residual)
}

fn constraint_predicate(set: &ConstraintSet, binding: &str) -> String {
    let any: Vec<String> = set
        .any_of
        .iter()
        .map(|any| {
            let all: Vec<String> = any
                .all_of
                .iter()
                .map(|all| {
                    let ms: Vec<String> = all
                        .matches
                        .iter()
                        .map(|m| {
                            let prop = format!("{binding}.{}", identifier(&m.attribute_id));
                            let lit = string_literal(&m.literal);
                            match MatchFunction::from_uri(&m.match_id) {
                                Some(MatchFunction::StringEqualIgnoreCase) => {
                                    format!("toLower({prop}) = toLower({lit})")
                                }
                                _ => format!("{prop} = {lit}"),
                            }
                        })
                        .collect();
                    format!("({})", ms.join(" AND "))
                })
                .collect();
            format!("({})", all.join(" OR "))
        })
        .collect();
    any.join(" AND ")
}

fn expr(e: &ConditionExpr) -> Result<String, CompileError> {
    match e {
        ConditionExpr::Literal(v) => Ok(value_literal(v)),
        ConditionExpr::Designator {
            attribute_id,
            binding,
            ..
        } => Ok(format!("{}.{}", identifier(binding), identifier(attribute_id))),
        ConditionExpr::Apply { function_id, args } => {
            let f = translate_function(function_id)?;
            if f.is_logical() {
                let parts = args
                    .iter()
                    .map(|a| match a {
                        ConditionExpr::Apply { function_id, args: inner }
                            if inner.len() > 1
                                && translate_function(function_id).is_ok_and(Function::is_logical) =>
                        {
                            expr(a).map(|s| format!("({s})"))
                        }
                        _ => expr(a),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(match (f, parts.len()) {
                    (Function::And, 0) => "true".to_owned(),
                    (_, 0) => "false".to_owned(),
                    _ => parts.join(&format!(" {} ", f.cypher_operator())),
                });
            }
            let [lhs, rhs] = args.as_slice() else {
                return Err(CompileError::Arity {
                    function: function_id.clone(),
                    expected: 2,
                    got: args.len(),
                });
            };
            let (lhs, rhs) = (expr(lhs)?, expr(rhs)?);
            Ok(match f {
                Function::StringEqualIgnoreCase => format!("toLower({lhs}) = toLower({rhs})"),
                _ => format!("{lhs} {} {rhs}", f.cypher_operator()),
            })
        }
    }
}

fn value_literal(v: &PropertyValue) -> String {
    match v {
        PropertyValue::Text(s) => string_literal(s),
        PropertyValue::Integer(i) => i.to_string(),
        PropertyValue::Float(f) => {
            let s = format!("{f:?}");
            if s.contains(['.', 'e', 'E']) {
                s
            } else {
                format!("{s}.0")
            }
        }
        PropertyValue::Boolean(b) => b.to_string(),
    }
}

fn string_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Backquotes names that are not plain identifiers.
fn identifier(s: &str) -> String {
    let plain = s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_alphanumeric() || c == '_');
    if plain {
        s.to_owned()
    } else {
        format!("`{}`", s.replace('`', "``"))
    }
}
