use std::fmt::Write;

use super::model::*;
use crate::graph::PropertyValue;
use crate::uri;
use crate::xml::escape;

/// Writes a policy back to XML. Extension elements use the `g` prefix and
/// multi-edge paths are nested right-recursively.
pub fn policy_to_xml(policy: &Policy) -> String {
    let mut w = Writer::default();
    w.open(
        "Policy",
        &[
            ("xmlns", uri::XACML_NS),
            ("xmlns:g", uri::XACML4G_NS),
            ("PolicyId", &policy.policy_id),
            ("RuleCombiningAlgId", &policy.rule_combining_alg),
        ],
    );
    if let Some(meta) = &policy.meta {
        w.open("g:Meta", &[]);
        w.open("g:Vertices", &[]);
        for v in &meta.vertex_entities {
            w.leaf("g:VertexEntity", &[], v);
        }
        w.close("g:Vertices");
        w.open("g:Edges", &[]);
        for e in &meta.edge_entities {
            w.leaf("g:EdgeEntity", &[], e);
        }
        w.close("g:Edges");
        w.close("g:Meta");
    }
    if let Some(t) = &policy.target {
        w.target(t);
    }
    for rule in &policy.rules {
        w.open("Rule", &[("RuleId", &rule.rule_id), ("Effect", rule.effect.as_str())]);
        if let Some(t) = &rule.target {
            w.target(t);
        }
        if let Some(p) = &rule.pattern {
            w.open("g:Pattern", &[("PatternId", &p.pattern_id)]);
            w.path(&p.vertices, &p.edges);
            w.close("g:Pattern");
        }
        if let Some(c) = &rule.pattern_condition {
            w.open("g:PatternCondition", &[]);
            w.expr(c);
            w.close("g:PatternCondition");
        }
        w.close("Rule");
    }
    w.close("Policy");
    w.out
}

#[derive(Default)]
struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    fn start(&mut self, name: &str, attrs: &[(&str, &str)]) {
        let _ = write!(self.out, "{:width$}<{name}", "", width = self.depth * 2);
        for (k, v) in attrs {
            let _ = write!(self.out, " {k}=\"{}\"", escape(v));
        }
    }

    fn open(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        let _ = writeln!(self.out, "{:width$}</{name}>", "", width = self.depth * 2);
    }

    fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start(name, attrs);
        self.out.push_str("/>\n");
    }

    fn leaf(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        self.start(name, attrs);
        let _ = writeln!(self.out, ">{}</{name}>", escape(text));
    }

    fn target(&mut self, t: &ConstraintSet) {
        self.open("Target", &[]);
        self.any_of(t);
        self.close("Target");
    }

    fn any_of(&mut self, set: &ConstraintSet) {
        for any in &set.any_of {
            self.open("AnyOf", &[]);
            for all in &any.all_of {
                self.open("AllOf", &[]);
                for m in &all.matches {
                    self.open("Match", &[("MatchId", &m.match_id)]);
                    self.leaf("AttributeValue", &[("DataType", uri::XSD_STRING)], &m.literal);
                    self.empty(
                        "AttributeDesignator",
                        &[
                            ("AttributeId", &m.attribute_id),
                            ("Category", &m.category),
                            ("DataType", uri::XSD_STRING),
                            ("MustBePresent", "false"),
                        ],
                    );
                    self.close("Match");
                }
                self.close("AllOf");
            }
            self.close("AnyOf");
        }
    }

    fn vertex(&mut self, v: &PathVertexSpec) {
        let mut attrs = Vec::new();
        if let Some(id) = &v.vertex_id {
            attrs.push(("VertexId", id.as_str()));
        }
        if let Some(l) = &v.label {
            attrs.push(("Label", l.as_str()));
        }
        attrs.push(("Category", v.category.uri()));
        self.with_constraints("g:Vertex", &attrs, &v.constraints);
    }

    fn edge(&mut self, e: &PathEdgeSpec) {
        let (exact, min, max);
        let mut attrs = Vec::new();
        if let Some(id) = &e.edge_id {
            attrs.push(("EdgeId", id.as_str()));
        }
        if let Some(t) = &e.edge_type {
            attrs.push(("Type", t.as_str()));
        }
        attrs.push(("Category", e.category.uri()));
        attrs.push(("Direction", e.direction.as_str()));
        match e.length {
            EdgeLength::Single => {}
            EdgeLength::Exact(n) => {
                exact = n.to_string();
                attrs.push(("Length", &exact));
            }
            EdgeLength::Range { min: lo, max: hi } => {
                min = lo.map(|n| n.to_string());
                max = hi.map(|n| n.to_string());
                if let Some(m) = &min {
                    attrs.push(("MinLength", m));
                }
                if let Some(m) = &max {
                    attrs.push(("MaxLength", m));
                }
            }
        }
        self.with_constraints("g:Edge", &attrs, &e.constraints);
    }

    fn with_constraints(&mut self, name: &str, attrs: &[(&str, &str)], c: &ConstraintSet) {
        if c.is_empty() {
            self.empty(name, attrs);
        } else {
            self.open(name, attrs);
            self.any_of(c);
            self.close(name);
        }
    }

    /// `V E V` at the innermost level, `V E (rest)` around it.
    fn path(&mut self, vertices: &[PathVertexSpec], edges: &[PathEdgeSpec]) {
        self.open("g:Path", &[]);
        self.vertex(&vertices[0]);
        self.edge(&edges[0]);
        if edges.len() == 1 {
            self.vertex(&vertices[1]);
        } else {
            self.path(&vertices[1..], &edges[1..]);
        }
        self.close("g:Path");
    }

    fn expr(&mut self, e: &ConditionExpr) {
        match e {
            ConditionExpr::Apply { function_id, args } => {
                self.open("Apply", &[("FunctionId", function_id)]);
                for a in args {
                    self.expr(a);
                }
                self.close("Apply");
            }
            ConditionExpr::Designator {
                attribute_id,
                category,
                binding,
                kind,
            } => {
                let key = match kind {
                    BindingKind::Vertex => "VertexId",
                    BindingKind::Edge => "EdgeId",
                };
                self.empty(
                    "AttributeDesignator",
                    &[
                        ("AttributeId", attribute_id),
                        ("Category", category),
                        (key, binding),
                    ],
                );
            }
            ConditionExpr::Literal(v) => {
                let data_type = match v {
                    PropertyValue::Text(_) => uri::XSD_STRING,
                    PropertyValue::Integer(_) => uri::XSD_INTEGER,
                    PropertyValue::Float(_) => uri::XSD_DOUBLE,
                    PropertyValue::Boolean(_) => uri::XSD_BOOLEAN,
                };
                self.leaf("AttributeValue", &[("DataType", data_type)], &v.as_text());
            }
        }
    }
}
