use roxmltree::{Document, Node};

use super::model::*;
use super::validate::validate_policy;
use super::{ParseWarning, PolicyError};
use crate::graph::PropertyValue;
use crate::uri;
use crate::xml::{self, Ns};

struct Parser<'d, 'i> {
    doc: &'d Document<'i>,
    warnings: Vec<ParseWarning>,
}

type Res<T> = Result<T, PolicyError>;

pub fn parse_policy(xml_text: &str) -> Res<Policy> {
    parse_policy_with_warnings(xml_text).map(|(p, _)| p)
}

/// Parses a policy document. Structural invariant violations are errors;
/// unknown function URIs are left for [`validate_policy`] to report.
pub fn parse_policy_with_warnings(xml_text: &str) -> Res<(Policy, Vec<ParseWarning>)> {
    let doc = Document::parse(xml_text).map_err(|e| PolicyError::Xml(e.to_string()))?;
    let mut p = Parser {
        doc: &doc,
        warnings: Vec::new(),
    };
    let policy = p.policy(doc.root_element())?;

    let violations: Vec<_> = validate_policy(&policy)
        .into_iter()
        .filter(|v| v.kind.is_structural())
        .collect();
    if !violations.is_empty() {
        return Err(PolicyError::Invariant(violations));
    }
    Ok((policy, p.warnings))
}

impl<'d, 'i> Parser<'d, 'i> {
    fn schema(&self, node: Node<'_, '_>, path: &str, reason: impl Into<String>) -> PolicyError {
        PolicyError::Schema {
            path: path.to_owned(),
            line: xml::line_of(self.doc, node),
            reason: reason.into(),
        }
    }

    fn warn(&mut self, path: &str, message: String) {
        self.warnings.push(ParseWarning {
            path: path.to_owned(),
            message,
        });
    }

    fn check_attributes(&mut self, node: Node<'_, '_>, path: &str, known: &[&str]) {
        let unknown: Vec<String> = xml::unknown_attributes(node, known)
            .map(str::to_owned)
            .collect();
        for name in unknown {
            self.warn(path, format!("ignored unknown attribute `{name}`"));
        }
    }

    fn required<'a>(&self, node: Node<'a, '_>, path: &str, name: &str) -> Res<&'a str> {
        node.attribute(name)
            .ok_or_else(|| self.schema(node, path, format!("missing required attribute `{name}`")))
    }

    /// Handles an element this parser does not consume: extension-namespace
    /// elements are rejected, anything else is skipped with a warning.
    fn unexpected(&mut self, node: Node<'_, '_>, path: &str) -> Res<()> {
        let name = node.tag_name().name();
        match xml::ns_of(node) {
            Ns::Extension => Err(self.schema(node, path, format!("unexpected element `{name}`"))),
            Ns::Xacml if name == "Description" => Ok(()),
            _ => {
                self.warn(path, format!("ignored element `{name}`"));
                Ok(())
            }
        }
    }

    fn policy(&mut self, node: Node<'_, '_>) -> Res<Policy> {
        let path = "/Policy";
        if !xml::is(node, Ns::Xacml, "Policy") {
            return Err(self.schema(
                node,
                "/",
                format!("root element must be Policy, found `{}`", node.tag_name().name()),
            ));
        }
        self.check_attributes(node, path, &["PolicyId", "RuleCombiningAlgId", "Version"]);
        let policy_id = self.required(node, path, "PolicyId")?.to_owned();
        let rule_combining_alg = self.required(node, path, "RuleCombiningAlgId")?.to_owned();

        let mut target = None;
        let mut meta = None;
        let mut rules = Vec::new();
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Xacml, "Target") {
                if target.is_some() {
                    return Err(self.schema(child, &cpath, "more than one Target"));
                }
                target = Some(self.target(child, &cpath)?);
            } else if xml::is(child, Ns::Extension, "Meta") {
                if meta.is_some() {
                    return Err(self.schema(child, &cpath, "more than one Meta"));
                }
                meta = Some(self.meta(child, &cpath)?);
            } else if xml::is(child, Ns::Xacml, "Rule") {
                rules.push(self.rule(child, &cpath)?);
            } else if xml::is(child, Ns::Xacml, "PolicySet") {
                return Err(self.schema(child, &cpath, "PolicySet is not supported"));
            } else {
                self.unexpected(child, &cpath)?;
            }
        }
        Ok(Policy {
            policy_id,
            rule_combining_alg,
            target,
            meta,
            rules,
        })
    }

    fn meta(&mut self, node: Node<'_, '_>, path: &str) -> Res<Meta> {
        self.check_attributes(node, path, &[]);
        let mut vertices = None;
        let mut edges = None;
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Extension, "Vertices") && vertices.is_none() {
                vertices = Some(self.entity_list(child, &cpath, "VertexEntity")?);
            } else if xml::is(child, Ns::Extension, "Edges") && edges.is_none() {
                edges = Some(self.entity_list(child, &cpath, "EdgeEntity")?);
            } else {
                return Err(self.schema(
                    child,
                    &cpath,
                    format!("unexpected element `{}` in Meta", child.tag_name().name()),
                ));
            }
        }
        match (vertices, edges) {
            (Some(vertex_entities), Some(edge_entities)) => Ok(Meta {
                vertex_entities,
                edge_entities,
            }),
            _ => Err(self.schema(node, path, "Meta requires both Vertices and Edges")),
        }
    }

    fn entity_list(&mut self, node: Node<'_, '_>, path: &str, entity: &str) -> Res<Vec<String>> {
        self.check_attributes(node, path, &[]);
        let mut out = Vec::new();
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if !xml::is(child, Ns::Extension, entity) {
                return Err(self.schema(child, &cpath, format!("expected {entity}")));
            }
            let name = xml::text(child);
            if name.is_empty() {
                return Err(self.schema(child, &cpath, format!("{entity} must not be empty")));
            }
            out.push(name);
        }
        if out.is_empty() {
            return Err(self.schema(node, path, format!("at least one {entity} is required")));
        }
        Ok(out)
    }

    fn rule(&mut self, node: Node<'_, '_>, path: &str) -> Res<Rule> {
        self.check_attributes(node, path, &["RuleId", "Effect"]);
        let rule_id = self.required(node, path, "RuleId")?.to_owned();
        let effect = match self.required(node, path, "Effect")? {
            "Permit" => Effect::Permit,
            "Deny" => Effect::Deny,
            other => {
                return Err(self.schema(node, path, format!("Effect must be Permit or Deny, got `{other}`")))
            }
        };
        let mut rule = Rule {
            rule_id,
            effect,
            target: None,
            pattern: None,
            pattern_condition: None,
        };
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Xacml, "Target") && rule.target.is_none() {
                rule.target = Some(self.target(child, &cpath)?);
            } else if xml::is(child, Ns::Extension, "Pattern") && rule.pattern.is_none() {
                rule.pattern = Some(self.pattern(child, &cpath)?);
            } else if xml::is(child, Ns::Extension, "PatternCondition")
                && rule.pattern_condition.is_none()
            {
                rule.pattern_condition = Some(self.pattern_condition(child, &cpath)?);
            } else if xml::is(child, Ns::Xacml, "Condition") {
                return Err(self.schema(
                    child,
                    &cpath,
                    "standard rule Conditions are not supported; use PatternCondition",
                ));
            } else if matches!(child.tag_name().name(), "Target" | "Pattern" | "PatternCondition") {
                return Err(self.schema(
                    child,
                    &cpath,
                    format!("duplicate `{}`", child.tag_name().name()),
                ));
            } else {
                self.unexpected(child, &cpath)?;
            }
        }
        Ok(rule)
    }

    /// Parses a `Target`-shaped sequence of `AnyOf` children of `node`.
    fn any_of_sequence(&mut self, node: Node<'_, '_>, path: &str) -> Res<ConstraintSet> {
        let mut set = ConstraintSet::default();
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Xacml, "AnyOf") {
                set.any_of.push(self.any_of(child, &cpath)?);
            } else if xml::ns_of(child) == Ns::Extension {
                // Path children handled by the caller.
                continue;
            } else {
                self.unexpected(child, &cpath)?;
            }
        }
        Ok(set)
    }

    fn target(&mut self, node: Node<'_, '_>, path: &str) -> Res<ConstraintSet> {
        self.check_attributes(node, path, &[]);
        if let Some(ext) = xml::elements(node).find(|c| xml::ns_of(*c) == Ns::Extension) {
            let cpath = xml::child_path(path, ext);
            return Err(self.schema(ext, &cpath, "unexpected extension element in Target"));
        }
        self.any_of_sequence(node, path)
    }

    fn any_of(&mut self, node: Node<'_, '_>, path: &str) -> Res<AnyOf> {
        let mut any = AnyOf::default();
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if !xml::is(child, Ns::Xacml, "AllOf") {
                return Err(self.schema(child, &cpath, "AnyOf may only contain AllOf"));
            }
            let mut all = AllOf::default();
            for m in xml::elements(child) {
                let mpath = xml::child_path(&cpath, m);
                if !xml::is(m, Ns::Xacml, "Match") {
                    return Err(self.schema(m, &mpath, "AllOf may only contain Match"));
                }
                all.matches.push(self.match_constraint(m, &mpath)?);
            }
            if all.matches.is_empty() {
                return Err(self.schema(child, &cpath, "AllOf needs at least one Match"));
            }
            any.all_of.push(all);
        }
        if any.all_of.is_empty() {
            return Err(self.schema(node, path, "AnyOf needs at least one AllOf"));
        }
        Ok(any)
    }

    fn match_constraint(&mut self, node: Node<'_, '_>, path: &str) -> Res<MatchConstraint> {
        self.check_attributes(node, path, &["MatchId"]);
        let match_id = self.required(node, path, "MatchId")?.to_owned();
        let mut literal = None;
        let mut designator = None;
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Xacml, "AttributeValue") && literal.is_none() {
                self.check_attributes(child, &cpath, &["DataType"]);
                literal = Some(xml::text(child));
            } else if xml::is(child, Ns::Xacml, "AttributeDesignator") && designator.is_none() {
                self.check_attributes(
                    child,
                    &cpath,
                    &["AttributeId", "Category", "DataType", "MustBePresent", "Issuer"],
                );
                let id = self.required(child, &cpath, "AttributeId")?.to_owned();
                let category = self.required(child, &cpath, "Category")?.to_owned();
                designator = Some((id, category));
            } else {
                return Err(self.schema(
                    child,
                    &cpath,
                    format!(
                        "Match expects one AttributeValue and one AttributeDesignator, found `{}`",
                        child.tag_name().name()
                    ),
                ));
            }
        }
        match (literal, designator) {
            (Some(literal), Some((attribute_id, category))) => Ok(MatchConstraint {
                match_id,
                literal,
                attribute_id,
                category,
            }),
            _ => Err(self.schema(
                node,
                path,
                "Match needs an AttributeValue and an AttributeDesignator",
            )),
        }
    }

    fn pattern(&mut self, node: Node<'_, '_>, path: &str) -> Res<Pattern> {
        self.check_attributes(node, path, &["PatternId"]);
        let pattern_id = self.required(node, path, "PatternId")?.to_owned();
        let children: Vec<_> = xml::elements(node).collect();
        let [root] = children.as_slice() else {
            return Err(self.schema(node, path, "Pattern must contain exactly one Path"));
        };
        let root_path = xml::child_path(path, *root);
        if !xml::is(*root, Ns::Extension, "Path") {
            return Err(self.schema(*root, &root_path, "Pattern must contain exactly one Path"));
        }
        let items = self.path_items(*root, &root_path)?;
        let (vertices, edges) =
            flatten_pattern(&items).map_err(|reason| self.schema(*root, &root_path, reason))?;
        Ok(Pattern {
            pattern_id,
            vertices,
            edges,
        })
    }

    fn path_items(&mut self, node: Node<'_, '_>, path: &str) -> Res<Vec<PathItem>> {
        self.check_attributes(node, path, &[]);
        let mut items = Vec::new();
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Extension, "Vertex") {
                items.push(PathItem::Vertex(self.path_vertex(child, &cpath)?));
            } else if xml::is(child, Ns::Extension, "Edge") {
                items.push(PathItem::Edge(self.path_edge(child, &cpath)?));
            } else if xml::is(child, Ns::Extension, "Path") {
                items.push(PathItem::Path(self.path_items(child, &cpath)?));
            } else {
                return Err(self.schema(
                    child,
                    &cpath,
                    format!(
                        "Path may only contain Vertex, Edge and Path, found `{}`",
                        child.tag_name().name()
                    ),
                ));
            }
        }
        Ok(items)
    }

    fn constraints_only(&mut self, node: Node<'_, '_>, path: &str) -> Res<ConstraintSet> {
        if let Some(bad) = xml::elements(node).find(|c| !xml::is(*c, Ns::Xacml, "AnyOf")) {
            let cpath = xml::child_path(path, bad);
            return Err(self.schema(
                bad,
                &cpath,
                format!("only AnyOf is allowed here, found `{}`", bad.tag_name().name()),
            ));
        }
        self.any_of_sequence(node, path)
    }

    fn path_vertex(&mut self, node: Node<'_, '_>, path: &str) -> Res<PathVertexSpec> {
        self.check_attributes(node, path, &["VertexId", "Label", "Category"]);
        let category = match node.attribute("Category") {
            None => VertexCategory::Path,
            Some(c) => VertexCategory::from_uri(c).ok_or_else(|| {
                self.schema(node, path, format!("invalid vertex Category `{c}`"))
            })?,
        };
        Ok(PathVertexSpec {
            vertex_id: node.attribute("VertexId").map(str::to_owned),
            label: node.attribute("Label").map(str::to_owned),
            category,
            constraints: self.constraints_only(node, path)?,
        })
    }

    fn length_attr(&self, node: Node<'_, '_>, path: &str, name: &str) -> Res<Option<u32>> {
        let Some(raw) = node.attribute(name) else {
            return Ok(None);
        };
        let n: i64 = raw
            .trim()
            .parse()
            .map_err(|_| self.schema(node, path, format!("{name} must be an integer, got `{raw}`")))?;
        if n < 1 {
            return Err(self.schema(node, path, format!("{name} must be at least 1, got {n}")));
        }
        u32::try_from(n)
            .map(Some)
            .map_err(|_| self.schema(node, path, format!("{name} is too large")))
    }

    fn path_edge(&mut self, node: Node<'_, '_>, path: &str) -> Res<PathEdgeSpec> {
        self.check_attributes(
            node,
            path,
            &["EdgeId", "Type", "MinLength", "MaxLength", "Length", "Category", "Direction"],
        );
        let category = match node.attribute("Category") {
            None => EdgeCategory::Path,
            Some(c) => EdgeCategory::from_uri(c)
                .ok_or_else(|| self.schema(node, path, format!("invalid edge Category `{c}`")))?,
        };
        let direction = match node.attribute("Direction") {
            None => Direction::Any,
            Some(d) => Direction::parse(d).ok_or_else(|| {
                self.schema(node, path, format!("Direction must be from, to or any, got `{d}`"))
            })?,
        };
        let exact = self.length_attr(node, path, "Length")?;
        let min = self.length_attr(node, path, "MinLength")?;
        let max = self.length_attr(node, path, "MaxLength")?;
        let length = match (exact, min, max) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(self.schema(
                    node,
                    path,
                    "Length cannot be combined with MinLength or MaxLength",
                ))
            }
            (Some(n), None, None) => EdgeLength::Exact(n),
            (None, None, None) => EdgeLength::Single,
            (None, min, max) => EdgeLength::Range { min, max },
        };
        Ok(PathEdgeSpec {
            edge_id: node.attribute("EdgeId").map(str::to_owned),
            edge_type: node.attribute("Type").map(str::to_owned),
            category,
            direction,
            length,
            constraints: self.constraints_only(node, path)?,
        })
    }

    fn pattern_condition(&mut self, node: Node<'_, '_>, path: &str) -> Res<ConditionExpr> {
        self.check_attributes(node, path, &[]);
        let children: Vec<_> = xml::elements(node).collect();
        match children.as_slice() {
            [apply] if xml::is(*apply, Ns::Xacml, "Apply") => {
                let cpath = xml::child_path(path, *apply);
                self.apply(*apply, &cpath)
            }
            _ => Err(self.schema(node, path, "PatternCondition must contain exactly one Apply")),
        }
    }

    fn apply(&mut self, node: Node<'_, '_>, path: &str) -> Res<ConditionExpr> {
        self.check_attributes(node, path, &["FunctionId"]);
        let function_id = self.required(node, path, "FunctionId")?.to_owned();
        let mut args = Vec::new();
        for child in xml::elements(node) {
            let cpath = xml::child_path(path, child);
            if xml::is(child, Ns::Xacml, "Apply") {
                args.push(self.apply(child, &cpath)?);
            } else if xml::is(child, Ns::Xacml, "AttributeValue") {
                args.push(ConditionExpr::Literal(self.literal(child, &cpath)?));
            } else if xml::is(child, Ns::Xacml, "AttributeDesignator") {
                args.push(self.designator(child, &cpath)?);
            } else if xml::is(child, Ns::Xacml, "Description") {
                continue;
            } else {
                return Err(self.schema(
                    child,
                    &cpath,
                    format!(
                        "unsupported element `{}` in Apply",
                        child.tag_name().name()
                    ),
                ));
            }
        }
        Ok(ConditionExpr::Apply { function_id, args })
    }

    fn literal(&mut self, node: Node<'_, '_>, path: &str) -> Res<PropertyValue> {
        self.check_attributes(node, path, &["DataType"]);
        let raw = xml::text(node);
        let bad = |what: &str| self.schema(node, path, format!("`{raw}` is not a valid {what}"));
        Ok(match node.attribute("DataType") {
            Some(uri::XSD_INTEGER) => PropertyValue::Integer(raw.parse().map_err(|_| bad("integer"))?),
            Some(uri::XSD_DOUBLE) => PropertyValue::Float(
                raw.parse::<f64>()
                    .ok()
                    .filter(|f| f.is_finite())
                    .ok_or_else(|| bad("double"))?,
            ),
            Some(uri::XSD_BOOLEAN) => match raw.as_str() {
                "true" | "1" => PropertyValue::Boolean(true),
                "false" | "0" => PropertyValue::Boolean(false),
                _ => return Err(bad("boolean")),
            },
            _ => PropertyValue::Text(raw),
        })
    }

    fn designator(&mut self, node: Node<'_, '_>, path: &str) -> Res<ConditionExpr> {
        self.check_attributes(
            node,
            path,
            &[
                "AttributeId",
                "Category",
                "VertexId",
                "EdgeId",
                "DataType",
                "MustBePresent",
                "Issuer",
            ],
        );
        let attribute_id = self.required(node, path, "AttributeId")?.to_owned();
        let category = self.required(node, path, "Category")?.to_owned();
        let (binding, kind) = match (node.attribute("VertexId"), node.attribute("EdgeId")) {
            (Some(v), None) => (v.to_owned(), BindingKind::Vertex),
            (None, Some(e)) => (e.to_owned(), BindingKind::Edge),
            _ => {
                return Err(self.schema(
                    node,
                    path,
                    "AttributeDesignator needs exactly one of VertexId or EdgeId",
                ))
            }
        };
        Ok(ConditionExpr::Designator {
            attribute_id,
            category,
            binding,
            kind,
        })
    }
}
