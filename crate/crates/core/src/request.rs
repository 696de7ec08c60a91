//! Access requests: action attributes plus an ordered list of path
//! attribute groups whose values read `name:value`.

use roxmltree::{Document, Node};

use crate::uri;
use crate::xml::{self, Ns};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementType {
    Vertex,
    Edge,
}

impl ElementType {
    pub fn uri(self) -> &'static str {
        match self {
            ElementType::Vertex => uri::PATH_VERTEX_CATEGORY,
            ElementType::Edge => uri::PATH_EDGE_CATEGORY,
        }
    }

    pub fn from_uri(s: &str) -> Option<Self> {
        match s {
            uri::PATH_VERTEX_CATEGORY => Some(ElementType::Vertex),
            uri::PATH_EDGE_CATEGORY => Some(ElementType::Edge),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCategory {
    Subject,
    Path,
    Resource,
}

impl PathCategory {
    pub fn from_uri(s: &str) -> Option<Self> {
        match s {
            uri::SUBJECT_CATEGORY => Some(PathCategory::Subject),
            uri::PATH_VERTEX_CATEGORY | uri::PATH_EDGE_CATEGORY => Some(PathCategory::Path),
            uri::RESOURCE_CATEGORY => Some(PathCategory::Resource),
            _ => None,
        }
    }
}

/// One `Attributes` element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeGroup {
    pub category: String,
    pub element_type: Option<ElementType>,
    /// `(AttributeId, raw AttributeValue)` in document order.
    pub attributes: Vec<(String, String)>,
}

/// A path group after the colon split. All `pins` must hold on the same
/// graph element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathElement {
    pub kind: ElementType,
    pub category: PathCategory,
    pub pins: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathElementBinding {
    pub position: usize,
    pub kind: ElementType,
    pub category: PathCategory,
    pub property_name: String,
    pub property_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub return_policy_id_list: bool,
    pub action_groups: Vec<AttributeGroup>,
    pub path_groups: Vec<AttributeGroup>,
    /// Parallel to `path_groups`.
    pub path: Vec<PathElement>,
}

impl Request {
    /// Every `(name, value)` pin of the path, flattened with positions.
    pub fn bindings(&self) -> impl Iterator<Item = PathElementBinding> + '_ {
        self.path.iter().enumerate().flat_map(|(position, el)| {
            el.pins.iter().map(move |(n, v)| PathElementBinding {
                position,
                kind: el.kind,
                category: el.category,
                property_name: n.clone(),
                property_value: v.clone(),
            })
        })
    }

    /// Values of attribute `attribute_id` in groups of `category`. Path
    /// values are reduced to their value part.
    pub fn attribute_values<'a>(
        &'a self,
        category: &'a str,
        attribute_id: &'a str,
    ) -> impl Iterator<Item = &'a str> + 'a {
        let actions = self
            .action_groups
            .iter()
            .filter(move |g| g.category == category)
            .flat_map(move |g| g.attributes.iter())
            .filter(move |(id, _)| id == attribute_id)
            .map(|(_, raw)| raw.as_str());
        let path = self
            .path_groups
            .iter()
            .filter(move |g| g.category == category)
            .flat_map(move |g| g.attributes.iter())
            .filter(move |(id, _)| id == attribute_id)
            .filter_map(|(_, raw)| split_attribute_value(raw).ok().map(|(_, v)| v));
        actions.chain(path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("{path} (line {line}): {reason}")]
    Schema {
        path: String,
        line: u32,
        reason: String,
    },
    #[error("{path}: value `{value}` of attribute `{attribute_id}` must read name:value")]
    MissingColon {
        path: String,
        attribute_id: String,
        value: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` has no colon separating property name and value")]
pub struct NoColon(pub String);

/// Splits at the first colon: `"a:b:c"` gives `("a", "b:c")`.
pub fn split_attribute_value(raw: &str) -> Result<(&str, &str), NoColon> {
    raw.split_once(':').ok_or_else(|| NoColon(raw.to_owned()))
}

pub fn parse_request(xml_text: &str) -> Result<Request, RequestError> {
    let doc = Document::parse(xml_text).map_err(|e| RequestError::Xml(e.to_string()))?;
    let root = doc.root_element();
    let schema = |node: Node<'_, '_>, path: &str, reason: String| RequestError::Schema {
        path: path.to_owned(),
        line: xml::line_of(&doc, node),
        reason,
    };
    if !xml::is(root, Ns::Xacml, "Request") {
        return Err(schema(root, "/", "root element must be Request".into()));
    }
    let return_policy_id_list = match root.attribute("ReturnPolicyIdList") {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => {
            return Err(schema(
                root,
                "/Request",
                format!("ReturnPolicyIdList must be true or false, got `{other}`"),
            ))
        }
    };

    let mut action_groups = Vec::new();
    let mut path_groups = Vec::new();
    let mut path_nodes = Vec::new();
    for child in xml::elements(root) {
        let cpath = xml::child_path("/Request", child);
        let target = if xml::is(child, Ns::Extension, "ActionAttributes") {
            &mut action_groups
        } else if xml::is(child, Ns::Extension, "PathAttributes") {
            &mut path_groups
        } else if xml::is(child, Ns::Xacml, "Attributes")
            && child.attribute("Category") == Some(uri::ACTION_CATEGORY)
        {
            action_groups.push(attribute_group(&doc, child, &cpath)?);
            continue;
        } else {
            return Err(schema(
                child,
                &cpath,
                format!("unexpected element `{}`", child.tag_name().name()),
            ));
        };
        for g in xml::elements(child) {
            let gpath = xml::child_path(&cpath, g);
            if !xml::is(g, Ns::Xacml, "Attributes") {
                return Err(schema(g, &gpath, "expected Attributes".into()));
            }
            target.push(attribute_group(&doc, g, &gpath)?);
            if xml::is(child, Ns::Extension, "PathAttributes") {
                path_nodes.push((g, gpath));
            }
        }
    }

    let mut path = Vec::with_capacity(path_groups.len());
    for (group, (node, gpath)) in path_groups.iter().zip(&path_nodes) {
        let category = PathCategory::from_uri(&group.category).ok_or_else(|| {
            schema(
                *node,
                gpath,
                format!("`{}` is not a path attribute category", group.category),
            )
        })?;
        let kind = match (group.element_type, group.category.as_str()) {
            (Some(t), _) => t,
            (None, uri::PATH_EDGE_CATEGORY) => ElementType::Edge,
            (None, _) => ElementType::Vertex,
        };
        let mut pins = Vec::new();
        for (attribute_id, raw) in &group.attributes {
            let (n, v) = split_attribute_value(raw).map_err(|_| RequestError::MissingColon {
                path: gpath.clone(),
                attribute_id: attribute_id.clone(),
                value: raw.clone(),
            })?;
            if n.is_empty() {
                return Err(schema(
                    *node,
                    gpath,
                    format!("empty property name in `{raw}`"),
                ));
            }
            pins.push((n.to_owned(), v.to_owned()));
        }
        if pins.is_empty() {
            return Err(schema(*node, gpath, "path group has no attribute values".into()));
        }
        path.push(PathElement {
            kind,
            category,
            pins,
        });
    }

    check_path_shape(&path).map_err(|reason| match path_nodes.first() {
        Some((node, _)) => schema(*node, "/Request/PathAttributes", reason),
        None => schema(root, "/Request", reason),
    })?;

    Ok(Request {
        return_policy_id_list,
        action_groups,
        path_groups,
        path,
    })
}

/// Subject first, resource last, each exactly once; an edge only as the
/// final (resource) element.
fn check_path_shape(path: &[PathElement]) -> Result<(), String> {
    let count = |c| path.iter().filter(|e| e.category == c).count();
    match (count(PathCategory::Subject), count(PathCategory::Resource)) {
        (1, 1) => {}
        (s, r) => {
            return Err(format!(
                "path needs exactly one subject and one resource group, found {s} and {r}"
            ))
        }
    }
    if path.first().map(|e| e.category) != Some(PathCategory::Subject) {
        return Err("the subject group must come first".into());
    }
    if path.last().map(|e| e.category) != Some(PathCategory::Resource) {
        return Err("the resource group must come last".into());
    }
    let last = path.len() - 1;
    if let Some(i) = path[..last].iter().position(|e| e.kind == ElementType::Edge) {
        return Err(format!(
            "path element {} is an edge; only the final resource may be an edge",
            i + 1
        ));
    }
    Ok(())
}

fn attribute_group(
    doc: &Document<'_>,
    node: Node<'_, '_>,
    path: &str,
) -> Result<AttributeGroup, RequestError> {
    let schema = |n: Node<'_, '_>, p: &str, reason: String| RequestError::Schema {
        path: p.to_owned(),
        line: xml::line_of(doc, n),
        reason,
    };
    let category = node
        .attribute("Category")
        .ok_or_else(|| schema(node, path, "missing required attribute `Category`".into()))?
        .to_owned();
    let element_type = match node.attribute("Type") {
        None => None,
        Some(t) => Some(ElementType::from_uri(t).ok_or_else(|| {
            schema(node, path, format!("Type must be a path vertex or edge category, got `{t}`"))
        })?),
    };
    let mut attributes = Vec::new();
    for a in xml::elements(node) {
        let apath = xml::child_path(path, a);
        if xml::is(a, Ns::Xacml, "Content") {
            continue;
        }
        if !xml::is(a, Ns::Xacml, "Attribute") {
            return Err(schema(a, &apath, "expected Attribute".into()));
        }
        let id = a
            .attribute("AttributeId")
            .ok_or_else(|| schema(a, &apath, "missing required attribute `AttributeId`".into()))?;
        let mut any = false;
        for v in xml::elements(a) {
            if !xml::is(v, Ns::Xacml, "AttributeValue") {
                let vpath = xml::child_path(&apath, v);
                return Err(schema(v, &vpath, "expected AttributeValue".into()));
            }
            attributes.push((id.to_owned(), xml::text(v)));
            any = true;
        }
        if !any {
            return Err(schema(a, &apath, "Attribute needs an AttributeValue".into()));
        }
    }
    Ok(AttributeGroup {
        category,
        element_type,
        attributes,
    })
}
