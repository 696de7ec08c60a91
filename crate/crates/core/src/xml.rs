//! Small helpers over `roxmltree` shared by the policy and request parsers.

use roxmltree::{Document, Node};

use crate::uri;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Ns {
    /// XACML core namespace, or no namespace at all.
    Xacml,
    Extension,
    Other,
}

pub(crate) fn ns_of(node: Node<'_, '_>) -> Ns {
    match node.tag_name().namespace() {
        None | Some(uri::XACML_NS) => Ns::Xacml,
        Some(uri::XACML4G_NS) => Ns::Extension,
        Some(_) => Ns::Other,
    }
}

pub(crate) fn is(node: Node<'_, '_>, ns: Ns, local: &str) -> bool {
    node.is_element() && ns_of(node) == ns && node.tag_name().name() == local
}

pub(crate) fn elements<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(Node::is_element)
}

/// Trimmed concatenation of the direct text children.
pub(crate) fn text(node: Node<'_, '_>) -> String {
    node.children()
        .filter(Node::is_text)
        .filter_map(|t| t.text())
        .collect::<String>()
        .trim()
        .to_owned()
}

pub(crate) fn line_of(doc: &Document<'_>, node: Node<'_, '_>) -> u32 {
    doc.text_pos_at(node.range().start).row
}

/// `parent/Local[n]`, where `n` counts same-named preceding siblings.
pub(crate) fn child_path(parent: &str, node: Node<'_, '_>) -> String {
    let name = node.tag_name().name();
    let n = std::iter::successors(node.prev_sibling(), |s| s.prev_sibling())
        .filter(|s| s.is_element() && s.tag_name().name() == name)
        .count()
        + 1;
    format!("{parent}/{name}[{n}]")
}

/// Attributes not in `known` (and not namespaced), for warning records.
pub(crate) fn unknown_attributes<'a>(
    node: Node<'a, '_>,
    known: &'a [&'a str],
) -> impl Iterator<Item = &'a str> + 'a {
    node.attributes()
        .filter(|a| a.namespace().is_none() && !known.contains(&a.name()))
        .map(|a| a.name())
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
