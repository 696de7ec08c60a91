use std::collections::HashSet;

use super::{import, PropertyGraph};
use crate::policy::Meta;

/// Builds the source-subset graph: vertices whose label is listed in `meta`,
/// and edges whose type is listed and whose endpoints both survived.
pub fn build_source_subset(meta: &Meta, source: &PropertyGraph) -> PropertyGraph {
    let labels: HashSet<&str> = meta.vertex_entities.iter().map(String::as_str).collect();
    let types: HashSet<&str> = meta.edge_entities.iter().map(String::as_str).collect();

    let vertices: Vec<_> = source
        .vertices()
        .filter(|v| labels.contains(v.label.as_str()))
        .cloned()
        .collect();
    let kept: HashSet<&str> = vertices.iter().map(|v| v.id.as_str()).collect();
    let edges: Vec<_> = source
        .edges()
        .filter(|e| {
            types.contains(e.edge_type.as_str())
                && kept.contains(e.from.as_str())
                && kept.contains(e.to.as_str())
        })
        .cloned()
        .collect();

    import::assemble(vertices, edges).expect("subset of a valid graph is valid")
}
