use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{GraphError, PropertyValue};

pub type Properties = BTreeMap<String, PropertyValue>;

/// Dense index of a vertex inside one [`PropertyGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexIdx(pub u32);

/// Dense index of an edge inside one [`PropertyGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIdx(pub u32);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    pub label: String,
    #[serde(default)]
    pub properties: Properties,
}

impl VertexRecord {
    pub fn new(id: impl Into<String>, label: impl Into<String>) -> Self {
        VertexRecord {
            id: id.into(),
            label: label.into(),
            properties: Properties::new(),
        }
    }

    pub fn with_property(mut self, name: impl Into<String>, value: impl Into<PropertyValue>) -> Self {
        self.properties.insert(name.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    #[serde(rename = "type")]
    pub edge_type: String,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub properties: Properties,
}

impl EdgeRecord {
    pub fn new(
        id: impl Into<String>,
        edge_type: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
    ) -> Self {
        EdgeRecord {
            id: id.into(),
            edge_type: edge_type.into(),
            from: from.into(),
            to: to.into(),
            properties: Properties::new(),
        }
    }

    pub fn with_property(mut self, name: impl Into<String>, value: impl Into<PropertyValue>) -> Self {
        self.properties.insert(name.into(), value.into());
        self
    }
}

type PropertyKey = (String, String);

/// In-memory property graph with one label per vertex and one type per edge.
///
/// Every index list (adjacency, label, type, property) is kept sorted by
/// element id so that traversals enumerate candidates in a deterministic,
/// id-lexicographic order.
#[derive(Debug, Clone, Default)]
pub struct PropertyGraph {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    endpoints: Vec<(VertexIdx, VertexIdx)>,
    vertex_ids: BTreeMap<String, VertexIdx>,
    edge_ids: BTreeMap<String, EdgeIdx>,
    outgoing: Vec<Vec<EdgeIdx>>,
    incoming: Vec<Vec<EdgeIdx>>,
    by_label: HashMap<String, Vec<VertexIdx>>,
    by_type: HashMap<String, Vec<EdgeIdx>>,
    vertex_props: HashMap<PropertyKey, Vec<VertexIdx>>,
    edge_props: HashMap<PropertyKey, Vec<EdgeIdx>>,
}

// `item` is never already in `list`, so `id_of` is only called on stored elements.
fn insert_sorted<'a, I: Copy>(list: &mut Vec<I>, item: I, id: &str, id_of: impl Fn(I) -> &'a str) {
    // Fast path: imports arrive in id order.
    match list.last() {
        Some(&last) if id_of(last) < id => list.push(item),
        None => list.push(item),
        _ => {
            let pos = list.partition_point(|&i| id_of(i) < id);
            list.insert(pos, item);
        }
    }
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, vertex: VertexRecord) -> Result<VertexIdx, GraphError> {
        if vertex.id.is_empty() {
            return Err(GraphError::InvalidRecord("vertex id is empty".into()));
        }
        if vertex.label.is_empty() {
            return Err(GraphError::InvalidRecord(format!(
                "vertex `{}` has an empty label",
                vertex.id
            )));
        }
        if self.vertex_ids.contains_key(&vertex.id) {
            return Err(GraphError::DuplicateVertex(vertex.id));
        }
        let idx = VertexIdx(self.vertices.len() as u32);
        let vertices = &self.vertices;
        let id_of = |i: VertexIdx| vertices[i.0 as usize].id.as_str();

        insert_sorted(
            self.by_label.entry(vertex.label.clone()).or_default(),
            idx,
            &vertex.id,
            id_of,
        );
        for (name, value) in &vertex.properties {
            insert_sorted(
                self.vertex_props
                    .entry((name.clone(), value.as_text().into_owned()))
                    .or_default(),
                idx,
                &vertex.id,
                id_of,
            );
        }
        self.vertex_ids.insert(vertex.id.clone(), idx);
        self.outgoing.push(Vec::new());
        self.incoming.push(Vec::new());
        self.vertices.push(vertex);
        Ok(idx)
    }

    pub fn add_edge(&mut self, edge: EdgeRecord) -> Result<EdgeIdx, GraphError> {
        if edge.id.is_empty() {
            return Err(GraphError::InvalidRecord("edge id is empty".into()));
        }
        if edge.edge_type.is_empty() {
            return Err(GraphError::InvalidRecord(format!(
                "edge `{}` has an empty type",
                edge.id
            )));
        }
        if self.edge_ids.contains_key(&edge.id) {
            return Err(GraphError::DuplicateEdge(edge.id));
        }
        let missing = |vertex: &str| GraphError::MissingEndpoint {
            edge: edge.id.clone(),
            vertex: vertex.to_owned(),
        };
        let from = *self.vertex_ids.get(&edge.from).ok_or_else(|| missing(&edge.from))?;
        let to = *self.vertex_ids.get(&edge.to).ok_or_else(|| missing(&edge.to))?;

        let idx = EdgeIdx(self.edges.len() as u32);
        let edges = &self.edges;
        let id_of = |i: EdgeIdx| edges[i.0 as usize].id.as_str();
        insert_sorted(&mut self.outgoing[from.0 as usize], idx, &edge.id, id_of);
        insert_sorted(&mut self.incoming[to.0 as usize], idx, &edge.id, id_of);
        insert_sorted(
            self.by_type.entry(edge.edge_type.clone()).or_default(),
            idx,
            &edge.id,
            id_of,
        );
        for (name, value) in &edge.properties {
            insert_sorted(
                self.edge_props
                    .entry((name.clone(), value.as_text().into_owned()))
                    .or_default(),
                idx,
                &edge.id,
                id_of,
            );
        }
        self.edge_ids.insert(edge.id.clone(), idx);
        self.endpoints.push((from, to));
        self.edges.push(edge);
        Ok(idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, idx: VertexIdx) -> &VertexRecord {
        &self.vertices[idx.0 as usize]
    }

    pub fn edge(&self, idx: EdgeIdx) -> &EdgeRecord {
        &self.edges[idx.0 as usize]
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<VertexIdx> {
        self.vertex_ids.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<EdgeIdx> {
        self.edge_ids.get(id).copied()
    }

    /// `(from, to)` of an edge.
    pub fn endpoints(&self, idx: EdgeIdx) -> (VertexIdx, VertexIdx) {
        self.endpoints[idx.0 as usize]
    }

    /// Vertex indexes in id order.
    pub fn vertex_indices(&self) -> impl Iterator<Item = VertexIdx> + '_ {
        self.vertex_ids.values().copied()
    }

    /// Edge indexes in id order.
    pub fn edge_indices(&self) -> impl Iterator<Item = EdgeIdx> + '_ {
        self.edge_ids.values().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexRecord> + '_ {
        self.vertex_indices().map(|i| self.vertex(i))
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeRecord> + '_ {
        self.edge_indices().map(|i| self.edge(i))
    }

    pub fn outgoing(&self, v: VertexIdx) -> &[EdgeIdx] {
        &self.outgoing[v.0 as usize]
    }

    pub fn incoming(&self, v: VertexIdx) -> &[EdgeIdx] {
        &self.incoming[v.0 as usize]
    }

    pub fn vertices_with_label(&self, label: &str) -> &[VertexIdx] {
        self.by_label.get(label).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edges_with_type(&self, edge_type: &str) -> &[EdgeIdx] {
        self.by_type.get(edge_type).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Exact-match lookup on the textual rendering of a vertex property.
    pub fn vertices_with_property(&self, name: &str, text: &str) -> &[VertexIdx] {
        self.vertex_props
            .get(&(name.to_owned(), text.to_owned()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn edges_with_property(&self, name: &str, text: &str) -> &[EdgeIdx] {
        self.edge_props
            .get(&(name.to_owned(), text.to_owned()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Rebuilds adjacency from edge endpoints and compares it with the
    /// maintained lists.
    pub fn adjacency_consistent(&self) -> bool {
        let mut out = vec![Vec::new(); self.vertices.len()];
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for e in self.edge_indices() {
            let (from, to) = self.endpoints(e);
            out[from.0 as usize].push(e);
            inc[to.0 as usize].push(e);
        }
        out == self.outgoing && inc == self.incoming
    }
}

/// Two graphs are equal when they hold the same vertex and edge records,
/// regardless of insertion order.
impl PartialEq for PropertyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edge_count() == other.edge_count()
            && self.vertices().eq(other.vertices())
            && self.edges().eq(other.edges())
    }
}
