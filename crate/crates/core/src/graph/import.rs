//! Flat-file importers and the JSON exporter.
//!
//! JSON layout:
//! `{"vertices":[{"id","label","properties"}],"edges":[{"id","type","from","to","properties"}]}`
//!
//! CSV comes as two files: vertices with header `_id,_label,<prop...>` and
//! edges with header `_id,_type,_from,_to,<prop...>`. Empty cells mean the
//! property is absent.
//!
//! Both importers read every record first and link afterwards, so edges may
//! precede their endpoints in the input.

use serde::{Deserialize, Serialize};

use super::{EdgeRecord, GraphError, Properties, PropertyGraph, PropertyValue, VertexRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Csv,
}

impl std::str::FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(GraphFormat::Json),
            "csv" => Ok(GraphFormat::Csv),
            other => Err(format!("unknown graph format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    #[serde(default)]
    vertices: Vec<VertexRecord>,
    #[serde(default)]
    edges: Vec<EdgeRecord>,
}

/// Links fully-read records into a graph. Records are inserted in id order,
/// which keeps every index append-only.
pub fn assemble(
    mut vertices: Vec<VertexRecord>,
    mut edges: Vec<EdgeRecord>,
) -> Result<PropertyGraph, GraphError> {
    vertices.sort_by(|a, b| a.id.cmp(&b.id));
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    let mut graph = PropertyGraph::new();
    for v in vertices {
        graph.add_vertex(v)?;
    }
    for e in edges {
        graph.add_edge(e)?;
    }
    Ok(graph)
}

pub fn load_json(text: &str) -> Result<PropertyGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line() as u64,
        column: Some(e.column() as u64),
        message: e.to_string(),
    })?;
    assemble(file.vertices, file.edges)
}

/// Serializes the graph in the JSON layout, records ordered by id.
pub fn to_json(graph: &PropertyGraph) -> String {
    let file = GraphFile {
        vertices: graph.vertices().cloned().collect(),
        edges: graph.edges().cloned().collect(),
    };
    serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
}

fn csv_error(err: csv::Error) -> GraphError {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    GraphError::Parse {
        line,
        column: None,
        message: err.to_string(),
    }
}

struct CsvTable {
    header: Vec<String>,
    rows: Vec<(u64, Vec<String>)>,
}

fn read_csv(text: &str, required: &[&str]) -> Result<CsvTable, GraphError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.len() < required.len() || header.iter().zip(required).any(|(h, r)| h != r) {
        return Err(GraphError::Parse {
            line: 1,
            column: None,
            message: format!("header must start with `{}`", required.join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, record.iter().map(str::to_owned).collect()));
    }
    Ok(CsvTable { header, rows })
}

fn csv_properties(header: &[String], row: &[String], skip: usize) -> Properties {
    header
        .iter()
        .zip(row)
        .skip(skip)
        .filter(|(_, cell)| !cell.is_empty())
        .map(|(name, cell)| (name.clone(), PropertyValue::from_csv_cell(cell)))
        .collect()
}

pub fn load_csv(vertices_text: &str, edges_text: &str) -> Result<PropertyGraph, GraphError> {
    let vt = read_csv(vertices_text, &["_id", "_label"])?;
    let et = read_csv(edges_text, &["_id", "_type", "_from", "_to"])?;

    let vertices = vt
        .rows
        .iter()
        .map(|(line, row)| {
            if row.len() < 2 {
                return Err(GraphError::Parse {
                    line: *line,
                    column: None,
                    message: "vertex row needs `_id` and `_label`".into(),
                });
            }
            Ok(VertexRecord {
                id: row[0].clone(),
                label: row[1].clone(),
                properties: csv_properties(&vt.header, row, 2),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let edges = et
        .rows
        .iter()
        .map(|(line, row)| {
            if row.len() < 4 {
                return Err(GraphError::Parse {
                    line: *line,
                    column: None,
                    message: "edge row needs `_id`, `_type`, `_from` and `_to`".into(),
                });
            }
            Ok(EdgeRecord {
                id: row[0].clone(),
                edge_type: row[1].clone(),
                from: row[2].clone(),
                to: row[3].clone(),
                properties: csv_properties(&et.header, row, 4),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    assemble(vertices, edges)
}
