use crate::policy::{
    ConditionExpr, ConstraintSet, Direction, EdgeCategory, EdgeLength, MatchFunction, Pattern,
    PathEdgeSpec, PathVertexSpec, VertexCategory,
};
use crate::request::{ElementType, PathCategory, PathElement};

use super::CompileError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexStep {
    pub binding: Option<String>,
    pub label: Option<String>,
    pub constraints: ConstraintSet,
    /// `(property, text)` pairs that must all hold; set for request paths.
    pub pins: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStep {
    pub binding: Option<String>,
    pub edge_type: Option<String>,
    pub direction: Direction,
    pub min_len: u32,
    /// `None` is unbounded; the matcher applies its length cap.
    pub max_len: Option<u32>,
    pub constraints: ConstraintSet,
    pub pins: Vec<(String, String)>,
}

impl Default for EdgeStep {
    fn default() -> Self {
        EdgeStep {
            binding: None,
            edge_type: None,
            direction: Direction::Any,
            min_len: 1,
            max_len: Some(1),
            constraints: ConstraintSet::default(),
            pins: Vec::new(),
        }
    }
}

impl EdgeStep {
    pub fn is_single_hop(&self) -> bool {
        self.min_len == 1 && self.max_len == Some(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step<'a> {
    Vertex(&'a VertexStep),
    Edge(&'a EdgeStep),
}

/// Alternating steps: `vertices[i]` and `vertices[i + 1]` are joined by
/// `edges[i]`. Step positions count both kinds, so vertex `i` sits at
/// position `2 * i` and edge `i` at `2 * i + 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QueryPlan {
    pub vertices: Vec<VertexStep>,
    pub edges: Vec<EdgeStep>,
    pub filter: Option<ConditionExpr>,
    pub subject_index: usize,
    pub resource_index: usize,
}

impl QueryPlan {
    pub fn step_count(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn steps(&self) -> impl Iterator<Item = Step<'_>> + '_ {
        self.vertices.iter().enumerate().flat_map(move |(i, v)| {
            std::iter::once(Step::Vertex(v)).chain(self.edges.get(i).map(Step::Edge))
        })
    }
}

fn length_range(length: EdgeLength) -> (u32, Option<u32>) {
    match length {
        EdgeLength::Single | EdgeLength::Range { min: None, max: None } => (1, Some(1)),
        EdgeLength::Exact(n) => (n, Some(n)),
        EdgeLength::Range { min, max } => (min.unwrap_or(1), max),
    }
}

fn check_match_functions(set: &ConstraintSet) -> Result<(), CompileError> {
    match set
        .all_matches()
        .find(|m| MatchFunction::from_uri(&m.match_id).is_none())
    {
        Some(m) => Err(CompileError::UnsupportedMatchFunction(m.match_id.clone())),
        None => Ok(()),
    }
}

fn vertex_step(v: &PathVertexSpec) -> Result<VertexStep, CompileError> {
    check_match_functions(&v.constraints)?;
    Ok(VertexStep {
        binding: v.vertex_id.clone(),
        label: v.label.clone(),
        constraints: v.constraints.clone(),
        pins: Vec::new(),
    })
}

fn edge_step(e: &PathEdgeSpec) -> Result<EdgeStep, CompileError> {
    check_match_functions(&e.constraints)?;
    let (min_len, max_len) = length_range(e.length);
    Ok(EdgeStep {
        binding: e.edge_id.clone(),
        edge_type: e.edge_type.clone(),
        direction: e.direction,
        min_len,
        max_len,
        constraints: e.constraints.clone(),
        pins: Vec::new(),
    })
}

/// Compiles a validated rule pattern. Fails only on match functions the
/// matcher cannot evaluate; the condition is attached unchecked.
pub fn compile_rule_pattern(
    pattern: &Pattern,
    condition: Option<&ConditionExpr>,
) -> Result<QueryPlan, CompileError> {
    let vertices = pattern
        .vertices
        .iter()
        .map(vertex_step)
        .collect::<Result<Vec<_>, _>>()?;
    let edges = pattern
        .edges
        .iter()
        .map(edge_step)
        .collect::<Result<Vec<_>, _>>()?;

    let subject_index = pattern
        .vertices
        .iter()
        .position(|v| v.category == VertexCategory::Subject)
        .map_or(0, |i| 2 * i);
    let resource_index = pattern
        .edges
        .iter()
        .position(|e| e.category == EdgeCategory::Resource)
        .map(|i| 2 * i + 1)
        .or_else(|| {
            pattern
                .vertices
                .iter()
                .position(|v| v.category == VertexCategory::Resource)
                .map(|i| 2 * i)
        })
        .unwrap_or(2 * pattern.vertices.len().saturating_sub(1));

    Ok(QueryPlan {
        vertices,
        edges,
        filter: condition.cloned(),
        subject_index,
        resource_index,
    })
}

/// One vertex step per vertex group, joined by undirected single hops. A
/// final edge group becomes the last edge step, followed by an open vertex.
pub fn compile_request_path(path: &[PathElement]) -> QueryPlan {
    let mut plan = QueryPlan::default();
    for (i, el) in path.iter().enumerate() {
        match el.kind {
            ElementType::Vertex => {
                if i > 0 {
                    plan.edges.push(EdgeStep::default());
                }
                if el.category == PathCategory::Resource {
                    plan.resource_index = 2 * plan.vertices.len();
                }
                plan.vertices.push(VertexStep {
                    pins: el.pins.clone(),
                    ..VertexStep::default()
                });
            }
            ElementType::Edge => {
                if plan.vertices.is_empty() {
                    plan.vertices.push(VertexStep::default());
                }
                plan.resource_index = 2 * plan.edges.len() + 1;
                plan.edges.push(EdgeStep {
                    pins: el.pins.clone(),
                    ..EdgeStep::default()
                });
                plan.vertices.push(VertexStep::default());
            }
        }
    }
    plan
}
