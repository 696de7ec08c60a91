use crate::graph::PropertyValue;
use crate::uri;

/// Vertex labels and edge types a policy needs in the subset graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Meta {
    pub vertex_entities: Vec<String>,
    pub edge_entities: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchFunction {
    StringEqual,
    StringEqualIgnoreCase,
}

impl MatchFunction {
    pub fn from_uri(uri: &str) -> Option<MatchFunction> {
        match uri {
            uri::STRING_EQUAL => Some(MatchFunction::StringEqual),
            uri::STRING_EQUAL_IGNORE_CASE => Some(MatchFunction::StringEqualIgnoreCase),
            _ => None,
        }
    }

    pub fn uri(self) -> &'static str {
        match self {
            MatchFunction::StringEqual => uri::STRING_EQUAL,
            MatchFunction::StringEqualIgnoreCase => uri::STRING_EQUAL_IGNORE_CASE,
        }
    }

    pub fn matches(self, literal: &str, value: &str) -> bool {
        match self {
            MatchFunction::StringEqual => literal == value,
            MatchFunction::StringEqualIgnoreCase => literal.to_lowercase() == value.to_lowercase(),
        }
    }
}

/// One `Match`: compare `literal` with the attribute `attribute_id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchConstraint {
    pub match_id: String,
    pub literal: String,
    pub attribute_id: String,
    pub category: String,
}

impl MatchConstraint {
    pub fn string_equal(attribute_id: &str, category: &str, literal: &str) -> Self {
        MatchConstraint {
            match_id: uri::STRING_EQUAL.to_owned(),
            literal: literal.to_owned(),
            attribute_id: attribute_id.to_owned(),
            category: category.to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AllOf {
    pub matches: Vec<MatchConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnyOf {
    pub all_of: Vec<AllOf>,
}

/// XACML target-shaped constraints: every `AnyOf` must hold, an `AnyOf`
/// holds when one of its `AllOf`s holds, an `AllOf` holds when all of its
/// matches hold. Empty means unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    pub any_of: Vec<AnyOf>,
}

impl ConstraintSet {
    pub fn is_empty(&self) -> bool {
        self.any_of.is_empty()
    }

    /// Evaluates the set, asking `matches` for each individual constraint.
    pub fn evaluate<E>(
        &self,
        mut matches: impl FnMut(&MatchConstraint) -> Result<bool, E>,
    ) -> Result<bool, E> {
        for any in &self.any_of {
            let mut any_holds = false;
            for all in &any.all_of {
                let mut all_hold = true;
                for m in &all.matches {
                    if !matches(m)? {
                        all_hold = false;
                        break;
                    }
                }
                if all_hold {
                    any_holds = true;
                    break;
                }
            }
            if !any_holds {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// When the set is a plain conjunction of case-sensitive equalities,
    /// returns `(attribute, literal)` pairs usable as index keys and as
    /// inline Cypher property maps.
    pub fn required_equalities(&self) -> Option<Vec<(&str, &str)>> {
        let mut out = Vec::new();
        for any in &self.any_of {
            let [all] = any.all_of.as_slice() else {
                return None;
            };
            for m in &all.matches {
                if m.match_id != uri::STRING_EQUAL {
                    return None;
                }
                out.push((m.attribute_id.as_str(), m.literal.as_str()));
            }
        }
        Some(out)
    }

    pub fn all_matches(&self) -> impl Iterator<Item = &MatchConstraint> + '_ {
        self.any_of
            .iter()
            .flat_map(|a| &a.all_of)
            .flat_map(|a| &a.matches)
    }

    /// A set holding one `AnyOf`/`AllOf` with the given matches.
    pub fn conjunction(matches: Vec<MatchConstraint>) -> Self {
        ConstraintSet {
            any_of: vec![AnyOf {
                all_of: vec![AllOf { matches }],
            }],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexCategory {
    Subject,
    Path,
    Resource,
}

impl VertexCategory {
    pub fn uri(self) -> &'static str {
        match self {
            VertexCategory::Subject => uri::SUBJECT_CATEGORY,
            VertexCategory::Path => uri::PATH_VERTEX_CATEGORY,
            VertexCategory::Resource => uri::RESOURCE_CATEGORY,
        }
    }

    pub fn from_uri(s: &str) -> Option<Self> {
        match s {
            uri::SUBJECT_CATEGORY => Some(VertexCategory::Subject),
            uri::PATH_VERTEX_CATEGORY => Some(VertexCategory::Path),
            uri::RESOURCE_CATEGORY => Some(VertexCategory::Resource),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeCategory {
    Path,
    Resource,
}

impl EdgeCategory {
    pub fn uri(self) -> &'static str {
        match self {
            EdgeCategory::Path => uri::PATH_EDGE_CATEGORY,
            EdgeCategory::Resource => uri::RESOURCE_CATEGORY,
        }
    }

    pub fn from_uri(s: &str) -> Option<Self> {
        match s {
            uri::PATH_EDGE_CATEGORY => Some(EdgeCategory::Path),
            uri::RESOURCE_CATEGORY => Some(EdgeCategory::Resource),
            _ => None,
        }
    }
}

/// Orientation of an edge relative to the left-to-right path order.
/// `From` means the edge points from the preceding vertex to the next one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    From,
    To,
    #[default]
    Any,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::From => "from",
            Direction::To => "to",
            Direction::Any => "any",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "from" => Some(Direction::From),
            "to" => Some(Direction::To),
            "any" => Some(Direction::Any),
            _ => None,
        }
    }
}

/// Hop count of a path edge. `Length` and `MinLength`/`MaxLength` are
/// mutually exclusive in the policy syntax, which this enum mirrors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeLength {
    #[default]
    Single,
    Exact(u32),
    Range { min: Option<u32>, max: Option<u32> },
}

impl EdgeLength {
    pub fn is_single_hop(self) -> bool {
        match self {
            EdgeLength::Single | EdgeLength::Exact(1) => true,
            EdgeLength::Range { min, max } => min.unwrap_or(1) == 1 && max == Some(1),
            EdgeLength::Exact(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathVertexSpec {
    pub vertex_id: Option<String>,
    pub label: Option<String>,
    pub category: VertexCategory,
    pub constraints: ConstraintSet,
}

impl PathVertexSpec {
    pub fn new(category: VertexCategory) -> Self {
        PathVertexSpec {
            vertex_id: None,
            label: None,
            category,
            constraints: ConstraintSet::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathEdgeSpec {
    pub edge_id: Option<String>,
    pub edge_type: Option<String>,
    pub category: EdgeCategory,
    pub direction: Direction,
    pub length: EdgeLength,
    pub constraints: ConstraintSet,
}

impl Default for PathEdgeSpec {
    fn default() -> Self {
        PathEdgeSpec {
            edge_id: None,
            edge_type: None,
            category: EdgeCategory::Path,
            direction: Direction::Any,
            length: EdgeLength::Single,
            constraints: ConstraintSet::default(),
        }
    }
}

/// One element of a (possibly nested) `Path` as written in the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathItem {
    Vertex(PathVertexSpec),
    Edge(PathEdgeSpec),
    Path(Vec<PathItem>),
}

/// A rule pattern, flattened: `vertices[i]` and `vertices[i + 1]` are
/// joined by `edges[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub pattern_id: String,
    pub vertices: Vec<PathVertexSpec>,
    pub edges: Vec<PathEdgeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternStep<'a> {
    Vertex(&'a PathVertexSpec),
    Edge(&'a PathEdgeSpec),
}

impl Pattern {
    /// Elements in path order: V, E, V, ..., V.
    pub fn steps(&self) -> impl Iterator<Item = PatternStep<'_>> + '_ {
        self.vertices.iter().enumerate().flat_map(move |(i, v)| {
            std::iter::once(PatternStep::Vertex(v)).chain(self.edges.get(i).map(PatternStep::Edge))
        })
    }
}

/// Flattens a nested path into alternating vertex and edge lists. Nesting
/// is pure concatenation; the result must alternate V, E, ..., V.
pub fn flatten_pattern(
    items: &[PathItem],
) -> Result<(Vec<PathVertexSpec>, Vec<PathEdgeSpec>), String> {
    fn walk<'a>(items: &'a [PathItem], out: &mut Vec<&'a PathItem>) {
        for item in items {
            match item {
                PathItem::Path(inner) => walk(inner, out),
                leaf => out.push(leaf),
            }
        }
    }
    let mut leaves = Vec::new();
    walk(items, &mut leaves);

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (pos, item) in leaves.iter().enumerate() {
        match (pos % 2, item) {
            (0, PathItem::Vertex(v)) => vertices.push(v.clone()),
            (1, PathItem::Edge(e)) => edges.push(e.clone()),
            (0, _) => return Err(format!("element {} of the path must be a Vertex", pos + 1)),
            _ => return Err(format!("element {} of the path must be an Edge", pos + 1)),
        }
    }
    if vertices.len() < 2 || edges.len() + 1 != vertices.len() {
        return Err("a path must start and end with a Vertex and contain at least one Edge".into());
    }
    Ok((vertices, edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingKind {
    Vertex,
    Edge,
}

/// Pattern-condition expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum ConditionExpr {
    Apply {
        function_id: String,
        args: Vec<ConditionExpr>,
    },
    /// Property `attribute_id` of the pattern element bound to `binding`.
    Designator {
        attribute_id: String,
        category: String,
        binding: String,
        kind: BindingKind,
    },
    Literal(PropertyValue),
}

impl ConditionExpr {
    pub fn apply(function_id: &str, args: Vec<ConditionExpr>) -> Self {
        ConditionExpr::Apply {
            function_id: function_id.to_owned(),
            args,
        }
    }

    pub fn edge_property(binding: &str, attribute_id: &str) -> Self {
        ConditionExpr::Designator {
            attribute_id: attribute_id.to_owned(),
            category: uri::PATH_EDGE_CATEGORY.to_owned(),
            binding: binding.to_owned(),
            kind: BindingKind::Edge,
        }
    }

    pub fn vertex_property(binding: &str, attribute_id: &str) -> Self {
        ConditionExpr::Designator {
            attribute_id: attribute_id.to_owned(),
            category: uri::PATH_VERTEX_CATEGORY.to_owned(),
            binding: binding.to_owned(),
            kind: BindingKind::Vertex,
        }
    }

    pub fn text(s: &str) -> Self {
        ConditionExpr::Literal(PropertyValue::Text(s.to_owned()))
    }

    /// Pre-order walk over the tree.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ConditionExpr)) {
        f(self);
        if let ConditionExpr::Apply { args, .. } = self {
            for a in args {
                a.visit(f);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    Permit,
    Deny,
}

impl Effect {
    pub fn as_str(self) -> &'static str {
        match self {
            Effect::Permit => "Permit",
            Effect::Deny => "Deny",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub rule_id: String,
    pub effect: Effect,
    pub target: Option<ConstraintSet>,
    pub pattern: Option<Pattern>,
    pub pattern_condition: Option<ConditionExpr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    pub policy_id: String,
    pub rule_combining_alg: String,
    pub target: Option<ConstraintSet>,
    pub meta: Option<Meta>,
    /// Document order.
    pub rules: Vec<Rule>,
}

impl Policy {
    pub fn rule(&self, rule_id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.rule_id == rule_id)
    }
}
