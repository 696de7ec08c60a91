use crate::compiler::Function;
use crate::graph::{Properties, PropertyGraph, PropertyValue};
use crate::policy::{BindingKind, ConditionExpr};

use super::{MatchError, PathBinding};

/// Evaluates `expr` with `resolve` mapping a binding to the properties of
/// the element it names.
pub(crate) fn eval_with<'a>(
    expr: &'a ConditionExpr,
    resolve: &dyn Fn(&str, BindingKind) -> Option<&'a Properties>,
) -> Result<bool, MatchError> {
    let ConditionExpr::Apply { function_id, args } = expr else {
        return Err(MatchError::NotBoolean);
    };
    let f = Function::from_uri(function_id)
        .ok_or_else(|| MatchError::UnknownFunction(function_id.clone()))?;
    if f.is_logical() {
        // Short-circuit in argument order.
        for a in args {
            let b = eval_with(a, resolve)?;
            match (f, b) {
                (Function::And, false) => return Ok(false),
                (Function::Or, true) => return Ok(true),
                _ => {}
            }
        }
        return Ok(f == Function::And);
    }
    let [lhs, rhs] = args.as_slice() else {
        return Err(MatchError::Arity {
            function: function_id.clone(),
            got: args.len(),
        });
    };
    let lhs = operand(lhs, resolve)?;
    let rhs = operand(rhs, resolve)?;
    Ok(f.compare(lhs, rhs))
}

fn operand<'a>(
    expr: &'a ConditionExpr,
    resolve: &dyn Fn(&str, BindingKind) -> Option<&'a Properties>,
) -> Result<Option<&'a PropertyValue>, MatchError> {
    match expr {
        ConditionExpr::Literal(v) => Ok(Some(v)),
        ConditionExpr::Designator {
            attribute_id,
            binding,
            kind,
            ..
        } => {
            let props = resolve(binding, *kind)
                .ok_or_else(|| MatchError::UnresolvedBinding(binding.clone()))?;
            Ok(props.get(attribute_id))
        }
        ConditionExpr::Apply { .. } => Err(MatchError::NotScalar),
    }
}

/// Evaluates a pattern condition against one binding. An absent property
/// makes the comparison that mentions it false.
pub fn eval_filter(
    binding: &PathBinding,
    expr: &ConditionExpr,
    graph: &PropertyGraph,
) -> Result<bool, MatchError> {
    let resolve = |name: &str, kind: BindingKind| {
        let id = binding.vars.get(name)?;
        match kind {
            BindingKind::Vertex => graph.vertex_by_id(id).map(|v| &graph.vertex(v).properties),
            BindingKind::Edge => graph.edge_by_id(id).map(|e| &graph.edge(e).properties),
        }
    };
    eval_with(expr, &resolve)
}
