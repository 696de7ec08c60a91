//! The pattern-condition function registry.
//!
//! Comparison semantics (shared by `equal`, `not-equal` and the ordering
//! functions): an absent operand makes the comparison false; two operands
//! that both read as numbers compare as floats; two non-numeric operands
//! compare as text; a numeric operand against a non-numeric one is unequal
//! and unordered. `string-equal-ignore-case` folds case before comparing.

use std::cmp::Ordering;

use crate::graph::PropertyValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    And,
    Or,
    Equal,
    GreaterThan,
    GreaterThanOrEqual,
    LessThan,
    LessThanOrEqual,
    NotEqual,
    StringEqualIgnoreCase,
    StringContains,
    StringStartsWith,
}

impl Function {
    pub const ALL: [Function; 11] = [
        Function::And,
        Function::Or,
        Function::Equal,
        Function::GreaterThan,
        Function::GreaterThanOrEqual,
        Function::LessThan,
        Function::LessThanOrEqual,
        Function::NotEqual,
        Function::StringEqualIgnoreCase,
        Function::StringContains,
        Function::StringStartsWith,
    ];

    pub fn uri(self) -> &'static str {
        match self {
            Function::And => "xacml4g:1.0:function:and",
            Function::Or => "xacml4g:1.0:function:or",
            Function::Equal => "xacml4g:1.0:function:equal",
            Function::GreaterThan => "xacml4g:1.0:function:greater-than",
            Function::GreaterThanOrEqual => "xacml4g:1.0:function:greater-than-or-equal",
            Function::LessThan => "xacml4g:1.0:function:less-than",
            Function::LessThanOrEqual => "xacml4g:1.0:function:less-than-or-equal",
            Function::NotEqual => "xacml4g:1.0:function:not-equal",
            Function::StringEqualIgnoreCase => "xacml4g:1.0:function:string-equal-ignore-case",
            Function::StringContains => "xacml4g:1.0:function:string-contains",
            Function::StringStartsWith => "xacml4g:1.0:function:string-starts-with",
        }
    }

    pub fn from_uri(uri: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.uri() == uri)
    }

    pub fn is_logical(self) -> bool {
        matches!(self, Function::And | Function::Or)
    }

    /// Infix Cypher operator. For ignore-case the emitter additionally wraps
    /// both operands in `toLower`.
    pub fn cypher_operator(self) -> &'static str {
        match self {
            Function::And => "AND",
            Function::Or => "OR",
            Function::Equal => "=",
            Function::GreaterThan => ">",
            Function::GreaterThanOrEqual => ">=",
            Function::LessThan => "<",
            Function::LessThanOrEqual => "<=",
            Function::NotEqual => "<>",
            Function::StringEqualIgnoreCase => "=",
            Function::StringContains => "CONTAINS",
            Function::StringStartsWith => "STARTS WITH",
        }
    }

    /// Folds already-evaluated boolean arguments. Empty `and` is true,
    /// empty `or` is false.
    pub fn fold_logical(self, args: impl IntoIterator<Item = bool>) -> bool {
        let mut args = args.into_iter();
        match self {
            Function::And => args.all(|b| b),
            Function::Or => args.any(|b| b),
            _ => false,
        }
    }

    /// Applies a binary non-logical function. `None` stands for an absent
    /// property.
    pub fn compare(self, lhs: Option<&PropertyValue>, rhs: Option<&PropertyValue>) -> bool {
        let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
            return false;
        };
        match self {
            Function::And | Function::Or => false,
            Function::StringEqualIgnoreCase => {
                lhs.as_text().to_lowercase() == rhs.as_text().to_lowercase()
            }
            Function::StringContains => lhs.as_text().contains(rhs.as_text().as_ref()),
            Function::StringStartsWith => lhs.as_text().starts_with(rhs.as_text().as_ref()),
            Function::Equal => coerced_order(lhs, rhs) == Some(Ordering::Equal),
            Function::NotEqual => coerced_order(lhs, rhs) != Some(Ordering::Equal),
            Function::GreaterThan => coerced_order(lhs, rhs) == Some(Ordering::Greater),
            Function::GreaterThanOrEqual => {
                matches!(coerced_order(lhs, rhs), Some(Ordering::Greater | Ordering::Equal))
            }
            Function::LessThan => coerced_order(lhs, rhs) == Some(Ordering::Less),
            Function::LessThanOrEqual => {
                matches!(coerced_order(lhs, rhs), Some(Ordering::Less | Ordering::Equal))
            }
        }
    }
}

/// `None` means the operands are incomparable (numeric against non-numeric).
fn coerced_order(lhs: &PropertyValue, rhs: &PropertyValue) -> Option<Ordering> {
    match (lhs.as_number(), rhs.as_number()) {
        (Some(a), Some(b)) => a.partial_cmp(&b),
        (None, None) => Some(lhs.as_text().as_ref().cmp(rhs.as_text().as_ref())),
        _ => None,
    }
}
