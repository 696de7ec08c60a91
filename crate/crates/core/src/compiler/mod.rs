//! Compilation of rule patterns and request paths into query plans, the
//! function registry, and Cypher emission.

mod cypher;
mod functions;
mod plan;

pub use cypher::emit_cypher;
pub use functions::Function;
pub use plan::{
    compile_request_path, compile_rule_pattern, EdgeStep, QueryPlan, Step, VertexStep,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unsupported match function `{0}`")]
    UnsupportedMatchFunction(String),
    #[error("function `{function}` expects {expected} argument(s), got {got}")]
    Arity {
        function: String,
        expected: usize,
        got: usize,
    },
}

pub fn translate_function(uri: &str) -> Result<Function, CompileError> {
    Function::from_uri(uri).ok_or_else(|| CompileError::UnknownFunction(uri.to_owned()))
}
