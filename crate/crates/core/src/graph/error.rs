use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("edge `{edge}` references missing vertex `{vertex}`")]
    MissingEndpoint { edge: String, vertex: String },

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("parse error at {}: {message}", location(*line, *column))]
    Parse {
        line: u64,
        column: Option<u64>,
        message: String,
    },
}

fn location(line: u64, column: Option<u64>) -> String {
    match column {
        Some(col) => format!("line {line}, column {col}"),
        None => format!("line {line}"),
    }
}
