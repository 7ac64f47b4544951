use thiserror::Error;

use crate::charts::VertexId;

/// Malformed expression text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// Byte offset into the input where the error was detected.
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid action name {0:?}")]
    InvalidAction(String),

    #[error("chart generation exceeded the vertex cap of {cap}")]
    StateExplosion { cap: usize },

    #[error("transition {source_expr} -{label}-> {target} derived with markings {first} and {second}")]
    AmbiguousMarking { source_expr: String, label: String, target: String, first: String, second: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown transition {0}")]
    UnknownTransition(usize),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("entry set is empty")]
    EmptyEntrySet,

    #[error("transition {transition} does not depart from vertex {vertex}")]
    ForeignEntry { vertex: VertexId, transition: usize },

    #[error("not a loop subchart: {0}")]
    NotALoopSubchart(String),

    #[error("LEE search exceeded its budget of {budget} nodes")]
    SearchBudgetExceeded { budget: usize },

    #[error("trace replay failed at step {step}: {reason}")]
    TraceReplay { step: usize, reason: String },

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("combined size {size} exceeds oracle cap {cap}")]
    CapExceeded { size: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
