use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("statistics undefined: {0}")]
    UndefinedStats(String),

    #[error("modularity undefined for a graph without edges")]
    UndefinedModularity,

    #[error("line {line}: unknown node label `{label}`")]
    UnknownLabel { line: usize, label: String },

    #[error("line {line}: node `{label}` assigned twice")]
    DuplicateAssignment { line: usize, label: String },

    #[error("partition misses {} node(s): {}", .0.len(), .0.join(", "))]
    MissingNodes(Vec<String>),

    #[error("partition covers {partition} nodes but graph has {graph}")]
    PartitionMismatch { partition: usize, graph: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("empty ballot list")]
    NoBallots,

    #[error("cell {cell}: missing measure {measure}")]
    IncompleteCell { cell: String, measure: String },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{}: file not found", .0.display())]
    MissingFile(PathBuf),

    #[error("empty table: {0}")]
    EmptyTable(String),

    #[error("cell {cell}: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
