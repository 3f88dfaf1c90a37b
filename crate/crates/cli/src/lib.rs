//! Command-line front end for the `supergossip` model checker: query
//! execution, reports (ascii and JSON), knowledge-table rendering and
//! line-oriented scenario files.

pub mod query;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use supergossip::GossipError;
use thiserror::Error;

pub use query::{run_query, QueryKind, QuerySpec, Setup};
pub use report::{render_table, Report, TableFormat};
pub use scenario::{parse_scenario, run_scenario, Scenario};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Some `expect` did not match.
pub const EXIT_MISMATCH: i32 = 1;
/// Bad command line, scenario syntax or query arguments.
pub const EXIT_USAGE: i32 = 2;
/// I/O failures and other internal errors.
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("query {index}: {source}")]
    Query {
        index: usize,
        #[source]
        source: GossipError,
    },

    #[error("query {index}: {message}")]
    QueryArgs { index: usize, message: String },

    #[error(transparent)]
    Gossip(#[from] GossipError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Parse { .. }
            | CliError::Query { .. }
            | CliError::QueryArgs { .. }
            | CliError::Gossip(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Json(_) => EXIT_INTERNAL,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
