//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RcpError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no usable edges or nodes")]
    EmptyInput,

    #[error("operation requires a non-empty graph")]
    EmptyGraph,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("unknown node label {label:?}{}", near_matches_suffix(.near_matches))]
    UnknownLabel {
        label: String,
        near_matches: Vec<String>,
    },

    #[error("graph has {nodes} nodes, exceeding the oracle cap of {cap}")]
    CapExceeded { nodes: usize, cap: usize },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn near_matches_suffix(matches: &[String]) -> String {
    if matches.is_empty() {
        String::new()
    } else {
        format!(" (did you mean one of: {}?)", matches.join(", "))
    }
}

pub type Result<T> = std::result::Result<T, RcpError>;
