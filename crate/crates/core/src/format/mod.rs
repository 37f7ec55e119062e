//! Text formats: signature files, JSON documents for nets and bigraphs,
//! and Graphviz export.

mod bigfile;
mod dot;
mod netfile;
mod sigfile;

use thiserror::Error;

use crate::bigraph::BigraphError;
use crate::net::NetError;
use crate::theory::SignatureError;

pub use bigfile::{parse_bigraph, serialize_bigraph};
pub use dot::{bigraph_dot, net_dot};
pub use netfile::{parse_net, serialize_net};
pub use sigfile::{parse_signature, serialize_signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Bigraph(#[from] BigraphError),
}

impl FormatError {
    /// Whether the input could not be read at all, as opposed to being
    /// well formed but invalid.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, FormatError::Syntax { .. } | FormatError::Schema(_) | FormatError::Signature(_))
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax { line: e.line(), message: e.to_string() }
    }
}
