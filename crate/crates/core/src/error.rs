use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),

    #[error("edge {{{0},{1}}} is not in the graph")]
    UnknownEdge(VertexId, VertexId),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not planar")]
    NotPlanar,

    #[error("instance has {size} vertices, above the enumeration limit of {limit}")]
    SizeGuard { size: usize, limit: usize },

    #[error("no feasible set within the requested cardinality bound")]
    Infeasible,

    #[error("invalid decomposition: {0}")]
    Decomposition(String),

    #[error("malformed coloring state: {0}")]
    MalformedState(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::SelfLoop { .. } => "self_loop",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::UnknownEdge(..) => "unknown_edge",
            Error::Disconnected => "disconnected",
            Error::NotPlanar => "not_planar",
            Error::SizeGuard { .. } => "size_guard",
            Error::Infeasible => "infeasible",
            Error::Decomposition(_) => "decomposition",
            Error::MalformedState(_) => "malformed_state",
            Error::Domain(_) => "domain",
            Error::Internal(_) => "internal",
            Error::Json(_) => "json",
        }
    }

    /// True for errors caused by the caller's input rather than a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::MalformedState(_))
    }
}
