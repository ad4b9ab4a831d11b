use thiserror::Error;

use crate::graph::Node;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("node {node} is out of range 1..={n}")]
    NodeOutOfRange { node: Node, n: usize },
    #[error("graph has {0} nodes; at most {max} are supported", max = crate::nodeset::MAX_NODES)]
    TooManyNodes(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(Node),
    #[error("duplicate edge {0}->{1}")]
    DuplicateEdge(Node, Node),
    #[error("graph contains a directed cycle through node {0}")]
    Cycle(Node),
    #[error("edge {0}->{1} is not an edge of the graph")]
    MissingEdge(Node, Node),
    #[error("not a path of the graph: {0}")]
    InvalidPath(String),
    #[error("weight support does not match the edge set: {0}")]
    WeightSupport(String),
    #[error("invalid CI statement: {0}")]
    InvalidStatement(String),
    #[error("node sets are not pairwise disjoint")]
    NotDisjoint,
    #[error("weight matrix is not generic: {0}")]
    NonGeneric(String),
    #[error("path {0} is not one of several tied critical paths")]
    NotTiedCritical(String),
    #[error("path {0} has no edge outside the other critical paths")]
    NoPrivateEdge(String),
    #[error("normal-cone system of the given vertex set is infeasible")]
    NotAFace,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NodeOutOfRange { .. } => "node-out-of-range",
            Error::TooManyNodes(_) => "too-many-nodes",
            Error::SelfLoop(_) => "self-loop",
            Error::DuplicateEdge(..) => "duplicate-edge",
            Error::Cycle(_) => "cycle",
            Error::MissingEdge(..) => "missing-edge",
            Error::InvalidPath(_) => "invalid-path",
            Error::WeightSupport(_) => "weight-support",
            Error::InvalidStatement(_) => "invalid-statement",
            Error::NotDisjoint => "not-disjoint",
            Error::NonGeneric(_) => "non-generic",
            Error::NotTiedCritical(_) => "not-tied-critical",
            Error::NoPrivateEdge(_) => "no-private-edge",
            Error::NotAFace => "not-a-face",
            Error::Parse(_) => "parse",
            Error::Precondition(_) => "precondition",
        }
    }
}
