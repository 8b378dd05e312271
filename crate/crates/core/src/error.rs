use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node id {0} out of range")]
    NodeOutOfRange(NodeId),

    #[error("node set must not be empty")]
    EmptyNodeSet,

    #[error("conductance undefined: {0}")]
    UndefinedConductance(&'static str),

    #[error("gravitation undefined for isolated node {0}")]
    UndefinedGravitation(NodeId),

    #[error("community has zero volume")]
    ZeroVolume,

    #[error("node {0} already belongs to the community")]
    AlreadyMember(NodeId),

    #[error("seed list is empty")]
    NoSeeds,

    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
