use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid node id {node} (network has {node_count} nodes)")]
    InvalidNode { node: NodeId, node_count: usize },

    #[error("{0} must not be empty")]
    EmptySet(&'static str),

    #[error("node {0} is unreachable from the rest of the target set")]
    Unreachable(NodeId),

    #[error("empty input: no edges found")]
    EmptyInput,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "safety margin {requested} is infeasible: the largest feasible margin at horizon {horizon} hops is {max} (floor of horizon/2)"
    )]
    InfeasibleMargin {
        requested: usize,
        max: usize,
        horizon: usize,
    },

    #[error("source eccentricity {eccentricity} is smaller than the horizon of {horizon} hops")]
    EccentricityTooSmall { eccentricity: usize, horizon: usize },

    #[error("edge {parent}->{child} has rate {rate} above its bound {bound}")]
    RateAboveBound {
        parent: NodeId,
        child: NodeId,
        rate: String,
        bound: String,
    },

    #[error("network too small: {0}")]
    NetworkTooSmall(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when the error stems from bad user input rather than the
    /// environment (I/O) or a broken internal invariant.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Csv(_) | Error::Internal(_))
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
