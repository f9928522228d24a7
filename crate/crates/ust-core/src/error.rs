use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {index} has non-positive weight")]
    NonPositiveWeight { index: usize },
    #[error("edge {index} endpoint {vertex} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        index: usize,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("unknown edge id {edge}")]
    UnknownEdge { edge: EdgeId },
    #[error("unknown vertex id {vertex}")]
    UnknownVertex { vertex: VertexId },
    #[error("deleting edge {edge} disconnects the graph")]
    DeletionDisconnects { edge: EdgeId },
    #[error("cannot contract self-edge {edge}")]
    ContractSelfEdge { edge: EdgeId },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertices must be distinct")]
    SameVertex,
    #[error("self-edge {edge} is not a valid input here")]
    SelfEdgeInput { edge: EdgeId },
    #[error("edge list contains duplicate edge id {edge}")]
    DuplicateEdge { edge: EdgeId },
    #[error("include and exclude sets of a cylinder event must be disjoint")]
    OverlappingEvent,
    #[error("graph requires unit weights for this operation")]
    RequiresUnweighted,
    #[error("invalid parameter n={n} for family {family}")]
    InvalidFamily { family: &'static str, n: usize },
    #[error("{op} guard exceeded: {actual} > {limit}")]
    TooLarge {
        op: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("linear system is singular")]
    Singular,
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("walk ended before reaching every vertex")]
    WalkIncomplete,
    #[error("no edge connects {from} and {to}")]
    NoConnectingEdge { from: VertexId, to: VertexId },
}

pub type Result<T> = std::result::Result<T, Error>;
