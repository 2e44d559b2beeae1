//! Graph and demand model: shortest-hop routing, multicast trunk sharing,
//! network load and capacity-constrained admission.

mod demand;
mod graph;
mod routing;

use alloc::string::String;
use core::fmt;

pub use demand::{validate_codecs, CodecRate, Demand, DemandSet};
pub use graph::{degree, hop_distances, DistanceTable, EdgeKey, GraphBuilder, NetworkGraph, NodeId, Roles, UNREACHABLE};
pub use routing::{
    admit_demands, build_direct_routes, build_routes, network_load, Leaf, LoadReport, RoutePlan, Trunk,
};

#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    EmptyGraph,
    UnknownNode(NodeId),
    DuplicateNode(NodeId),
    DuplicateEdge(EdgeKey),
    SelfLoop(NodeId),
    InvalidCapacity(EdgeKey),
    /// Carries a node that cannot be reached from the lowest node id.
    Disconnected(NodeId),
    InvalidBitrate(String),
    DuplicateCodec(String),
    NotASource { demand: usize, node: NodeId },
    NotAClient { demand: usize, node: NodeId },
    NoTranscoder,
    Unreachable { from: NodeId, to: NodeId },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyGraph => write!(f, "graph has no nodes"),
            ModelError::UnknownNode(n) => write!(f, "unknown node {n}"),
            ModelError::DuplicateNode(n) => write!(f, "node {n} declared twice"),
            ModelError::DuplicateEdge(e) => write!(f, "edge {e} declared twice"),
            ModelError::SelfLoop(n) => write!(f, "self-loop on node {n}"),
            ModelError::InvalidCapacity(e) => write!(f, "edge {e} must have a positive finite capacity"),
            ModelError::Disconnected(n) => write!(f, "graph is disconnected (node {n} unreachable)"),
            ModelError::InvalidBitrate(l) => write!(f, "codec {l:?} must have a positive bitrate"),
            ModelError::DuplicateCodec(l) => write!(f, "codec label {l:?} used twice"),
            ModelError::NotASource { demand, node } => write!(f, "demand {demand}: node {node} is not a source"),
            ModelError::NotAClient { demand, node } => write!(f, "demand {demand}: node {node} is not a client"),
            ModelError::NoTranscoder => write!(f, "placement contains no transcoder"),
            ModelError::Unreachable { from, to } => write!(f, "no path from {from} to {to}"),
        }
    }
}

impl core::error::Error for ModelError {}
