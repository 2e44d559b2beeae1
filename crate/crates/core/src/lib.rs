//! Transcoder placement and OpenFlow-assisted transcoder migration.
//!
//! The crate is split along the two halves of the problem:
//!
//! - [`model`] and [`placement`] decide *where* transcoders should run on a
//!   capacity-constrained graph, scoring candidate sets by network load
//!   (bitrate times hop count, with application-layer multicast trunks
//!   counted once) or by the number of admitted demands.
//! - [`fabric`] and [`sim`] model the OpenFlow switches and the
//!   discrete-event testbed used to *move* a running transcoder with a
//!   near-zero client-side gap.
//!
//! Everything here is `no_std` with `alloc`. Wall-clock timing, file formats
//! and the CLI live in the `transmig` companion crate.
#![no_std]

extern crate alloc;

pub mod fabric;
pub mod model;
pub mod placement;
pub mod sim;

pub use model::{
    admit_demands, build_direct_routes, build_routes, degree, hop_distances, network_load,
    CodecRate, Demand, DemandSet, EdgeKey, GraphBuilder, LoadReport, ModelError, NetworkGraph,
    NodeId, RoutePlan, Roles, UNREACHABLE,
};
pub use placement::{
    group_score, place_exhaustive, place_ga, place_heuristic, place_random, score_location,
    GaParams, HeuristicParams, Objective, Placement, PlacementError, PoolRule, SolverKind,
};
