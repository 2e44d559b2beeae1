//! Transcoder placement solvers: the separation-distance heuristic, a
//! genetic algorithm baseline, seeded random placement and an exhaustive
//! oracle for small instances.
//!
//! None of the solvers read a clock. `Placement::runtime_s` is left at zero
//! here and filled in by callers that time the call.

mod eval;
mod exhaustive;
mod ga;
mod heuristic;
mod random;
mod score;

use alloc::vec::Vec;
use core::fmt;

use crate::model::{ModelError, NodeId};

pub use eval::Evaluator;
pub use exhaustive::{place_exhaustive, DEFAULT_EXHAUSTIVE_BUDGET};
pub use ga::{place_ga, run_ga, GaParams, GaRun};
pub use heuristic::{place_heuristic, HeuristicParams, PoolRule, MAX_SEPARATION};
pub use random::place_random;
pub use score::{group_score, score_location};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SolverKind {
    Heuristic,
    Ga,
    Random,
    Exhaustive,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Heuristic => "heuristic",
            SolverKind::Ga => "ga",
            SolverKind::Random => "random",
            SolverKind::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a search-based solver minimises.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Objective {
    /// Non-blocking: total network load of the routed plan.
    #[default]
    NetworkLoad,
    /// Blocking: number of demands refused by sequential admission
    /// (minimising this maximises the admitted count).
    Blocked,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    /// Chosen transcoder sites in selection order.
    pub transcoders: Vec<NodeId>,
    pub solver: SolverKind,
    /// The value the solver itself minimised: group score for the heuristic,
    /// the objective for GA and exhaustive search, `None` for random.
    pub score: Option<f64>,
    pub runtime_s: f64,
    /// Set when more transcoders were requested than there are candidates.
    pub truncated: bool,
    /// Number of candidate sets scored.
    pub evaluations: usize,
}

impl Placement {
    pub(crate) fn new(solver: SolverKind, transcoders: Vec<NodeId>) -> Self {
        Self {
            transcoders,
            solver,
            score: None,
            runtime_s: 0.0,
            truncated: false,
            evaluations: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlacementError {
    NoCandidates,
    TooManyTranscoders { requested: usize, candidates: usize },
    InvalidSeparation(f64),
    InvalidCount,
    InvalidGaParams(&'static str),
    BudgetExceeded { combinations: u128, budget: u128 },
    Model(ModelError),
}

impl From<ModelError> for PlacementError {
    fn from(e: ModelError) -> Self {
        PlacementError::Model(e)
    }
}

impl fmt::Display for PlacementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlacementError::NoCandidates => write!(f, "graph has no candidate transcoder sites"),
            PlacementError::TooManyTranscoders { requested, candidates } => {
                write!(f, "{requested} transcoders requested but only {candidates} candidate sites")
            }
            PlacementError::InvalidSeparation(l) => {
                write!(f, "separation constant {l} outside (0, {MAX_SEPARATION}]")
            }
            PlacementError::InvalidCount => write!(f, "transcoder count must be at least 1"),
            PlacementError::InvalidGaParams(why) => write!(f, "invalid GA parameters: {why}"),
            PlacementError::BudgetExceeded { combinations, budget } => {
                write!(f, "{combinations} subsets exceed the exhaustive budget of {budget}")
            }
            PlacementError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PlacementError {}
