//! Wall-clock timed solver calls.

use std::time::Instant;

use transmig_core::placement::{run_ga, GaRun, DEFAULT_EXHAUSTIVE_BUDGET};
use transmig_core::{
    admit_demands, build_routes, network_load, place_exhaustive, place_heuristic, place_random, DemandSet,
    GaParams, HeuristicParams, LoadReport, NetworkGraph, NodeId, Objective, Placement, PlacementError,
};

pub use transmig_core::SolverKind;

/// Placement mode of a scenario.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    NonBlocking,
    Blocking,
}

impl Mode {
    pub fn objective(self) -> Objective {
        match self {
            Mode::NonBlocking => Objective::NetworkLoad,
            Mode::Blocking => Objective::Blocked,
        }
    }
}

pub fn parse_solver(name: &str) -> Option<SolverKind> {
    [SolverKind::Heuristic, SolverKind::Ga, SolverKind::Random, SolverKind::Exhaustive]
        .into_iter()
        .find(|k| k.name() == name)
}

/// Everything any solver might need. Unused fields are ignored per solver.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverParams {
    pub n: usize,
    pub lambda: f64,
    pub ga: GaParams,
    pub seed: u64,
    pub budget: u128,
    pub mode: Mode,
    pub stop_score: Option<f64>,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            n: 2,
            lambda: 0.05,
            ga: GaParams::default(),
            seed: 0,
            budget: DEFAULT_EXHAUSTIVE_BUDGET,
            mode: Mode::NonBlocking,
            stop_score: None,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

pub fn heuristic(g: &NetworkGraph, d: &DemandSet, n: usize, lambda: f64) -> Result<Placement, PlacementError> {
    let params = HeuristicParams::new(n, lambda)?;
    let (p, secs) = timed(|| place_heuristic(g, d, &params));
    p.map(|mut p| {
        p.runtime_s = secs;
        p
    })
}

pub fn ga(g: &NetworkGraph, d: &DemandSet, n: usize, params: &GaParams, stop: Option<f64>) -> Result<GaRun, PlacementError> {
    let (r, secs) = timed(|| run_ga(g, d, n, params, stop));
    r.map(|mut r| {
        r.placement.runtime_s = secs;
        r
    })
}

pub fn random(g: &NetworkGraph, n: usize, seed: u64) -> Result<Placement, PlacementError> {
    let (p, secs) = timed(|| place_random(g, n, seed));
    p.map(|mut p| {
        p.runtime_s = secs;
        p
    })
}

pub fn exhaustive(g: &NetworkGraph, d: &DemandSet, n: usize, objective: Objective, budget: u128) -> Result<Placement, PlacementError> {
    let (p, secs) = timed(|| place_exhaustive(g, d, n, objective, budget));
    p.map(|mut p| {
        p.runtime_s = secs;
        p
    })
}

/// Runs one solver by kind.
pub fn solve(kind: SolverKind, g: &NetworkGraph, d: &DemandSet, p: &SolverParams) -> Result<Placement, PlacementError> {
    let objective = p.mode.objective();
    match kind {
        SolverKind::Heuristic => heuristic(g, d, p.n, p.lambda),
        SolverKind::Ga => {
            let ga_params = GaParams {
                seed: p.seed,
                objective,
                ..p.ga
            };
            ga(g, d, p.n, &ga_params, p.stop_score).map(|r| r.placement)
        }
        SolverKind::Random => random(g, p.n, p.seed),
        SolverKind::Exhaustive => exhaustive(g, d, p.n, objective, p.budget),
    }
}

/// Load of a placement under the given mode: every demand routed for
/// non-blocking, sequential admission for blocking.
pub fn evaluate(g: &NetworkGraph, d: &DemandSet, placement: &[NodeId], mode: Mode) -> LoadReport {
    match mode {
        Mode::NonBlocking => match build_routes(g, d, placement) {
            Ok(plan) => network_load(&plan),
            Err(_) => admit_demands(g, d, placement),
        },
        Mode::Blocking => admit_demands(g, d, placement),
    }
}

/// Value of the GA objective for a placement, comparable with GA fitness.
pub fn objective_value(g: &NetworkGraph, d: &DemandSet, placement: &[NodeId], mode: Mode) -> f64 {
    let r = evaluate(g, d, placement, mode);
    match mode {
        Mode::NonBlocking => r.total_load,
        Mode::Blocking => r.blocked.len() as f64,
    }
}
