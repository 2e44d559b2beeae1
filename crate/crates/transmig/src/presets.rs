//! Named experiment setups at desk scale.

use transmig_core::sim::MigrationKind;

use crate::generate::{GeneratorSpec, Topology};
use crate::solve::{Mode, SolverKind};

/// Largest network the presets build without `--allow-large`.
pub const DESK_SCALE_MAX_NODES: usize = 600;

#[derive(Clone, Debug, PartialEq)]
pub struct PresetCase {
    pub name: String,
    pub spec: GeneratorSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlacementPreset {
    pub name: &'static str,
    pub cases: Vec<PresetCase>,
    pub solvers: Vec<SolverKind>,
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub mode: Mode,
    pub ga_generations: usize,
    /// Stop the GA once it matches the heuristic's objective value.
    pub ga_stop_at_heuristic: bool,
    pub reps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MigrationPreset {
    pub name: &'static str,
    pub kinds: Vec<MigrationKind>,
    pub rtts_ms: Vec<f64>,
    pub reps: usize,
    pub base_seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preset {
    Placement(PlacementPreset),
    Migration(MigrationPreset),
}

pub const PLACEMENT_PRESETS: [&str; 9] = [
    "oracle-small",
    "fig2-benefit",
    "fig3-small",
    "fig3-blocking",
    "fig5-separation",
    "fig6-clients",
    "ga-nostop",
    "runtime-300",
    "separation-200",
];

pub const MIGRATION_PRESETS: [&str; 3] = ["table1", "table1-rtt", "fig7-io"];

/// One source streaming one content to clients spread over a sparse
/// small-world graph.
pub fn workload_spec(nodes: usize, seed: u64) -> GeneratorSpec {
    let mut spec = GeneratorSpec::new(nodes, Topology::WattsStrogatz { degree: 4, rewire: 0.1 }, seed);
    spec.candidate_fraction = 0.2;
    spec.client_fraction = 0.2;
    spec.sources = 1;
    spec.contents = 1;
    spec
}

/// Graphs small enough for exhaustive search: 10 to 15 nodes, at most 8
/// candidate sites.
pub fn small_spec(index: u64, seed: u64) -> GeneratorSpec {
    let mut spec = GeneratorSpec::new(10 + (index % 6) as usize, Topology::ErdosRenyi { mean_degree: 3.0 }, seed);
    spec.candidate_fraction = 0.6;
    spec.max_candidates = Some(8);
    spec.client_fraction = 0.35;
    spec.sources = 1;
    spec.contents = 1;
    spec
}

fn case(preset: &str, spec: GeneratorSpec) -> PresetCase {
    let frac = (spec.client_fraction * 100.0).round() as u32;
    PresetCase {
        name: format!("{preset}-v{:04}-c{frac:02}-s{}", spec.nodes, spec.seed),
        spec,
    }
}

fn sized(preset: &str, sizes: &[usize], seeds: u64, base: u64, tweak: impl Fn(&mut GeneratorSpec)) -> Vec<PresetCase> {
    let mut out = Vec::new();
    for (i, &nodes) in sizes.iter().enumerate() {
        for k in 0..seeds {
            let mut spec = workload_spec(nodes, base + (i as u64) * 1000 + k);
            tweak(&mut spec);
            out.push(case(preset, spec));
        }
    }
    out
}

const SIZES: [usize; 6] = [100, 200, 300, 400, 500, 600];
const ALL_SOLVERS: [SolverKind; 3] = [SolverKind::Heuristic, SolverKind::Ga, SolverKind::Random];

fn placement(name: &'static str, cases: Vec<PresetCase>) -> PlacementPreset {
    PlacementPreset {
        name,
        cases,
        solvers: ALL_SOLVERS.to_vec(),
        n: 3,
        lambdas: vec![0.01],
        mode: Mode::NonBlocking,
        ga_generations: 10,
        ga_stop_at_heuristic: true,
        reps: 1,
    }
}

/// Looks up a preset. `seed` replaces the preset's base seed.
pub fn preset(name: &str, seed: Option<u64>) -> Option<Preset> {
    let base = |default: u64| seed.unwrap_or(default);
    let p = match name {
        "oracle-small" => {
            let b = base(1000);
            let cases = (0..30).map(|i| case(name, small_spec(i, b + i))).collect();
            PlacementPreset {
                solvers: vec![SolverKind::Heuristic, SolverKind::Exhaustive, SolverKind::Random],
                n: 2,
                lambdas: vec![0.1],
                ..placement("oracle-small", cases)
            }
        }
        "fig2-benefit" => placement("fig2-benefit", sized(name, &SIZES, 3, base(2000), |_| {})),
        "fig3-small" => placement("fig3-small", sized(name, &SIZES, 3, base(3000), |_| {})),
        "fig3-blocking" => PlacementPreset {
            mode: Mode::Blocking,
            ..placement("fig3-blocking", sized(name, &SIZES, 3, base(3000), |s| s.capacity = 400.0))
        },
        "fig5-separation" => PlacementPreset {
            lambdas: vec![0.01, 0.1],
            ..placement("fig5-separation", sized(name, &SIZES, 3, base(5000), |_| {}))
        },
        "fig6-clients" => {
            let mut cases = sized(name, &SIZES, 3, base(6000), |s| s.client_fraction = 0.01);
            cases.extend(sized(name, &SIZES, 3, base(6000), |s| s.client_fraction = 0.35));
            placement("fig6-clients", cases)
        }
        "ga-nostop" => {
            let b = base(2000);
            let cases = (0..10u64).map(|i| case(name, workload_spec(100 + 20 * i as usize, b + i))).collect();
            PlacementPreset {
                solvers: vec![SolverKind::Heuristic, SolverKind::Ga],
                ga_generations: 100,
                ga_stop_at_heuristic: false,
                ..placement("ga-nostop", cases)
            }
        }
        "runtime-300" => PlacementPreset {
            solvers: vec![SolverKind::Heuristic, SolverKind::Ga],
            ..placement("runtime-300", sized(name, &[300], 30, base(3000), |_| {}))
        },
        "separation-200" => PlacementPreset {
            solvers: vec![SolverKind::Heuristic],
            lambdas: vec![0.01, 0.1],
            ..placement("separation-200", sized(name, &[200], 30, base(4000), |_| {}))
        },
        "table1" => {
            return Some(Preset::Migration(MigrationPreset {
                name: "table1",
                kinds: MigrationKind::ALL.to_vec(),
                rtts_ms: vec![125.0],
                reps: 50,
                base_seed: base(0),
            }))
        }
        "table1-rtt" => {
            return Some(Preset::Migration(MigrationPreset {
                name: "table1-rtt",
                kinds: vec![MigrationKind::Of, MigrationKind::Standard],
                rtts_ms: vec![125.0, 250.0],
                reps: 50,
                base_seed: base(0),
            }))
        }
        "fig7-io" => {
            return Some(Preset::Migration(MigrationPreset {
                name: "fig7-io",
                kinds: MigrationKind::ALL.to_vec(),
                rtts_ms: vec![125.0],
                reps: 1,
                base_seed: base(0),
            }))
        }
        _ => return None,
    };
    Some(Preset::Placement(p))
}

pub fn placement_preset(name: &str, seed: Option<u64>) -> Option<PlacementPreset> {
    match preset(name, seed)? {
        Preset::Placement(p) => Some(p),
        Preset::Migration(_) => None,
    }
}

pub fn migration_preset(name: &str, seed: Option<u64>) -> Option<MigrationPreset> {
    match preset(name, seed)? {
        Preset::Migration(m) => Some(m),
        Preset::Placement(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in PLACEMENT_PRESETS {
            let p = placement_preset(name, None).unwrap();
            assert!(!p.cases.is_empty(), "{name}");
            assert!(p.cases.iter().all(|c| c.spec.nodes <= DESK_SCALE_MAX_NODES));
            assert!(p.cases.iter().all(|c| (0.01..=0.35).contains(&c.spec.client_fraction)));
            let mut names: Vec<_> = p.cases.iter().map(|c| &c.name).collect();
            names.dedup();
            assert_eq!(names.len(), p.cases.len(), "{name} has clashing case names");
        }
        for name in MIGRATION_PRESETS {
            assert!(migration_preset(name, None).is_some());
        }
        assert!(preset("fig9", None).is_none());
    }

    #[test]
    fn seed_override_shifts_cases() {
        let a = placement_preset("oracle-small", None).unwrap();
        let b = placement_preset("oracle-small", Some(5)).unwrap();
        assert_eq!(a.cases[0].spec.seed, 1000);
        assert_eq!(b.cases[0].spec.seed, 5);
        assert_eq!(b.cases[29].spec.seed, 34);
    }
}
