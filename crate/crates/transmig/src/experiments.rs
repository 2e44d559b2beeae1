//! The subcommands as library calls returning rows.

use std::collections::BTreeMap;

use transmig_core::sim::{run_migration, sweep, MigrationKind, SimConfig, SweepCell, Trace};
use transmig_core::{build_direct_routes, build_routes, network_load, GaParams, LoadReport, NodeId, Placement};

use crate::error::Result;
use crate::output::{BenefitRow, ClientRow, LoadRow, MigrationRow, SolverRow, SweepRow};
use crate::presets::{MigrationPreset, PlacementPreset};
use crate::scenario::Scenario;
use crate::solve::{evaluate, heuristic, objective_value, solve, Mode, SolverKind, SolverParams};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Timing {
    /// When false, runtime columns are left blank so output is reproducible
    /// byte for byte.
    pub record: bool,
    /// Each timed call runs this many times and reports the median.
    pub repeats: usize,
}

impl Default for Timing {
    fn default() -> Self {
        Self { record: true, repeats: 1 }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn timed_solve(kind: SolverKind, s: &Scenario, p: &SolverParams, timing: Timing) -> Result<Placement> {
    let mut first = solve(kind, &s.graph, &s.demands, p)?;
    if timing.repeats > 1 {
        let mut times = vec![first.runtime_s];
        for _ in 1..timing.repeats {
            times.push(solve(kind, &s.graph, &s.demands, p)?.runtime_s);
        }
        first.runtime_s = median(times);
    }
    Ok(first)
}

fn solver_row(s: &Scenario, p: &Placement, n: usize, lambda: Option<f64>, seed: u64, mode: Mode, timing: Timing) -> SolverRow {
    let report = evaluate(&s.graph, &s.demands, &p.transcoders, mode);
    SolverRow {
        scenario: s.name.clone(),
        solver: p.solver.name().to_string(),
        n,
        lambda,
        seed,
        score: p.score,
        load: report.total_load,
        admitted: report.admitted,
        runtime_s: timing.record.then_some(p.runtime_s),
    }
}

#[derive(Clone, Debug)]
pub struct PlaceOutput {
    pub placement: Placement,
    pub report: LoadReport,
    pub row: SolverRow,
    pub load_row: LoadRow,
}

pub fn cmd_place(s: &Scenario, kind: SolverKind, params: &SolverParams, timing: Timing) -> Result<PlaceOutput> {
    let placement = timed_solve(kind, s, params, timing)?;
    let report = evaluate(&s.graph, &s.demands, &placement.transcoders, params.mode);
    let lambda = (kind == SolverKind::Heuristic).then_some(params.lambda);
    let row = solver_row(s, &placement, params.n, lambda, params.seed, params.mode, timing);
    let load_row = LoadRow {
        scenario: s.name.clone(),
        solver: kind.name().to_string(),
        total_load: report.total_load,
        admitted: report.admitted,
        blocked: report.blocked.len(),
    };
    Ok(PlaceOutput {
        placement,
        report,
        row,
        load_row,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareConfig {
    pub solvers: Vec<SolverKind>,
    pub n: usize,
    pub lambdas: Vec<f64>,
    pub ga: GaParams,
    pub ga_stop_at_heuristic: bool,
    pub reps: usize,
    pub mode: Mode,
    pub budget: u128,
    pub timing: Timing,
}

impl CompareConfig {
    pub fn from_preset(p: &PlacementPreset) -> Self {
        Self {
            solvers: p.solvers.clone(),
            n: p.n,
            lambdas: p.lambdas.clone(),
            ga: GaParams {
                generations: p.ga_generations,
                ..GaParams::default()
            },
            ga_stop_at_heuristic: p.ga_stop_at_heuristic,
            reps: p.reps,
            mode: p.mode,
            budget: SolverParams::default().budget,
            timing: Timing::default(),
        }
    }
}

fn sort_rows(rows: &mut [SolverRow]) {
    rows.sort_by(|a, b| {
        (&a.scenario, &a.solver)
            .cmp(&(&b.scenario, &b.solver))
            .then(a.lambda.unwrap_or(-1.0).total_cmp(&b.lambda.unwrap_or(-1.0)))
            .then(a.seed.cmp(&b.seed))
    });
}

/// Runs the heuristic first and hands its objective value to the GA as the
/// stop score, then the random baseline. Rep `r` uses seed `scenario seed + r`.
pub fn cmd_compare(scenarios: &[Scenario], cfg: &CompareConfig) -> Result<Vec<SolverRow>> {
    let mut rows = Vec::new();
    let wants = |k| cfg.solvers.contains(&k);
    for s in scenarios {
        for rep in 0..cfg.reps.max(1) as u64 {
            let seed = s.seed().wrapping_add(rep);
            let base = SolverParams {
                n: cfg.n,
                seed,
                mode: cfg.mode,
                budget: cfg.budget,
                ga: GaParams {
                    seed,
                    objective: cfg.mode.objective(),
                    ..cfg.ga
                },
                ..SolverParams::default()
            };
            for (li, &lambda) in cfg.lambdas.iter().enumerate() {
                let params = SolverParams { lambda, ..base.clone() };
                let needs_heuristic = wants(SolverKind::Heuristic) || (wants(SolverKind::Ga) && cfg.ga_stop_at_heuristic);
                let mut stop = None;
                if needs_heuristic {
                    let h = timed_solve(SolverKind::Heuristic, s, &params, cfg.timing)?;
                    stop = Some(objective_value(&s.graph, &s.demands, &h.transcoders, cfg.mode));
                    if wants(SolverKind::Heuristic) {
                        rows.push(solver_row(s, &h, cfg.n, Some(lambda), seed, cfg.mode, cfg.timing));
                    }
                }
                if wants(SolverKind::Ga) && (cfg.ga_stop_at_heuristic || li == 0) {
                    let ga_params = SolverParams {
                        stop_score: if cfg.ga_stop_at_heuristic { stop } else { None },
                        ..params.clone()
                    };
                    let g = timed_solve(SolverKind::Ga, s, &ga_params, cfg.timing)?;
                    let label = cfg.ga_stop_at_heuristic.then_some(lambda);
                    rows.push(solver_row(s, &g, cfg.n, label, seed, cfg.mode, cfg.timing));
                }
            }
            for kind in [SolverKind::Random, SolverKind::Exhaustive] {
                if wants(kind) {
                    let p = timed_solve(kind, s, &base, cfg.timing)?;
                    rows.push(solver_row(s, &p, cfg.n, None, seed, cfg.mode, cfg.timing));
                }
            }
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Averages compare rows over seeds for each network size, client share,
/// solver and separation value.
pub fn summarize_rows(preset: &str, scenarios: &[Scenario], rows: &[SolverRow]) -> Vec<SweepRow> {
    let shape: BTreeMap<&str, (usize, f64)> = scenarios
        .iter()
        .map(|s| {
            let n = s.graph.node_count();
            let frac = s.graph.clients().len() as f64 / n as f64;
            (s.name.as_str(), (n, (frac * 100.0).round() / 100.0))
        })
        .collect();
    type Key = (usize, u64, String, Option<u64>);
    let mut groups: BTreeMap<Key, Vec<&SolverRow>> = BTreeMap::new();
    for r in rows {
        let Some(&(nodes, frac)) = shape.get(r.scenario.as_str()) else {
            continue;
        };
        let key = (nodes, frac.to_bits(), r.solver.clone(), r.lambda.map(f64::to_bits));
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((nodes, frac, solver, lambda), rs)| {
            let k = rs.len() as f64;
            let runtime = rs.iter().map(|r| r.runtime_s).sum::<Option<f64>>().map(|t| t / k);
            let mut seeds: Vec<u64> = rs.iter().map(|r| r.seed).collect();
            seeds.sort_unstable();
            seeds.dedup();
            SweepRow {
                preset: preset.to_string(),
                nodes,
                client_fraction: f64::from_bits(frac),
                solver,
                lambda: lambda.map(f64::from_bits),
                runs: rs.len(),
                mean_load: rs.iter().map(|r| r.load).sum::<f64>() / k,
                mean_admitted: rs.iter().map(|r| r.admitted as f64).sum::<f64>() / k,
                mean_runtime_s: runtime,
                seeds: seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
            }
        })
        .collect()
}

pub fn preset_scenarios(p: &PlacementPreset) -> Result<Vec<Scenario>> {
    p.cases
        .iter()
        .map(|c| {
            let mut s = Scenario::generated(c.name.clone(), &c.spec)?;
            s.params.n = p.n;
            s.params.mode = p.mode;
            Ok(s)
        })
        .collect()
}

pub fn cmd_sweep(p: &PlacementPreset, cfg: &CompareConfig) -> Result<(Vec<SolverRow>, Vec<SweepRow>)> {
    let scenarios = preset_scenarios(p)?;
    let rows = cmd_compare(&scenarios, cfg)?;
    let summary = summarize_rows(p.name, &scenarios, &rows);
    Ok((rows, summary))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MigrateConfig {
    pub kinds: Vec<MigrationKind>,
    pub rtts_ms: Vec<f64>,
    pub reps: usize,
    pub base_seed: u64,
    pub base: SimConfig,
}

impl MigrateConfig {
    pub fn from_preset(p: &MigrationPreset, base: SimConfig) -> Self {
        Self {
            kinds: p.kinds.clone(),
            rtts_ms: p.rtts_ms.clone(),
            reps: p.reps,
            base_seed: p.base_seed,
            base,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MigrateOutput {
    pub rows: Vec<MigrationRow>,
    /// Client arrivals of the first seed of every (type, rtt) cell.
    pub clients: Vec<ClientRow>,
    pub cells: Vec<SweepCell>,
    /// Trace of the first seed of the first cell.
    pub trace: Option<Trace>,
}

pub fn cmd_migrate(cfg: &MigrateConfig) -> Result<MigrateOutput> {
    let configs: Vec<SimConfig> = cfg.rtts_ms.iter().map(|&ms| cfg.base.clone().with_rtt(ms / 1000.0)).collect();
    let cells = sweep(&configs, &cfg.kinds, cfg.reps.max(1), cfg.base_seed)?;
    let mut rows = Vec::new();
    for c in &cells {
        let rtt_ms = (c.link_rtt * 1e6).round() / 1e3;
        let (mean, ci95, min, max) = c.stats.map_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN), |s| (s.mean, s.ci95, s.min, s.max));
        let mean_overlap = if c.overlaps.is_empty() {
            0.0
        } else {
            c.overlaps.iter().sum::<usize>() as f64 / c.overlaps.len() as f64
        };
        rows.push(MigrationRow {
            kind: c.kind.name().to_string(),
            mean,
            ci95,
            min,
            max,
            reps: c.seeds.len(),
            incomplete: c.incomplete,
            mean_overlap,
            rtt_ms,
            base_seed: cfg.base_seed,
        });
    }
    let mut clients = Vec::new();
    let mut trace = None;
    for &kind in &cfg.kinds {
        for cfg_rtt in &configs {
            let run = run_migration(&cfg_rtt.clone().with_seed(cfg.base_seed), kind)?;
            let rtt_ms = (cfg_rtt.link_rtt * 1e6).round() / 1e3;
            clients.extend(ClientRow::series(kind.name(), rtt_ms, cfg.base_seed, run.client_log()));
            if trace.is_none() {
                trace = Some(run.trace);
            }
        }
    }
    Ok(MigrateOutput {
        rows,
        clients,
        cells,
        trace,
    })
}

/// Load with every demand routed straight from its source versus through
/// the heuristic's transcoders.
pub fn cmd_benefit(scenarios: &[Scenario], n: usize, lambda: f64) -> Result<Vec<BenefitRow>> {
    let mut rows = Vec::new();
    for s in scenarios {
        let p = heuristic(&s.graph, &s.demands, n, lambda)?;
        let direct = network_load(&build_direct_routes(&s.graph, &s.demands).map_err(crate::Error::from_model)?);
        let plan = build_routes(&s.graph, &s.demands, &p.transcoders).map_err(crate::Error::from_model)?;
        let transcoded = network_load(&plan);
        let mut fanout: BTreeMap<(NodeId, NodeId, &str), usize> = BTreeMap::new();
        let demands = s.demands.as_slice();
        for leaf in &plan.leaves {
            if let Some(via) = leaf.via {
                let d = &demands[leaf.demand];
                *fanout.entry((d.source, via, d.content.as_str())).or_default() += 1;
            }
        }
        rows.push(BenefitRow {
            scenario: s.name.clone(),
            seed: s.seed(),
            nodes: s.graph.node_count(),
            demands: s.demands.len(),
            transcoders: p.transcoders.len(),
            direct_load: direct.total_load,
            transcoded_load: transcoded.total_load,
            ratio: transcoded.total_load / direct.total_load,
            min_trunk_fanout: fanout.values().copied().min().unwrap_or(0),
        });
    }
    rows.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    Ok(rows)
}
