use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use transmig::experiments::{
    cmd_benefit, cmd_compare, cmd_migrate, cmd_place, cmd_sweep, preset_scenarios, summarize_rows, CompareConfig,
    MigrateConfig, Timing,
};
use transmig::output::{to_csv, trace_jsonl, write_csv};
use transmig::presets::{self, Preset, DESK_SCALE_MAX_NODES};
use transmig::scenario::{load_scenario, Origin, Scenario};
use transmig::solve::{parse_solver, SolverKind};
use transmig::{Error, Result};
use transmig_core::sim::{MigrationKind, SimConfig};

#[derive(Parser)]
#[command(name = "transmig", version, about = "Transcoder placement and migration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Named preset instead of a scenario file.
    #[arg(long)]
    preset: Option<String>,
    /// Base seed; overrides the scenario's or preset's.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave runtime columns blank.
    #[arg(long)]
    no_timing: bool,
    /// Allow generated networks above the desk-scale node cap.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Transcoders to place.
    #[arg(long)]
    n: Option<usize>,
    /// Separation constant(s) for the heuristic.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<f64>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    /// Exhaustive search subset budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Run each solver this many times and report the median runtime.
    #[arg(long, default_value_t = 1)]
    timing_repeats: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Place transcoders with one solver.
    Place {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver_args: SolverArgs,
        #[arg(long)]
        solver: Option<String>,
        /// Also write `scenario,solver,total_load,admitted,blocked` rows here.
        #[arg(long)]
        load_out: Option<PathBuf>,
    },
    /// Heuristic, GA (stopping at the heuristic's score) and random side by side.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver_args: SolverArgs,
        #[arg(long, value_delimiter = ',')]
        solver: Vec<String>,
        #[arg(long)]
        reps: Option<usize>,
        /// Run the GA for all its generations instead of stopping at the heuristic's score.
        #[arg(long)]
        no_stop: bool,
    },
    /// Simulate transcoder migrations and summarise the client gap.
    Migrate {
        #[command(flatten)]
        common: Common,
        /// of, standard, arp-flush-of, arp-flush-standard.
        #[arg(long = "type", value_delimiter = ',')]
        kinds: Vec<String>,
        /// Link round trip time(s) in milliseconds.
        #[arg(long, value_delimiter = ',')]
        rtt: Vec<f64>,
        #[arg(long)]
        reps: Option<usize>,
        /// Client arrival series with inter-packet deltas.
        #[arg(long)]
        client_log: Option<PathBuf>,
        /// JSON-lines event trace of the first run.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Load with and without transcoders for the same demands.
    Benefit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver_args: SolverArgs,
    },
    /// Run a preset and average over seeds per network size.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver_args: SolverArgs,
        #[arg(long)]
        reps: Option<usize>,
        /// Also write the per-run rows here.
        #[arg(long)]
        rows: Option<PathBuf>,
    },
}

fn note(msg: impl AsRef<str>) {
    eprintln!("{}", msg.as_ref());
}

fn check_size(s: &Scenario, allow_large: bool) -> Result<()> {
    if !allow_large && matches!(s.origin, Origin::Generated { .. }) && s.graph.node_count() > DESK_SCALE_MAX_NODES {
        return Err(Error::Usage(format!(
            "{} nodes exceeds the desk-scale cap of {DESK_SCALE_MAX_NODES}; pass --allow-large",
            s.graph.node_count()
        )));
    }
    Ok(())
}

fn unknown_preset(name: &str) -> Error {
    let known: Vec<&str> = presets::PLACEMENT_PRESETS.iter().chain(&presets::MIGRATION_PRESETS).copied().collect();
    Error::Usage(format!("unknown preset '{name}' (known: {})", known.join(", ")))
}

/// Scenarios named by `--scenario` or a placement `--preset`.
fn scenarios(common: &Common) -> Result<(Vec<Scenario>, Option<presets::PlacementPreset>)> {
    match (&common.scenario, &common.preset) {
        (Some(_), Some(_)) => Err(Error::Usage("give either --scenario or --preset".into())),
        (Some(path), None) => {
            let mut s = load_scenario(path)?;
            check_size(&s, common.allow_large)?;
            if let Some(seed) = common.seed {
                s.params.seed = seed;
            }
            Ok((vec![s], None))
        }
        (None, Some(name)) => {
            let p = presets::placement_preset(name, common.seed).ok_or_else(|| unknown_preset(name))?;
            Ok((preset_scenarios(&p)?, Some(p)))
        }
        (None, None) => Err(Error::Usage("need --scenario or --preset".into())),
    }
}

fn timing(common: &Common, args: &SolverArgs) -> Timing {
    Timing {
        record: !common.no_timing,
        repeats: args.timing_repeats.max(1),
    }
}

fn apply_solver_args(cfg: &mut CompareConfig, args: &SolverArgs) {
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if !args.lambda.is_empty() {
        cfg.lambdas = args.lambda.clone();
    }
    if let Some(g) = args.generations {
        cfg.ga.generations = g;
    }
    if let Some(p) = args.population {
        cfg.ga.population = p;
    }
    if let Some(b) = args.budget {
        cfg.budget = u128::from(b);
    }
}

fn compare_config(s: &[Scenario], preset: &Option<presets::PlacementPreset>, args: &SolverArgs) -> CompareConfig {
    let mut cfg = match preset {
        Some(p) => CompareConfig::from_preset(p),
        None => {
            let p = &s[0].params;
            CompareConfig {
                solvers: vec![SolverKind::Heuristic, SolverKind::Ga, SolverKind::Random],
                n: p.n,
                lambdas: vec![p.lambda],
                ga: p.ga,
                ga_stop_at_heuristic: true,
                reps: 1,
                mode: p.mode,
                budget: p.budget,
                timing: Timing::default(),
            }
        }
    };
    apply_solver_args(&mut cfg, args);
    cfg
}

fn parse_solvers(names: &[String]) -> Result<Vec<SolverKind>> {
    names
        .iter()
        .map(|n| parse_solver(n).ok_or_else(|| Error::Usage(format!("unknown solver '{n}'"))))
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Place {
            common,
            solver_args,
            solver,
            load_out,
        } => {
            let (scens, preset) = scenarios(&common)?;
            let t = timing(&common, &solver_args);
            let mut rows = Vec::new();
            let mut load_rows = Vec::new();
            for s in &scens {
                let kind = match &solver {
                    Some(name) => parse_solver(name).ok_or_else(|| Error::Usage(format!("unknown solver '{name}'")))?,
                    None => s.solver.unwrap_or(SolverKind::Heuristic),
                };
                let mut params = s.params.clone();
                if let Some(p) = &preset {
                    params.n = p.n;
                    params.lambda = p.lambdas[0];
                }
                params.n = solver_args.n.unwrap_or(params.n);
                params.lambda = solver_args.lambda.first().copied().unwrap_or(params.lambda);
                params.ga.generations = solver_args.generations.unwrap_or(params.ga.generations);
                params.ga.population = solver_args.population.unwrap_or(params.ga.population);
                if let Some(b) = solver_args.budget {
                    params.budget = u128::from(b);
                }
                note(format!("# scenario={} seed={}", s.name, params.seed));
                let out = cmd_place(s, kind, &params, t)?;
                let ids: Vec<String> = out.placement.transcoders.iter().map(|n| n.0.to_string()).collect();
                note(format!(
                    "{} {}: [{}] score={} load={} admitted={} blocked={} runtime_s={:.6}{}",
                    s.name,
                    kind,
                    ids.join(" "),
                    out.placement.score.map_or("-".to_string(), |v| v.to_string()),
                    out.report.total_load,
                    out.report.admitted,
                    out.report.blocked.len(),
                    out.placement.runtime_s,
                    if out.placement.truncated { " (truncated)" } else { "" },
                ));
                rows.push(out.row);
                load_rows.push(out.load_row);
            }
            if let Some(p) = &load_out {
                write_csv(Some(p), &load_rows)?;
            }
            write_csv(common.out.as_deref(), &rows)
        }
        Command::Compare {
            common,
            solver_args,
            solver,
            reps,
            no_stop,
        } => {
            let (scens, preset) = scenarios(&common)?;
            let mut cfg = compare_config(&scens, &preset, &solver_args);
            if !solver.is_empty() {
                cfg.solvers = parse_solvers(&solver)?;
            }
            if let Some(r) = reps {
                if r == 0 {
                    return Err(Error::Usage("--reps must be at least 1".into()));
                }
                cfg.reps = r;
            }
            if no_stop {
                cfg.ga_stop_at_heuristic = false;
            }
            cfg.timing = timing(&common, &solver_args);
            note(format!("# seed={}", scens[0].seed()));
            let rows = cmd_compare(&scens, &cfg)?;
            for r in summarize_rows(preset.as_ref().map_or("scenario", |p| p.name), &scens, &rows) {
                note(format!(
                    "nodes={} clients={} {} lambda={} runs={} mean_load={:.1} mean_runtime_s={}",
                    r.nodes,
                    r.client_fraction,
                    r.solver,
                    r.lambda.map_or("-".into(), |l| l.to_string()),
                    r.runs,
                    r.mean_load,
                    r.mean_runtime_s.map_or("-".into(), |t| format!("{t:.6}")),
                ));
            }
            write_csv(common.out.as_deref(), &rows)
        }
        Command::Migrate {
            common,
            kinds,
            rtt,
            reps,
            client_log,
            trace,
        } => {
            let base = match &common.scenario {
                Some(path) => load_scenario(path)?.sim,
                None => SimConfig::default(),
            };
            let mut cfg = match &common.preset {
                Some(name) => {
                    let p = presets::migration_preset(name, common.seed).ok_or_else(|| unknown_preset(name))?;
                    MigrateConfig::from_preset(&p, base.clone())
                }
                None => MigrateConfig {
                    kinds: MigrationKind::ALL.to_vec(),
                    rtts_ms: vec![base.link_rtt * 1000.0],
                    reps: 50,
                    base_seed: base.seed,
                    base: base.clone(),
                },
            };
            if !kinds.is_empty() {
                cfg.kinds = kinds
                    .iter()
                    .map(|k| MigrationKind::from_name(k).ok_or_else(|| Error::Usage(format!("unknown migration type '{k}'"))))
                    .collect::<Result<_>>()?;
            }
            if !rtt.is_empty() {
                cfg.rtts_ms = rtt;
            }
            if let Some(r) = reps {
                if r == 0 {
                    return Err(Error::Usage("--reps must be at least 1".into()));
                }
                cfg.reps = r;
            }
            if let Some(seed) = common.seed {
                cfg.base_seed = seed;
            }
            note(format!("# seed={}", cfg.base_seed));
            let out = cmd_migrate(&cfg)?;
            for r in &out.rows {
                note(format!(
                    "{} rtt={}ms mean={:.4}s ci95={:.4} min={:.4} max={:.4} overlap={:.1} incomplete={}",
                    r.kind, r.rtt_ms, r.mean, r.ci95, r.min, r.max, r.mean_overlap, r.incomplete
                ));
            }
            if let Some(p) = &client_log {
                write_csv(Some(p), &out.clients)?;
            }
            if let (Some(p), Some(t)) = (&trace, &out.trace) {
                write_text(p, &trace_jsonl(t))?;
            }
            write_csv(common.out.as_deref(), &out.rows)
        }
        Command::Benefit { common, solver_args } => {
            let (scens, preset) = scenarios(&common)?;
            let (mut n, mut lambda) = (scens[0].params.n, scens[0].params.lambda);
            if let Some(p) = &preset {
                n = p.n;
                lambda = p.lambdas[0];
            }
            let n = solver_args.n.unwrap_or(n);
            let lambda = solver_args.lambda.first().copied().unwrap_or(lambda);
            note(format!("# seed={}", scens[0].seed()));
            let rows = cmd_benefit(&scens, n, lambda)?;
            for r in &rows {
                note(format!(
                    "{} direct={} transcoded={} ratio={:.3} min_fanout={}",
                    r.scenario, r.direct_load, r.transcoded_load, r.ratio, r.min_trunk_fanout
                ));
            }
            write_csv(common.out.as_deref(), &rows)
        }
        Command::Sweep {
            common,
            solver_args,
            reps,
            rows,
        } => {
            let name = common
                .preset
                .clone()
                .ok_or_else(|| Error::Usage("sweep needs --preset".into()))?;
            match presets::preset(&name, common.seed).ok_or_else(|| unknown_preset(&name))? {
                Preset::Placement(p) => {
                    let mut cfg = CompareConfig::from_preset(&p);
                    apply_solver_args(&mut cfg, &solver_args);
                    if let Some(r) = reps {
                        cfg.reps = r.max(1);
                    }
                    cfg.timing = timing(&common, &solver_args);
                    note(format!("# preset={} seed={}", p.name, p.cases[0].spec.seed));
                    let (per_run, summary) = cmd_sweep(&p, &cfg)?;
                    if let Some(path) = &rows {
                        write_text(path, &to_csv(&per_run)?)?;
                    }
                    write_csv(common.out.as_deref(), &summary)
                }
                Preset::Migration(m) => {
                    let mut cfg = MigrateConfig::from_preset(&m, SimConfig::default());
                    if let Some(r) = reps {
                        cfg.reps = r.max(1);
                    }
                    note(format!("# preset={} seed={}", m.name, cfg.base_seed));
                    let out = cmd_migrate(&cfg)?;
                    write_csv(common.out.as_deref(), &out.rows)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
