//! JSON scenario files.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use transmig_core::sim::SimConfig;
use transmig_core::{CodecRate, Demand, DemandSet, GaParams, GraphBuilder, ModelError, NetworkGraph, NodeId, Roles};

use crate::error::{Error, Result};
use crate::generate::{generate, CodecSpec, GeneratorSpec};
use crate::solve::{parse_solver, Mode, SolverKind, SolverParams};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleName {
    Source,
    Candidate,
    Client,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: u32,
    #[serde(default)]
    pub roles: Vec<RoleName>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub a: u32,
    pub b: u32,
    pub capacity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandSpec {
    pub source: u32,
    pub dest: u32,
    pub codec: String,
    pub content: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub lambda: Option<f64>,
    pub generations: Option<usize>,
    pub population: Option<usize>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    /// Admit demands in a seeded random order instead of file order.
    #[serde(default)]
    pub shuffle_demands: bool,
}

/// Durations in seconds except the link round trip.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    pub link_rtt_ms: Option<f64>,
    pub host_latency: Option<f64>,
    pub packet_rate: Option<f64>,
    pub arp_timeout: Option<f64>,
    pub arp_refresh: Option<f64>,
    pub arp_retry: Option<f64>,
    pub wait1: Option<f64>,
    pub wait2: Option<f64>,
    pub transcoder_startup: Option<f64>,
    pub sim_duration: Option<f64>,
    pub migration_start: Option<f64>,
    pub arp_residual: Option<f64>,
    pub overlap_threshold: Option<usize>,
    pub seed: Option<u64>,
}

impl SimBlock {
    pub fn apply(&self, mut c: SimConfig) -> SimConfig {
        if let Some(v) = self.link_rtt_ms {
            c.link_rtt = v / 1000.0;
        }
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = self.$f { c.$f = v; })*};
        }
        set!(host_latency, packet_rate, arp_timeout, arp_refresh, arp_retry, wait1, wait2);
        set!(transcoder_startup, sim_duration, migration_start, overlap_threshold, seed);
        if self.arp_residual.is_some() {
            c.arp_residual = self.arp_residual;
        }
        c
    }
}

/// The on-disk form. Either `nodes`/`edges`/`codecs`/`demands` or a
/// `generator` block describes the network.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<NodeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub codecs: Vec<CodecSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub demands: Vec<DemandSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimBlock>,
    #[serde(default)]
    pub mode: Mode,
}

/// Where a scenario's network came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    File,
    Generated { topology: &'static str, seed: u64, sub_seed: u64 },
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub graph: NetworkGraph,
    pub demands: DemandSet,
    pub solver: Option<SolverKind>,
    pub params: SolverParams,
    pub sim: SimConfig,
    pub origin: Origin,
}

impl Scenario {
    /// Seed that reproduces this scenario's random parts.
    pub fn seed(&self) -> u64 {
        match self.origin {
            Origin::Generated { seed, .. } => seed,
            Origin::File => self.params.seed,
        }
    }

    /// Builds a scenario straight from a generator spec with default solver
    /// and sim settings.
    pub fn generated(name: impl Into<String>, spec: &GeneratorSpec) -> Result<Self> {
        let g = generate(spec)?;
        Ok(Self {
            name: name.into(),
            graph: g.graph,
            demands: g.demands,
            solver: None,
            params: SolverParams {
                seed: spec.seed,
                ..SolverParams::default()
            },
            sim: SimConfig::default(),
            origin: Origin::Generated {
                topology: spec.topology.name(),
                seed: spec.seed,
                sub_seed: g.sub_seed,
            },
        })
    }
}

fn invalid(path: &str, field: impl Into<String>, message: impl ToString) -> Error {
    Error::Invalid {
        path: path.to_string(),
        field: field.into(),
        message: message.to_string(),
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(&text, &path.display().to_string(), stem)
}

/// Parses and validates a scenario. `path` labels diagnostics; `default_name`
/// is used when the file carries no name.
pub fn parse_scenario(text: &str, path: &str, default_name: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(file, path, default_name)
}

pub fn resolve(file: ScenarioFile, path: &str, default_name: &str) -> Result<Scenario> {
    let name = file.name.clone().unwrap_or_else(|| default_name.to_string());
    let block = file.solver.clone().unwrap_or_default();
    let mut params = SolverParams {
        mode: file.mode,
        ..SolverParams::default()
    };
    if let Some(n) = block.n {
        params.n = n;
    }
    if let Some(l) = block.lambda {
        params.lambda = l;
    }
    params.ga = GaParams {
        generations: block.generations.unwrap_or(params.ga.generations),
        population: block.population.unwrap_or(params.ga.population),
        ..params.ga
    };
    if let Some(b) = block.budget {
        params.budget = u128::from(b);
    }
    let solver = match &block.kind {
        None => None,
        Some(k) => Some(parse_solver(k).ok_or_else(|| invalid(path, "solver.kind", format!("unknown solver '{k}'")))?),
    };
    let sim = file.sim.as_ref().map_or_else(SimConfig::default, |s| s.apply(SimConfig::default()));

    let (graph, demands, origin) = match &file.generator {
        Some(spec) => {
            if !file.nodes.is_empty() || !file.edges.is_empty() || !file.demands.is_empty() {
                return Err(invalid(path, "generator", "cannot be combined with nodes, edges or demands"));
            }
            params.seed = block.seed.unwrap_or(spec.seed);
            let g = generate(spec)?;
            let origin = Origin::Generated {
                topology: spec.topology.name(),
                seed: spec.seed,
                sub_seed: g.sub_seed,
            };
            (g.graph, g.demands, origin)
        }
        None => {
            params.seed = block.seed.unwrap_or(0);
            let (g, d) = build_explicit(&file, path)?;
            (g, d, Origin::File)
        }
    };

    let demands = if block.shuffle_demands {
        let mut order: Vec<usize> = (0..demands.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(params.seed));
        demands.reordered(&order)
    } else {
        demands
    };

    Ok(Scenario {
        name,
        graph,
        demands,
        solver,
        params,
        sim,
        origin,
    })
}

fn build_explicit(file: &ScenarioFile, path: &str) -> Result<(NetworkGraph, DemandSet)> {
    if file.nodes.is_empty() {
        return Err(invalid(path, "nodes", "scenario needs nodes or a generator block"));
    }
    let mut seen = BTreeSet::new();
    let mut b = GraphBuilder::new();
    for (i, n) in file.nodes.iter().enumerate() {
        if !seen.insert(n.id) {
            return Err(invalid(path, format!("nodes[{i}].id"), format!("node {} declared twice", n.id)));
        }
        let roles = n.roles.iter().fold(Roles::NONE, |r, name| {
            r.union(match name {
                RoleName::Source => Roles::SOURCE,
                RoleName::Candidate => Roles::CANDIDATE,
                RoleName::Client => Roles::CLIENT,
            })
        });
        b.add_node(NodeId(n.id), roles);
    }
    let mut pairs = BTreeSet::new();
    for (i, e) in file.edges.iter().enumerate() {
        let field = format!("edges[{i}]");
        for end in [e.a, e.b] {
            if !seen.contains(&end) {
                return Err(invalid(path, field, format!("unknown node {end}")));
            }
        }
        if e.a == e.b {
            return Err(invalid(path, field, "self-loop"));
        }
        if !(e.capacity > 0.0 && e.capacity.is_finite()) {
            return Err(invalid(path, format!("{field}.capacity"), "must be positive and finite"));
        }
        if !pairs.insert((e.a.min(e.b), e.a.max(e.b))) {
            return Err(invalid(path, field, format!("duplicate edge {}-{}", e.a, e.b)));
        }
        b.add_edge(NodeId(e.a), NodeId(e.b), e.capacity);
    }
    let graph = b.build().map_err(|e| match e {
        ModelError::Disconnected(n) => invalid(path, "edges", format!("graph is disconnected (node {n} unreachable)")),
        other => invalid(path, "nodes", other),
    })?;

    let mut codecs: BTreeMap<&str, f64> = BTreeMap::new();
    for (i, c) in file.codecs.iter().enumerate() {
        if !(c.bitrate > 0.0 && c.bitrate.is_finite()) {
            return Err(invalid(path, format!("codecs[{i}].bitrate"), "must be positive and finite"));
        }
        if codecs.insert(c.label.as_str(), c.bitrate).is_some() {
            return Err(invalid(path, format!("codecs[{i}].label"), format!("codec '{}' declared twice", c.label)));
        }
    }
    let mut demands = Vec::with_capacity(file.demands.len());
    for (i, d) in file.demands.iter().enumerate() {
        let rate = codecs
            .get(d.codec.as_str())
            .ok_or_else(|| invalid(path, format!("demands[{i}].codec"), format!("unknown codec '{}'", d.codec)))?;
        demands.push(Demand::new(
            NodeId(d.source),
            NodeId(d.dest),
            CodecRate::new(d.codec.clone(), *rate),
            d.content.clone(),
        ));
    }
    let demands = DemandSet::new(&graph, demands).map_err(|e| {
        let field = match &e {
            ModelError::NotASource { demand, .. } => format!("demands[{demand}].source"),
            ModelError::NotAClient { demand, .. } => format!("demands[{demand}].dest"),
            _ => "demands".to_string(),
        };
        invalid(path, field, e)
    })?;
    Ok((graph, demands))
}
