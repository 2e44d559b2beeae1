//! Seeded random scenarios.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use transmig_core::{CodecRate, Demand, DemandSet, GraphBuilder, ModelError, NetworkGraph, NodeId, Roles};

/// Attempts at drawing a connected graph before giving up.
pub const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Topology {
    /// Each pair joined independently with probability `mean_degree / (n - 1)`.
    ErdosRenyi { mean_degree: f64 },
    /// Ring lattice of even `degree`, each edge rewired with probability `rewire`.
    WattsStrogatz { degree: usize, rewire: f64 },
}

impl Topology {
    pub fn name(&self) -> &'static str {
        match self {
            Topology::ErdosRenyi { .. } => "erdos-renyi",
            Topology::WattsStrogatz { .. } => "watts-strogatz",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodecSpec {
    pub label: String,
    pub bitrate: f64,
}

pub fn default_codecs() -> Vec<CodecSpec> {
    [("4K", 100.0), ("HD", 25.0), ("SD", 5.0)]
        .into_iter()
        .map(|(label, bitrate)| CodecSpec { label: label.into(), bitrate })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub nodes: usize,
    pub topology: Topology,
    pub candidate_fraction: f64,
    /// Upper bound on candidate sites after applying the fraction.
    #[serde(default)]
    pub max_candidates: Option<usize>,
    pub client_fraction: f64,
    #[serde(default = "one")]
    pub sources: usize,
    #[serde(default = "two")]
    pub contents: usize,
    #[serde(default = "default_codecs")]
    pub codecs: Vec<CodecSpec>,
    #[serde(default = "big_capacity")]
    pub capacity: f64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

fn big_capacity() -> f64 {
    1e6
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GenerateError {
    #[error("generator: {0}")]
    Spec(&'static str),
    #[error("no connected graph after {attempts} attempts from seed {seed}")]
    NotConnected { seed: u64, attempts: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: NetworkGraph,
    pub demands: DemandSet,
    /// Sub-seed of the attempt that produced a connected graph.
    pub sub_seed: u64,
}

impl GeneratorSpec {
    pub fn new(nodes: usize, topology: Topology, seed: u64) -> Self {
        Self {
            nodes,
            topology,
            candidate_fraction: 0.2,
            max_candidates: None,
            client_fraction: 0.2,
            sources: 1,
            contents: 2,
            codecs: default_codecs(),
            capacity: big_capacity(),
            seed,
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        if self.nodes < 3 {
            return Err(GenerateError::Spec("need at least 3 nodes"));
        }
        if !(self.candidate_fraction > 0.0 && self.candidate_fraction <= 1.0) {
            return Err(GenerateError::Spec("candidate_fraction must lie in (0, 1]"));
        }
        if !(self.client_fraction > 0.0 && self.client_fraction < 1.0) {
            return Err(GenerateError::Spec("client_fraction must lie in (0, 1)"));
        }
        if self.sources == 0 || self.sources >= self.nodes {
            return Err(GenerateError::Spec("source count must lie in [1, nodes)"));
        }
        if self.contents == 0 || self.codecs.is_empty() {
            return Err(GenerateError::Spec("need at least one content and one codec"));
        }
        match self.topology {
            Topology::ErdosRenyi { mean_degree } if !(mean_degree > 0.0) => {
                Err(GenerateError::Spec("mean_degree must be positive"))
            }
            Topology::WattsStrogatz { degree, rewire }
                if degree < 2 || degree % 2 == 1 || degree >= self.nodes || !(0.0..=1.0).contains(&rewire) =>
            {
                Err(GenerateError::Spec("watts-strogatz needs an even degree in [2, nodes) and rewire in [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

fn edges(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let n = spec.nodes;
    match spec.topology {
        Topology::ErdosRenyi { mean_degree } => {
            let p = (mean_degree / (n - 1) as f64).min(1.0);
            let mut out = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(p) {
                        out.push((a, b));
                    }
                }
            }
            out
        }
        Topology::WattsStrogatz { degree, rewire } => {
            let mut adj = vec![std::collections::BTreeSet::new(); n];
            for a in 0..n {
                for k in 1..=degree / 2 {
                    let b = (a + k) % n;
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
            for a in 0..n {
                for k in 1..=degree / 2 {
                    let b = (a + k) % n;
                    if !adj[a].contains(&b) || !rng.gen_bool(rewire) {
                        continue;
                    }
                    let c = rng.gen_range(0..n);
                    if c == a || adj[a].contains(&c) {
                        continue;
                    }
                    adj[a].remove(&b);
                    adj[b].remove(&a);
                    adj[a].insert(c);
                    adj[c].insert(a);
                }
            }
            let mut out = Vec::new();
            for (a, nbrs) in adj.iter().enumerate() {
                out.extend(nbrs.iter().filter(|&&b| b > a).map(|&b| (a, b)));
            }
            out
        }
    }
}

fn count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64).round() as usize).max(1)
}

/// Draws a connected scenario. Attempt `k` uses sub-seed `seed + k`.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenerateError> {
    spec.validate()?;
    let n = spec.nodes;
    for attempt in 0..MAX_ATTEMPTS {
        let sub_seed = spec.seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let edge_list = edges(spec, &mut rng);

        let mut roles = vec![Roles::NONE; n];
        let sources = index::sample(&mut rng, n, spec.sources).into_vec();
        for &s in &sources {
            roles[s] = Roles::SOURCE;
        }
        let mut cand = count(spec.candidate_fraction, n).min(n);
        if let Some(cap) = spec.max_candidates {
            cand = cand.min(cap.max(1));
        }
        for c in index::sample(&mut rng, n, cand) {
            roles[c] = roles[c].union(Roles::CANDIDATE);
        }
        let others: Vec<usize> = (0..n).filter(|i| !sources.contains(i)).collect();
        let clients = count(spec.client_fraction, n).min(others.len());
        let client_ids: Vec<usize> = index::sample(&mut rng, others.len(), clients)
            .into_iter()
            .map(|i| others[i])
            .collect();
        for &c in &client_ids {
            roles[c] = roles[c].union(Roles::CLIENT);
        }

        let mut b = GraphBuilder::new();
        for (i, r) in roles.iter().enumerate() {
            b.add_node(NodeId(i as u32), *r);
        }
        for (x, y) in edge_list {
            b.add_edge(NodeId(x as u32), NodeId(y as u32), spec.capacity);
        }
        let graph = match b.build() {
            Ok(g) => g,
            Err(ModelError::Disconnected(_)) | Err(ModelError::EmptyGraph) => continue,
            Err(e) => return Err(e.into()),
        };

        let mut sorted_clients = client_ids;
        sorted_clients.sort_unstable();
        let demands = sorted_clients
            .into_iter()
            .map(|c| {
                let src = sources[rng.gen_range(0..sources.len())];
                let codec = &spec.codecs[rng.gen_range(0..spec.codecs.len())];
                let content = format!("c{}", rng.gen_range(0..spec.contents));
                Demand::new(
                    NodeId(src as u32),
                    NodeId(c as u32),
                    CodecRate::new(codec.label.clone(), codec.bitrate),
                    content,
                )
            })
            .collect();
        let demands = DemandSet::new(&graph, demands)?;
        return Ok(Generated { graph, demands, sub_seed });
    }
    Err(GenerateError::NotConnected {
        seed: spec.seed,
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_and_reproducible() {
        for topology in [
            Topology::ErdosRenyi { mean_degree: 3.0 },
            Topology::WattsStrogatz { degree: 4, rewire: 0.2 },
        ] {
            let spec = GeneratorSpec::new(60, topology, 5);
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert!(a.graph.edges().eq(b.graph.edges()));
            assert_eq!(a.demands, b.demands);
            assert_eq!(a.graph.node_count(), 60);
            assert_eq!(a.graph.candidates().len(), 12);
            assert_eq!(a.demands.len(), 12);
        }
    }

    #[test]
    fn sparse_graphs_retry_with_new_sub_seeds() {
        let spec = GeneratorSpec::new(30, Topology::ErdosRenyi { mean_degree: 2.5 }, 0);
        let g = generate(&spec).unwrap();
        assert!(g.sub_seed >= spec.seed);
        let hopeless = GeneratorSpec::new(30, Topology::ErdosRenyi { mean_degree: 0.01 }, 0);
        assert!(matches!(generate(&hopeless), Err(GenerateError::NotConnected { .. })));
    }

    #[test]
    fn candidate_cap_applies() {
        let mut spec = GeneratorSpec::new(15, Topology::ErdosRenyi { mean_degree: 3.0 }, 2);
        spec.candidate_fraction = 0.9;
        spec.max_candidates = Some(8);
        assert_eq!(generate(&spec).unwrap().graph.candidates().len(), 8);
    }

    #[test]
    fn bad_specs() {
        let mut spec = GeneratorSpec::new(15, Topology::WattsStrogatz { degree: 3, rewire: 0.1 }, 2);
        assert!(generate(&spec).is_err());
        spec.topology = Topology::WattsStrogatz { degree: 4, rewire: 0.1 };
        spec.client_fraction = 0.0;
        assert!(generate(&spec).is_err());
    }
}
