use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::graph::UNREACHABLE;
use super::{DemandSet, EdgeKey, ModelError, NetworkGraph, NodeId};

/// Source-to-transcoder stream shared by every demand for the same content
/// assigned to the same transcoder. Carries the highest requested rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Trunk {
    pub source: NodeId,
    pub transcoder: NodeId,
    pub content: String,
    pub rate: f64,
    pub path: Vec<NodeId>,
}

/// Per-demand stream to the client, either from a transcoder or (direct
/// routing) from the source itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    pub demand: usize,
    pub via: Option<NodeId>,
    pub rate: f64,
    pub path: Vec<NodeId>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RoutePlan {
    pub trunks: Vec<Trunk>,
    pub leaves: Vec<Leaf>,
}

impl RoutePlan {
    /// Every stream as (rate, node path): trunks first, then leaves.
    pub fn streams(&self) -> impl Iterator<Item = (f64, &[NodeId])> {
        self.trunks
            .iter()
            .map(|t| (t.rate, t.path.as_slice()))
            .chain(self.leaves.iter().map(|l| (l.rate, l.path.as_slice())))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadReport {
    /// Sum of bitrate x hop count over every carried stream (Mb/s x hops).
    pub total_load: f64,
    pub per_edge: BTreeMap<EdgeKey, f64>,
    pub admitted: usize,
    /// Indices into the demand set of demands that were refused.
    pub blocked: Vec<usize>,
}

/// Caches BFS rows keyed by target so that paths can be walked towards it.
struct PathCache<'g> {
    graph: &'g NetworkGraph,
    rows: BTreeMap<usize, Vec<u32>>,
}

impl<'g> PathCache<'g> {
    fn new(graph: &'g NetworkGraph) -> Self {
        Self {
            graph,
            rows: BTreeMap::new(),
        }
    }

    fn row(&mut self, target: usize) -> &Vec<u32> {
        let graph = self.graph;
        self.rows.entry(target).or_insert_with(|| graph.bfs(target))
    }

    fn distance(&mut self, a: usize, b: usize) -> u32 {
        self.row(b)[a]
    }

    fn path(&mut self, from: usize, to: usize) -> Option<Vec<NodeId>> {
        let graph = self.graph;
        let row = self.row(to);
        graph.walk_down(from, row)
    }
}

struct Assigned {
    transcoder: usize,
    leaf: Vec<NodeId>,
    trunk: Vec<NodeId>,
}

/// Nearest transcoder by hops (lowest id on ties) plus its leaf and trunk paths.
fn assign(cache: &mut PathCache<'_>, transcoders: &[usize], source: usize, dest: usize) -> Option<Assigned> {
    let mut best: Option<(u32, usize)> = None;
    for &t in transcoders {
        let d = cache.distance(t, dest);
        if d == UNREACHABLE {
            continue;
        }
        let better = match best {
            None => true,
            Some((bd, bt)) => d < bd || (d == bd && t < bt),
        };
        if better {
            best = Some((d, t));
        }
    }
    let (_, transcoder) = best?;
    let leaf = cache.path(transcoder, dest)?;
    let trunk = cache.path(source, transcoder)?;
    Some(Assigned { transcoder, leaf, trunk })
}

fn transcoder_indices(graph: &NetworkGraph, placement: &[NodeId]) -> Result<Vec<usize>, ModelError> {
    let mut idx = placement.iter().map(|&n| graph.require(n)).collect::<Result<Vec<_>, _>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// Routes every demand through its closest transcoder. Trunks are shared per
/// (source, transcoder, content) at the largest assigned rate.
pub fn build_routes(graph: &NetworkGraph, demands: &DemandSet, placement: &[NodeId]) -> Result<RoutePlan, ModelError> {
    if placement.is_empty() {
        return Err(ModelError::NoTranscoder);
    }
    let transcoders = transcoder_indices(graph, placement)?;
    let mut cache = PathCache::new(graph);
    let mut trunks: BTreeMap<(NodeId, NodeId, String), Trunk> = BTreeMap::new();
    let mut leaves = Vec::with_capacity(demands.len());
    for (i, d) in demands.iter().enumerate() {
        let s = graph.require(d.source)?;
        let t = graph.require(d.destination)?;
        let a = assign(&mut cache, &transcoders, s, t).ok_or(ModelError::Unreachable {
            from: d.source,
            to: d.destination,
        })?;
        let tc = graph.id_at(a.transcoder);
        leaves.push(Leaf {
            demand: i,
            via: Some(tc),
            rate: d.bitrate(),
            path: a.leaf,
        });
        trunks
            .entry((d.source, tc, d.content.clone()))
            .and_modify(|tr| tr.rate = tr.rate.max(d.bitrate()))
            .or_insert_with(|| Trunk {
                source: d.source,
                transcoder: tc,
                content: d.content.clone(),
                rate: d.bitrate(),
                path: a.trunk,
            });
    }
    Ok(RoutePlan {
        trunks: trunks.into_values().collect(),
        leaves,
    })
}

/// Baseline without transcoders: one shortest path per demand, no sharing.
pub fn build_direct_routes(graph: &NetworkGraph, demands: &DemandSet) -> Result<RoutePlan, ModelError> {
    let mut cache = PathCache::new(graph);
    let leaves = demands
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let s = graph.require(d.source)?;
            let t = graph.require(d.destination)?;
            let path = cache.path(s, t).ok_or(ModelError::Unreachable {
                from: d.source,
                to: d.destination,
            })?;
            Ok(Leaf {
                demand: i,
                via: None,
                rate: d.bitrate(),
                path,
            })
        })
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(RoutePlan {
        trunks: Vec::new(),
        leaves,
    })
}

fn add_path(per_edge: &mut BTreeMap<EdgeKey, f64>, path: &[NodeId], rate: f64) {
    for w in path.windows(2) {
        *per_edge.entry(EdgeKey::new(w[0], w[1])).or_insert(0.0) += rate;
    }
}

/// Network load of a plan; each trunk is counted once.
pub fn network_load(plan: &RoutePlan) -> LoadReport {
    let mut per_edge = BTreeMap::new();
    let mut total = 0.0;
    for (rate, path) in plan.streams() {
        total += rate * path.len().saturating_sub(1) as f64;
        add_path(&mut per_edge, path, rate);
    }
    LoadReport {
        total_load: total,
        per_edge,
        admitted: plan.leaves.len(),
        blocked: Vec::new(),
    }
}

// Absorbs float summation noise when a load lands exactly on a capacity.
const CAPACITY_SLACK: f64 = 1e-9;

/// Sequential first-fit admission in demand order. A demand is admitted only
/// if its leaf plus any trunk increase fits on every edge. An empty placement
/// routes demands directly from their sources.
pub fn admit_demands(graph: &NetworkGraph, demands: &DemandSet, placement: &[NodeId]) -> LoadReport {
    let transcoders = match transcoder_indices(graph, placement) {
        Ok(t) => t,
        Err(_) => return all_blocked(demands),
    };
    let mut cache = PathCache::new(graph);
    let mut per_edge: BTreeMap<EdgeKey, f64> = BTreeMap::new();
    let mut trunk_rates: BTreeMap<(NodeId, NodeId, String), f64> = BTreeMap::new();
    let mut report = LoadReport::default();

    for (i, d) in demands.iter().enumerate() {
        let (Some(s), Some(t)) = (graph.index_of(d.source), graph.index_of(d.destination)) else {
            report.blocked.push(i);
            continue;
        };
        let rate = d.bitrate();
        let mut increment: BTreeMap<EdgeKey, f64> = BTreeMap::new();
        let mut trunk_update = None;
        if transcoders.is_empty() {
            match cache.path(s, t) {
                Some(p) => add_path(&mut increment, &p, rate),
                None => {
                    report.blocked.push(i);
                    continue;
                }
            }
        } else {
            let Some(a) = assign(&mut cache, &transcoders, s, t) else {
                report.blocked.push(i);
                continue;
            };
            add_path(&mut increment, &a.leaf, rate);
            let key = (d.source, graph.id_at(a.transcoder), d.content.clone());
            let current = trunk_rates.get(&key).copied().unwrap_or(0.0);
            if rate > current {
                add_path(&mut increment, &a.trunk, rate - current);
                trunk_update = Some((key, rate));
            }
        }
        let fits = increment.iter().all(|(e, inc)| {
            let (a, b) = e.endpoints();
            let cap = graph.capacity(a, b).unwrap_or(0.0);
            per_edge.get(e).copied().unwrap_or(0.0) + inc <= cap + CAPACITY_SLACK
        });
        if fits {
            for (e, inc) in increment {
                *per_edge.entry(e).or_insert(0.0) += inc;
            }
            if let Some((key, r)) = trunk_update {
                trunk_rates.insert(key, r);
            }
            report.admitted += 1;
        } else {
            report.blocked.push(i);
        }
    }
    report.total_load = per_edge.values().sum();
    report.per_edge = per_edge;
    report
}

fn all_blocked(demands: &DemandSet) -> LoadReport {
    LoadReport {
        blocked: (0..demands.len()).collect(),
        ..LoadReport::default()
    }
}
