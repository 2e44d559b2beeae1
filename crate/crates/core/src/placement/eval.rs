use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::Objective;
use crate::model::{admit_demands, DemandSet, DistanceTable, ModelError, NetworkGraph, NodeId, UNREACHABLE};

/// Scores candidate sets without materialising paths.
///
/// Load is computed from hop counts only: each leaf costs rate x
/// dist(transcoder, client) and each shared trunk costs its max rate x
/// dist(source, transcoder), which is what `network_load(build_routes(..))`
/// sums edge by edge.
pub struct Evaluator<'a> {
    graph: &'a NetworkGraph,
    demands: &'a DemandSet,
    table: DistanceTable,
    sources: Vec<usize>,
    dests: Vec<usize>,
    contents: Vec<usize>,
    rates: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    /// Precomputes BFS rows from every candidate site.
    pub fn new(graph: &'a NetworkGraph, demands: &'a DemandSet) -> Result<Self, ModelError> {
        Self::with_origins(graph, demands, graph.candidates())
    }

    pub fn with_origins(
        graph: &'a NetworkGraph,
        demands: &'a DemandSet,
        origins: impl IntoIterator<Item = NodeId>,
    ) -> Result<Self, ModelError> {
        let table = DistanceTable::from_origins(graph, origins)?;
        let mut content_ids: BTreeMap<&str, usize> = BTreeMap::new();
        let mut sources = Vec::with_capacity(demands.len());
        let mut dests = Vec::with_capacity(demands.len());
        let mut contents = Vec::with_capacity(demands.len());
        for d in demands {
            sources.push(graph.require(d.source)?);
            dests.push(graph.require(d.destination)?);
            let next = content_ids.len();
            contents.push(*content_ids.entry(d.content.as_str()).or_insert(next));
        }
        Ok(Self {
            graph,
            demands,
            table,
            sources,
            dests,
            contents,
            rates: demands.iter().map(|d| d.bitrate()).collect(),
        })
    }

    pub fn graph(&self) -> &NetworkGraph {
        self.graph
    }

    pub fn demands(&self) -> &DemandSet {
        self.demands
    }

    pub(crate) fn dist(&self, a: usize, b: usize) -> u32 {
        self.table.between(a, b)
    }

    pub(crate) fn index(&self, id: NodeId) -> usize {
        self.graph.index_of(id).expect("node belongs to the evaluator's graph")
    }

    pub(crate) fn dest_indices(&self) -> &[usize] {
        &self.dests
    }

    pub(crate) fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Position in `sites` (node indices) of the transcoder serving each
    /// demand: nearest by hops, lowest node id on ties.
    fn nearest(&self, sites: &[usize], dest: usize) -> Option<usize> {
        let mut best: Option<(u32, usize, usize)> = None;
        for (pos, &s) in sites.iter().enumerate() {
            let d = self.dist(s, dest);
            if d == UNREACHABLE {
                continue;
            }
            match best {
                Some((bd, bs, _)) if d > bd || (d == bd && s > bs) => {}
                _ => best = Some((d, s, pos)),
            }
        }
        best.map(|(_, _, pos)| pos)
    }

    /// Network load of routing through `placement`; `f64::INFINITY` if some
    /// demand cannot be served.
    pub fn load(&self, placement: &[NodeId]) -> f64 {
        if placement.is_empty() {
            return f64::INFINITY;
        }
        let sites: Vec<usize> = placement.iter().map(|&n| self.index(n)).collect();
        let mut leaves = 0.0;
        let mut trunks: Vec<(usize, usize, usize, f64)> = Vec::with_capacity(self.dests.len());
        for i in 0..self.dests.len() {
            let Some(pos) = self.nearest(&sites, self.dests[i]) else {
                return f64::INFINITY;
            };
            let site = sites[pos];
            leaves += self.rates[i] * self.dist(site, self.dests[i]) as f64;
            trunks.push((self.sources[i], site, self.contents[i], self.rates[i]));
        }
        trunks.sort_unstable_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)).then(b.3.total_cmp(&a.3)));
        let mut total = leaves;
        let mut prev: Option<(usize, usize, usize)> = None;
        for (s, site, c, rate) in trunks {
            if prev == Some((s, site, c)) {
                continue;
            }
            prev = Some((s, site, c));
            total += rate * self.dist(site, s) as f64;
        }
        total
    }

    /// Demands refused by sequential admission through `placement`.
    pub fn blocked(&self, placement: &[NodeId]) -> usize {
        admit_demands(self.graph, self.demands, placement).blocked.len()
    }

    pub fn objective(&self, objective: Objective, placement: &[NodeId]) -> f64 {
        match objective {
            Objective::NetworkLoad => self.load(placement),
            Objective::Blocked => self.blocked(placement) as f64,
        }
    }
}
