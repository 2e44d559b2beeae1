#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transmig_core::{CodecRate, Demand, DemandSet, GraphBuilder, NetworkGraph, NodeId, Roles};

pub const INF: u32 = u32::MAX;

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_scenario(seed: u64, nodes: u32, extra_edge_p: f64, capacity: f64) -> (NetworkGraph, DemandSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new();
    let mut roles = vec![Roles::NONE; nodes as usize];
    roles[0] = Roles::SOURCE;
    for r in roles.iter_mut() {
        if rng.gen_bool(0.5) {
            *r = r.union(Roles::CANDIDATE);
        }
        if rng.gen_bool(0.4) {
            *r = r.union(Roles::CLIENT);
        }
    }
    roles[1] = roles[1].union(Roles::CANDIDATE);
    roles[nodes as usize - 1] = roles[nodes as usize - 1].union(Roles::CLIENT);
    for (i, r) in roles.iter().enumerate() {
        b.add_node(NodeId(i as u32), *r);
    }
    let mut tree = std::collections::BTreeSet::new();
    for i in 1..nodes {
        let j = rng.gen_range(0..i);
        tree.insert((j, i));
        b.add_edge(NodeId(i), NodeId(j), capacity);
    }
    for i in 0..nodes {
        for j in i + 1..nodes {
            if !tree.contains(&(i, j)) && rng.gen_bool(extra_edge_p) {
                b.add_edge(NodeId(i), NodeId(j), capacity);
            }
        }
    }
    let g = b.build().unwrap();
    let clients = g.clients();
    let codecs = [CodecRate::new("4K", 100.0), CodecRate::new("HD", 25.0), CodecRate::new("SD", 5.0)];
    let count = rng.gen_range(1..=clients.len() * 2);
    let demands = (0..count)
        .map(|_| {
            let c = clients[rng.gen_range(0..clients.len())];
            let codec = codecs[rng.gen_range(0..codecs.len())].clone();
            let content = ["a", "b"][rng.gen_range(0..2)];
            Demand::new(NodeId(0), c, codec, content)
        })
        .collect();
    let ds = DemandSet::new(&g, demands).unwrap();
    (g, ds)
}

pub struct Dist {
    pos: std::collections::BTreeMap<NodeId, usize>,
    d: Vec<Vec<u32>>,
}

impl Dist {
    pub fn get(&self, a: NodeId, b: NodeId) -> u32 {
        self.d[self.pos[&a]][self.pos[&b]]
    }
}

/// All-pairs hop counts by Floyd-Warshall.
pub fn floyd_warshall(g: &NetworkGraph) -> Dist {
    let n = g.node_count();
    let pos: std::collections::BTreeMap<NodeId, usize> = g.nodes().iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (e, _) in g.edges() {
        let (a, b) = e.endpoints();
        d[pos[&a]][pos[&b]] = 1;
        d[pos[&b]][pos[&a]] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    Dist { pos, d }
}

/// Nearest placed site to `dest`, lowest id on ties.
pub fn nearest(d: &Dist, placement: &[NodeId], dest: NodeId) -> NodeId {
    *placement
        .iter()
        .min_by_key(|t| (d.get(**t, dest), t.0))
        .unwrap()
}

/// Load of routing `demands` via `placement`, computed from the distance matrix alone.
pub fn oracle_load(d: &Dist, demands: &DemandSet, placement: &[NodeId]) -> f64 {
    let mut trunks: Vec<(NodeId, NodeId, String, f64)> = Vec::new();
    let mut total = 0.0;
    for dm in demands.iter() {
        let t = nearest(d, placement, dm.destination);
        total += dm.bitrate() * d.get(t, dm.destination) as f64;
        match trunks
            .iter_mut()
            .find(|(s, tt, c, _)| *s == dm.source && *tt == t && *c == dm.content)
        {
            Some(tr) => tr.3 = tr.3.max(dm.bitrate()),
            None => trunks.push((dm.source, t, dm.content.clone(), dm.bitrate())),
        }
    }
    for (s, t, _, r) in trunks {
        total += r * d.get(s, t) as f64;
    }
    total
}

/// Every `k`-subset of `items`.
pub fn subsets(items: &[NodeId], k: usize) -> Vec<Vec<NodeId>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for mut rest in subsets(&items[1..], k - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out.extend(subsets(&items[1..], k));
    out
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
