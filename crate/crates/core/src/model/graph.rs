use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::ModelError;

/// Hop count reported for nodes that cannot be reached from the origin.
pub const UNREACHABLE: u32 = u32::MAX;

/// Identifier of a node in a [`NetworkGraph`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edge, stored with the smaller endpoint first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(NodeId, NodeId);

impl EdgeKey {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.0, self.1)
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Roles a node plays in a scenario. A node may hold several at once.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Roles {
    pub source: bool,
    pub candidate: bool,
    pub client: bool,
}

impl Roles {
    pub const NONE: Roles = Roles {
        source: false,
        candidate: false,
        client: false,
    };
    pub const SOURCE: Roles = Roles {
        source: true,
        ..Roles::NONE
    };
    pub const CANDIDATE: Roles = Roles {
        candidate: true,
        ..Roles::NONE
    };
    pub const CLIENT: Roles = Roles {
        client: true,
        ..Roles::NONE
    };

    pub fn union(self, other: Roles) -> Roles {
        Roles {
            source: self.source || other.source,
            candidate: self.candidate || other.candidate,
            client: self.client || other.client,
        }
    }
}

/// Collects nodes and edges, then validates them into a [`NetworkGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: BTreeMap<NodeId, Roles>,
    duplicate_node: Option<NodeId>,
    edges: Vec<(NodeId, NodeId, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, id: NodeId, roles: Roles) -> Self {
        self.add_node(id, roles);
        self
    }

    pub fn edge(mut self, a: NodeId, b: NodeId, capacity: f64) -> Self {
        self.add_edge(a, b, capacity);
        self
    }

    pub fn add_node(&mut self, id: NodeId, roles: Roles) {
        if self.nodes.insert(id, roles).is_some() && self.duplicate_node.is_none() {
            self.duplicate_node = Some(id);
        }
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId, capacity: f64) {
        self.edges.push((a, b, capacity));
    }

    pub fn build(self) -> Result<NetworkGraph, ModelError> {
        if let Some(id) = self.duplicate_node {
            return Err(ModelError::DuplicateNode(id));
        }
        if self.nodes.is_empty() {
            return Err(ModelError::EmptyGraph);
        }
        let ids: Vec<NodeId> = self.nodes.keys().copied().collect();
        let roles: Vec<Roles> = self.nodes.values().copied().collect();
        let index = |id: NodeId| ids.binary_search(&id).map_err(|_| ModelError::UnknownNode(id));

        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
        let mut capacity = BTreeMap::new();
        for (a, b, cap) in self.edges {
            let ia = index(a)?;
            let ib = index(b)?;
            if ia == ib {
                return Err(ModelError::SelfLoop(a));
            }
            if !(cap > 0.0) || !cap.is_finite() {
                return Err(ModelError::InvalidCapacity(EdgeKey::new(a, b)));
            }
            let key = EdgeKey::new(a, b);
            if capacity.insert(key, cap).is_some() {
                return Err(ModelError::DuplicateEdge(key));
            }
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }

        let graph = NetworkGraph {
            ids,
            roles,
            adjacency,
            capacity,
        };
        let reach = graph.bfs(0);
        if let Some(i) = reach.iter().position(|&d| d == UNREACHABLE) {
            return Err(ModelError::Disconnected(graph.ids[i]));
        }
        Ok(graph)
    }
}

/// Connected, undirected, capacitated graph with source, client and
/// candidate-site role sets.
#[derive(Clone, Debug)]
pub struct NetworkGraph {
    ids: Vec<NodeId>,
    roles: Vec<Roles>,
    adjacency: Vec<Vec<usize>>,
    capacity: BTreeMap<EdgeKey, f64>,
}

impl NetworkGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.capacity.len()
    }

    /// All node ids in ascending order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    pub fn roles(&self, id: NodeId) -> Option<Roles> {
        self.index_of(id).map(|i| self.roles[i])
    }

    pub fn sources(&self) -> Vec<NodeId> {
        self.with_role(|r| r.source)
    }

    pub fn clients(&self) -> Vec<NodeId> {
        self.with_role(|r| r.client)
    }

    /// Candidate transcoder sites (the set A), ascending.
    pub fn candidates(&self) -> Vec<NodeId> {
        self.with_role(|r| r.candidate)
    }

    fn with_role(&self, pick: impl Fn(&Roles) -> bool) -> Vec<NodeId> {
        self.ids
            .iter()
            .zip(&self.roles)
            .filter(|(_, r)| pick(r))
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, f64)> + '_ {
        self.capacity.iter().map(|(k, c)| (*k, *c))
    }

    pub fn capacity(&self, a: NodeId, b: NodeId) -> Option<f64> {
        self.capacity.get(&EdgeKey::new(a, b)).copied()
    }

    pub fn neighbors(&self, id: NodeId) -> Result<impl Iterator<Item = NodeId> + '_, ModelError> {
        let i = self.require(id)?;
        Ok(self.adjacency[i].iter().map(move |&j| self.ids[j]))
    }

    pub(crate) fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub(crate) fn require(&self, id: NodeId) -> Result<usize, ModelError> {
        self.index_of(id).ok_or(ModelError::UnknownNode(id))
    }

    pub(crate) fn id_at(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub(crate) fn degree_at(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    /// Unit-weight BFS from a node index; unreachable entries hold [`UNREACHABLE`].
    pub(crate) fn bfs(&self, origin: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.ids.len()];
        let mut queue = VecDeque::new();
        dist[origin] = 0;
        queue.push_back(origin);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest path from `from` to `to` as a node sequence. Among equal-length
    /// paths the lexicographically smallest node sequence is returned.
    pub fn shortest_path(&self, from: NodeId, to: NodeId) -> Result<Option<Vec<NodeId>>, ModelError> {
        let s = self.require(from)?;
        let t = self.require(to)?;
        let to_target = self.bfs(t);
        Ok(self.walk_down(s, &to_target))
    }

    /// Follows a distance-to-target field greedily, always taking the lowest
    /// neighbour that gets one hop closer.
    pub(crate) fn walk_down(&self, start: usize, to_target: &[u32]) -> Option<Vec<NodeId>> {
        if to_target[start] == UNREACHABLE {
            return None;
        }
        let mut path = Vec::with_capacity(to_target[start] as usize + 1);
        let mut at = start;
        path.push(self.ids[at]);
        while to_target[at] > 0 {
            let want = to_target[at] - 1;
            at = *self.adjacency[at].iter().find(|&&v| to_target[v] == want)?;
            path.push(self.ids[at]);
        }
        Some(path)
    }
}

/// Hop distances from `origin` to every node, [`UNREACHABLE`] where no path exists.
pub fn hop_distances(graph: &NetworkGraph, origin: NodeId) -> Result<BTreeMap<NodeId, u32>, ModelError> {
    let o = graph.require(origin)?;
    let dist = graph.bfs(o);
    Ok(graph.ids.iter().copied().zip(dist).collect())
}

/// Number of links incident to `node`.
pub fn degree(graph: &NetworkGraph, node: NodeId) -> Result<usize, ModelError> {
    graph.require(node).map(|i| graph.degree_at(i))
}

/// BFS rows for a chosen set of origins. Lookups are symmetric, so a pair is
/// answerable when either endpoint is one of the origins.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    rows: Vec<Option<Vec<u32>>>,
}

impl DistanceTable {
    pub fn from_origins(graph: &NetworkGraph, origins: impl IntoIterator<Item = NodeId>) -> Result<Self, ModelError> {
        let mut rows = vec![None; graph.node_count()];
        let wanted: BTreeSet<usize> = origins
            .into_iter()
            .map(|id| graph.require(id))
            .collect::<Result<_, _>>()?;
        for i in wanted {
            rows[i] = Some(graph.bfs(i));
        }
        Ok(Self { rows })
    }

    pub fn all_pairs(graph: &NetworkGraph) -> Self {
        Self {
            rows: (0..graph.node_count()).map(|i| Some(graph.bfs(i))).collect(),
        }
    }

    /// Distance between two node indices; panics if neither has a row.
    pub(crate) fn between(&self, a: usize, b: usize) -> u32 {
        match (&self.rows[a], &self.rows[b]) {
            (Some(row), _) => row[b],
            (None, Some(row)) => row[a],
            (None, None) => panic!("distance table has no row for either endpoint"),
        }
    }

    pub fn distance(&self, graph: &NetworkGraph, a: NodeId, b: NodeId) -> Option<u32> {
        let ia = graph.index_of(a)?;
        let ib = graph.index_of(b)?;
        match (&self.rows[ia], &self.rows[ib]) {
            (Some(row), _) => Some(row[ib]),
            (None, Some(row)) => Some(row[ia]),
            (None, None) => None,
        }
    }
}
