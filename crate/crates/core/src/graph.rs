//! Undirected unit-weight topologies and shortest-path counting.
//!
//! Every other module works on a [`Graph`] with dense, zero-based node ids. The graph is
//! immutable once built and always connected: disconnected input is either rejected
//! ([`Graph::from_edges`]) or reduced to its maximal connected component
//! ([`maximal_connected_component`]).

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense, zero-based node identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(u32);

impl NodeId {
    pub const fn new(index: usize) -> Self {
        Self(index as u32)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(index: usize) -> Self {
        Self::new(index)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("node id {id} out of range for {node_count} nodes")]
    NodeIdOutOfRange { id: usize, node_count: usize },
    #[error("graph is disconnected: node {unreachable} is unreachable from node 0")]
    DisconnectedGraph { unreachable: usize },
}

/// Simple, undirected, connected graph with unit link weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    // sorted, deduplicated neighbor lists
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, deduplicating repeated pairs.
    ///
    /// Rejects self-loops, out-of-range ids and disconnected input.
    pub fn from_edges(edges: &[(usize, usize)], node_count: usize) -> Result<Self, GraphError> {
        let graph = Self::from_edges_unchecked_connectivity(edges, node_count)?;
        if let Some(unreachable) = graph.first_unreachable() {
            return Err(GraphError::DisconnectedGraph { unreachable });
        }
        Ok(graph)
    }

    fn from_edges_unchecked_connectivity(
        edges: &[(usize, usize)],
        node_count: usize,
    ) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); node_count];
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= node_count {
                    return Err(GraphError::NodeIdOutOfRange { id, node_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(NodeId::new(v));
            adj[v].push(NodeId::new(u));
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Self {
            adj,
            edge_count: edge_count / 2,
        })
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in &self.adj[u] {
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    stack.push(v.index());
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + Clone {
        (0..self.adj.len()).map(NodeId::new)
    }

    /// Neighbors of `u` in ascending id order.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u.index()]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u.index()].len()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.index() < self.adj.len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u.index()].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = NodeId::new(u);
            list.iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }

    /// Hop distances from `source` to every node.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::with_capacity(self.node_count());
        dist[source.index()] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u.index()] + 1;
            for &v in self.neighbors(u) {
                if dist[v.index()] == u32::MAX {
                    dist[v.index()] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Nodes within `radius` hops of `center`, in ascending id order.
    pub fn ball(&self, center: NodeId, radius: u32) -> Vec<NodeId> {
        self.bfs_distances(center)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d <= radius)
            .map(|(u, _)| NodeId::new(u))
            .collect()
    }

    pub fn eccentricity(&self, u: NodeId) -> u32 {
        self.bfs_distances(u).into_iter().max().unwrap_or(0)
    }
}

/// Shortest-path counts exact in 64 bits, or floating point after an overflow.
#[derive(Debug, Clone, PartialEq)]
pub enum PathCounts {
    Exact(Vec<u64>),
    Approximate(Vec<f64>),
}

/// Distances, shortest-path counts and predecessor DAG toward a fixed target.
#[derive(Debug, Clone)]
pub struct ShortestPathField {
    target: NodeId,
    dist: Vec<u32>,
    counts: PathCounts,
    sigma: Vec<f64>,
    preds: Vec<Vec<NodeId>>,
    // ascending (dist, id)
    order: Vec<NodeId>,
}

impl ShortestPathField {
    /// Single BFS from `target`; O(|V| + |E|) plus a sort of the visiting order.
    pub fn new(g: &Graph, target: NodeId) -> Self {
        let n = g.node_count();
        let dist = g.bfs_distances(target);

        let mut order: Vec<NodeId> = g.nodes().collect();
        order.sort_by_key(|u| (dist[u.index()], *u));

        let mut preds = vec![Vec::new(); n];
        for u in g.nodes() {
            let du = dist[u.index()];
            if du == 0 {
                continue;
            }
            preds[u.index()] = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|p| dist[p.index()] + 1 == du)
                .collect();
        }

        let mut exact = vec![0u64; n];
        let mut overflowed = false;
        exact[target.index()] = 1;
        'count: for &u in order.iter().skip(1) {
            let mut total = 0u64;
            for p in &preds[u.index()] {
                match total.checked_add(exact[p.index()]) {
                    Some(t) => total = t,
                    None => {
                        overflowed = true;
                        break 'count;
                    }
                }
            }
            exact[u.index()] = total;
        }

        let (counts, sigma) = if overflowed {
            log::warn!("shortest-path counts toward node {target} overflow u64; using f64");
            let mut sigma = vec![0f64; n];
            sigma[target.index()] = 1.0;
            for &u in order.iter().skip(1) {
                sigma[u.index()] = preds[u.index()].iter().map(|p| sigma[p.index()]).sum();
            }
            (PathCounts::Approximate(sigma.clone()), sigma)
        } else {
            let sigma = exact.iter().map(|&c| c as f64).collect();
            (PathCounts::Exact(exact), sigma)
        };

        Self {
            target,
            dist,
            counts,
            sigma,
            preds,
            order,
        }
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn dist(&self, u: NodeId) -> u32 {
        self.dist[u.index()]
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    /// Number of shortest paths from `u` to the target, as a float.
    pub fn sigma(&self, u: NodeId) -> f64 {
        self.sigma[u.index()]
    }

    /// Exact path count, or `None` if the counts overflowed 64 bits.
    pub fn sigma_exact(&self, u: NodeId) -> Option<u64> {
        match &self.counts {
            PathCounts::Exact(c) => Some(c[u.index()]),
            PathCounts::Approximate(_) => None,
        }
    }

    pub fn counts(&self) -> &PathCounts {
        &self.counts
    }

    pub fn overflowed(&self) -> bool {
        matches!(self.counts, PathCounts::Approximate(_))
    }

    /// Neighbors of `u` one hop closer to the target, ascending.
    pub fn preds(&self, u: NodeId) -> &[NodeId] {
        &self.preds[u.index()]
    }

    /// Nodes by ascending distance to the target, ascending id within a level.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }
}

/// Dense all-pairs hop distance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut data = Vec::with_capacity(n * n);
        for u in g.nodes() {
            data.extend(g.bfs_distances(u));
        }
        Self { n, data }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> u32 {
        self.data[u.index() * self.n + v.index()]
    }

    pub fn row(&self, u: NodeId) -> &[u32] {
        &self.data[u.index() * self.n..(u.index() + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

pub fn hop_distance_matrix(g: &Graph) -> DistanceMatrix {
    DistanceMatrix::new(g)
}

/// Extracts the largest connected component and re-densifies its ids.
///
/// Ties between equally large components go to the one holding the smallest original id.
/// Surviving nodes keep their relative order. The returned map sends each original id to
/// its new id, or `None` if the node was dropped.
pub fn maximal_connected_component(
    edges: &[(usize, usize)],
    node_count: usize,
) -> Result<(Graph, Vec<Option<NodeId>>), GraphError> {
    let raw = Graph::from_edges_unchecked_connectivity(edges, node_count)?;

    let mut component = vec![usize::MAX; node_count];
    let mut best = (0usize, 0usize); // (size, component index)
    let mut next_component = 0;
    for start in 0..node_count {
        if component[start] != usize::MAX {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![start];
        component[start] = next_component;
        while let Some(u) = stack.pop() {
            size += 1;
            for v in raw.neighbors(NodeId::new(u)) {
                if component[v.index()] == usize::MAX {
                    component[v.index()] = next_component;
                    stack.push(v.index());
                }
            }
        }
        // components are discovered in order of their smallest id, so strict `>` keeps
        // the earliest of equally sized ones
        if size > best.0 {
            best = (size, next_component);
        }
        next_component += 1;
    }

    let mut map = vec![None; node_count];
    let mut kept = 0;
    for (old, &c) in component.iter().enumerate() {
        if c == best.1 {
            map[old] = Some(NodeId::new(kept));
            kept += 1;
        }
    }
    let remapped: Vec<(usize, usize)> = raw
        .edges()
        .filter_map(|(u, v)| Some((map[u.index()]?.index(), map[v.index()]?.index())))
        .collect();
    let graph = Graph::from_edges(&remapped, kept)?;
    Ok((graph, map))
}
