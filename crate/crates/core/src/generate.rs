//! Synthetic topologies (ring, grid, Barabási–Albert) and Zipf demand generators.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::metrics::{DemandVector, GridPos};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("cluster of radius {radius} around node {head} does not fit in the {rows}x{cols} grid")]
    ClusterDoesNotFit {
        head: usize,
        radius: u32,
        rows: usize,
        cols: usize,
    },
}

pub fn gen_ring(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::InvalidParameter(format!("ring needs at least 3 nodes, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_edges(&edges, n).expect("ring is connected"))
}

/// Row-major layout of a 4-neighbor `rows × cols` lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridLayout {
    pub rows: usize,
    pub cols: usize,
}

impl GridLayout {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn node_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn node(&self, pos: GridPos) -> NodeId {
        debug_assert!(pos.row < self.rows && pos.col < self.cols);
        NodeId::new(pos.row * self.cols + pos.col)
    }

    pub fn pos(&self, u: NodeId) -> GridPos {
        GridPos::new(u.index() / self.cols, u.index() % self.cols)
    }

    pub fn graph(&self) -> Graph {
        let mut edges = Vec::with_capacity(2 * self.node_count());
        for row in 0..self.rows {
            for col in 0..self.cols {
                let u = row * self.cols + col;
                if col + 1 < self.cols {
                    edges.push((u, u + 1));
                }
                if row + 1 < self.rows {
                    edges.push((u, u + self.cols));
                }
            }
        }
        Graph::from_edges(&edges, self.node_count()).expect("grid is connected")
    }

    /// Whether the Manhattan ball of `radius` around `u` lies inside the grid.
    pub fn ball_fits(&self, u: NodeId, radius: u32) -> bool {
        let r = radius as usize;
        let p = self.pos(u);
        p.row >= r && p.row + r < self.rows && p.col >= r && p.col + r < self.cols
    }
}

pub fn gen_grid(rows: usize, cols: usize) -> Result<Graph, GenError> {
    if rows < 2 || cols < 2 {
        return Err(GenError::InvalidParameter(format!(
            "grid needs at least 2x2 nodes, got {rows}x{cols}"
        )));
    }
    Ok(GridLayout::new(rows, cols).graph())
}

/// Barabási–Albert graph: a clique on `m + 1` seed nodes, then each new node links to `m`
/// distinct existing nodes picked with probability proportional to degree.
pub fn gen_barabasi_albert<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph, GenError> {
    if m == 0 || n <= m {
        return Err(GenError::InvalidParameter(format!(
            "Barabási–Albert needs n > m >= 1, got n={n}, m={m}"
        )));
    }
    let mut edges = Vec::with_capacity(m * (m + 1) / 2 + m * (n - m - 1));
    // every node appears once per incident edge
    let mut endpoints = Vec::with_capacity(2 * edges.capacity());
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Ok(Graph::from_edges(&edges, n).expect("preferential attachment keeps the graph connected"))
}

/// Zipf weights `(1/r^s) / Σ_l 1/l^s` for ranks `r = 1..=n`.
pub fn zipf_weights(n: usize, s: f64) -> Vec<f64> {
    assert!(n >= 1 && s >= 0.0 && s.is_finite());
    let raw: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-s)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Number of nodes in a full Manhattan ball of `radius` on a grid.
pub fn cluster_size(radius: u32) -> usize {
    let r = radius as usize;
    2 * r * (r + 1) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClusterHead {
    Random,
    Fixed(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DemandAssignment {
    /// Ranks assigned to nodes by a uniform random permutation.
    RandomPermutation,
    /// Top ranks packed into the `radius`-ball around a head node of a grid.
    Clustered {
        grid: GridLayout,
        head: ClusterHead,
        radius: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipfDemandSpec {
    pub s: f64,
    pub assignment: DemandAssignment,
}

impl ZipfDemandSpec {
    pub fn random(s: f64) -> Self {
        Self {
            s,
            assignment: DemandAssignment::RandomPermutation,
        }
    }
}

/// Normalized Zipf demand, spread over the nodes as `spec.assignment` describes.
///
/// In the clustered variant the head gets rank 1, the rest of its ball gets ranks
/// `2..=K` in random order, and ranks above `K` go to the remaining nodes at random.
pub fn gen_zipf_demand<R: Rng + ?Sized>(
    g: &Graph,
    spec: &ZipfDemandSpec,
    rng: &mut R,
) -> Result<DemandVector, GenError> {
    if !(spec.s >= 0.0 && spec.s.is_finite()) {
        return Err(GenError::InvalidParameter(format!("Zipf skew must be >= 0, got {}", spec.s)));
    }
    let n = g.node_count();
    let weights = zipf_weights(n, spec.s);

    let ranked: Vec<NodeId> = match spec.assignment {
        DemandAssignment::RandomPermutation => {
            let mut nodes: Vec<NodeId> = g.nodes().collect();
            nodes.shuffle(rng);
            nodes
        }
        DemandAssignment::Clustered { grid, head, radius } => {
            clustered_ranking(g, grid, head, radius, rng)?
        }
    };

    let mut w = vec![0f64; n];
    for (node, weight) in ranked.into_iter().zip(weights) {
        w[node.index()] = weight;
    }
    Ok(DemandVector::new(w).expect("Zipf weights are positive"))
}

fn clustered_ranking<R: Rng + ?Sized>(
    g: &Graph,
    grid: GridLayout,
    head: ClusterHead,
    radius: u32,
    rng: &mut R,
) -> Result<Vec<NodeId>, GenError> {
    if grid.node_count() != g.node_count() {
        return Err(GenError::InvalidParameter(format!(
            "clustered demand needs a {}x{} grid, graph has {} nodes",
            grid.rows,
            grid.cols,
            g.node_count()
        )));
    }
    if radius == 0 {
        return Err(GenError::InvalidParameter("cluster radius must be >= 1".into()));
    }
    let head = match head {
        ClusterHead::Fixed(h) if grid.ball_fits(h, radius) => h,
        ClusterHead::Fixed(h) => {
            return Err(GenError::ClusterDoesNotFit {
                head: h.index(),
                radius,
                rows: grid.rows,
                cols: grid.cols,
            })
        }
        ClusterHead::Random => {
            let interior: Vec<NodeId> = g.nodes().filter(|&u| grid.ball_fits(u, radius)).collect();
            if interior.is_empty() {
                return Err(GenError::ClusterDoesNotFit {
                    head: 0,
                    radius,
                    rows: grid.rows,
                    cols: grid.cols,
                });
            }
            interior[rng.random_range(0..interior.len())]
        }
    };

    let center = grid.pos(head);
    let (mut ball, mut outside): (Vec<NodeId>, Vec<NodeId>) = g
        .nodes()
        .filter(|&u| u != head)
        .partition(|&u| grid.pos(u).manhattan(center) <= radius as usize);
    debug_assert_eq!(ball.len() + 1, cluster_size(radius));
    ball.shuffle(rng);
    outside.shuffle(rng);

    let mut ranked = Vec::with_capacity(g.node_count());
    ranked.push(head);
    ranked.extend(ball);
    ranked.extend(outside);
    Ok(ranked)
}

/// Ratio of the top-`k` Zipf mass to the remaining mass among `n` ranks.
pub fn spatial_contrast(k: usize, s: f64, n: usize) -> f64 {
    assert!(k >= 1 && k < n, "need 1 <= k < n");
    let head: f64 = (1..=k).map(|r| (r as f64).powf(-s)).sum();
    let tail: f64 = (k + 1..=n).map(|r| (r as f64).powf(-s)).sum();
    head / tail
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastReport {
    pub k: usize,
    /// Share of total demand held by the cluster, in `(0, 1)`.
    pub z_fraction: f64,
    pub c_sp: f64,
}

pub fn contrast_report(k: usize, s: f64, n: usize) -> ContrastReport {
    let z_fraction = zipf_weights(n, s)[..k].iter().sum::<f64>();
    ContrastReport {
        k,
        z_fraction,
        c_sp: spatial_contrast(k, s, n),
    }
}
