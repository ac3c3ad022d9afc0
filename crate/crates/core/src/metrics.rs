//! Betweenness-family centralities: BC, conditional BC toward a target, and its
//! demand-weighted variant (wCBC), plus closed forms for rings and grids under uniform
//! demand.
//!
//! Conditional variants count the source's own term in full: a node always lies on its own
//! shortest paths to the target, so `wCBC(u; t) >= w(u)` for every `u != t`. The target's
//! own value is defined as zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId, ShortestPathField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DemandError {
    #[error("demand vector is empty")]
    Empty,
    #[error("negative demand {value} at node {node}")]
    Negative { node: usize, value: f64 },
    #[error("non-finite demand at node {node}")]
    NonFinite { node: usize },
    #[error("demand vector has no positive entry")]
    AllZero,
}

/// Per-node nonnegative service demand with at least one positive entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DemandVector(Vec<f64>);

impl DemandVector {
    pub fn new(values: Vec<f64>) -> Result<Self, DemandError> {
        if values.is_empty() {
            return Err(DemandError::Empty);
        }
        for (node, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(DemandError::NonFinite { node });
            }
            if value < 0.0 {
                return Err(DemandError::Negative { node, value });
            }
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(DemandError::AllZero);
        }
        Ok(Self(values))
    }

    /// Demand `value` at every one of `node_count` nodes.
    pub fn uniform(node_count: usize, value: f64) -> Self {
        Self::new(vec![value; node_count]).expect("uniform demand must be positive")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, u: NodeId) -> f64 {
        self.0[u.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Multiplies every entry by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite());
        Self(self.0.iter().map(|w| w * factor).collect())
    }
}

impl TryFrom<Vec<f64>> for DemandVector {
    type Error = DemandError;
    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<DemandVector> for Vec<f64> {
    fn from(w: DemandVector) -> Self {
        w.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CentralityKind {
    Betweenness,
    Conditional,
    WeightedConditional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub values: Vec<f64>,
    pub kind: CentralityKind,
    /// Reference node for conditional kinds.
    pub target: Option<NodeId>,
}

impl CentralityVector {
    pub fn get(&self, u: NodeId) -> f64 {
        self.values[u.index()]
    }
}

/// Demand-weighted shortest-path flow toward the field's target.
///
/// Every node injects its own demand and forwards everything it holds to its predecessors
/// in proportion to their path counts. What passes through `u` is exactly
/// `Σ_s w(s)·σ_st(u)/σ_st` with the self term included.
pub(crate) fn dependency_flow(field: &ShortestPathField, demand: &[f64]) -> Vec<f64> {
    let mut flow = demand.to_vec();
    for &u in field.order().iter().rev() {
        let carried = flow[u.index()];
        if carried == 0.0 || field.dist(u) == 0 {
            continue;
        }
        let sigma_u = field.sigma(u);
        for &p in field.preds(u) {
            flow[p.index()] += carried * field.sigma(p) / sigma_u;
        }
    }
    flow
}

pub fn weighted_cbc(g: &Graph, w: &DemandVector, t: NodeId) -> CentralityVector {
    assert_eq!(w.len(), g.node_count(), "demand vector length must match the graph");
    let field = ShortestPathField::new(g, t);
    weighted_cbc_with_field(&field, w)
}

pub fn weighted_cbc_with_field(field: &ShortestPathField, w: &DemandVector) -> CentralityVector {
    let mut values = dependency_flow(field, w.as_slice());
    values[field.target().index()] = 0.0;
    CentralityVector {
        values,
        kind: CentralityKind::WeightedConditional,
        target: Some(field.target()),
    }
}

pub fn conditional_bc(g: &Graph, t: NodeId) -> CentralityVector {
    let field = ShortestPathField::new(g, t);
    let mut values = dependency_flow(&field, &vec![1.0; g.node_count()]);
    values[t.index()] = 0.0;
    CentralityVector {
        values,
        kind: CentralityKind::Conditional,
        target: Some(t),
    }
}

/// Classic betweenness over unordered pairs, endpoints excluded.
///
/// Uses `BC(u) = ½ Σ_{t≠u} (CBC(u;t) − 1)`: removing the self term from each conditional
/// value leaves the pairs `{s, t}` that route through `u`, each counted once per endpoint.
pub fn betweenness_centrality(g: &Graph) -> CentralityVector {
    let n = g.node_count();
    let mut values = vec![0f64; n];
    let ones = vec![1.0; n];
    for t in g.nodes() {
        let field = ShortestPathField::new(g, t);
        let flow = dependency_flow(&field, &ones);
        for u in g.nodes().filter(|&u| u != t) {
            values[u.index()] += flow[u.index()] - 1.0;
        }
    }
    for v in &mut values {
        *v *= 0.5;
    }
    CentralityVector {
        values,
        kind: CentralityKind::Betweenness,
        target: None,
    }
}

/// Uniform-demand CBC on an `n`-node ring at hop distance `d` from the target.
///
/// Evaluates `max((n−1)/2 − d, 0)` for even `n` and `max((n+1)/2 − d, 0)` for odd `n`. The
/// odd case equals [`conditional_bc`] on the ring; the even case omits the self term and
/// falls one below it.
pub fn ring_cbc_closed_form(n: usize, d: usize) -> f64 {
    assert!(n >= 3, "ring needs at least three nodes");
    assert!((1..=n / 2).contains(&d), "distance must be within 1..=n/2");
    let half = if n.is_multiple_of(2) {
        (n as f64 - 1.0) / 2.0
    } else {
        (n as f64 + 1.0) / 2.0
    };
    (half - d as f64).max(0.0)
}

/// Zero-based `(row, col)` position in a rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

impl GridPos {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn manhattan(self, other: Self) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
}

/// Number of monotone lattice paths between two grid positions.
fn lattice_paths(a: GridPos, b: GridPos) -> f64 {
    binomial(a.manhattan(b), a.row.abs_diff(b.row))
}

/// Uniform-demand CBC of `u` toward `t` on a `rows × cols` 4-neighbor grid.
///
/// Sums, over every source position lying on some shortest path through `u`, the ratio of
/// lattice paths through `u` to all lattice paths toward `t`.
pub fn grid_cbc_closed_form(rows: usize, cols: usize, u: GridPos, t: GridPos) -> f64 {
    assert!(u.row < rows && u.col < cols && t.row < rows && t.col < cols);
    assert_ne!(u, t, "u must differ from t");
    let through = lattice_paths(u, t);
    let mut total = 0.0;
    for row in 0..rows {
        for col in 0..cols {
            let s = GridPos::new(row, col);
            if s.manhattan(t) == s.manhattan(u) + u.manhattan(t) {
                total += lattice_paths(s, u) * through / lattice_paths(s, t);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: usize) -> NodeId {
        NodeId::new(i)
    }

    fn path(len: usize) -> Graph {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Graph::from_edges(&edges, len).unwrap()
    }

    fn cycle(len: usize) -> Graph {
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Graph::from_edges(&edges, len).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-9, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn demand_validation() {
        assert_eq!(DemandVector::new(vec![]), Err(DemandError::Empty));
        assert_eq!(DemandVector::new(vec![0.0, 0.0]), Err(DemandError::AllZero));
        assert!(matches!(
            DemandVector::new(vec![1.0, -0.5]),
            Err(DemandError::Negative { node: 1, .. })
        ));
        assert_eq!(
            DemandVector::new(vec![f64::NAN]),
            Err(DemandError::NonFinite { node: 0 })
        );
    }

    #[test]
    fn bc_examples() {
        assert_close(&betweenness_centrality(&path(3)).values, &[0.0, 1.0, 0.0]);
        let star = Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5).unwrap();
        assert_close(
            &betweenness_centrality(&star).values,
            &[6.0, 0.0, 0.0, 0.0, 0.0],
        );
        assert_close(&betweenness_centrality(&cycle(4)).values, &[0.5; 4]);
    }

    #[test]
    fn bc_on_paths_matches_closed_form() {
        for len in 2..=20 {
            let bc = betweenness_centrality(&path(len));
            let expected: Vec<f64> = (0..len).map(|i| (i * (len - 1 - i)) as f64).collect();
            assert_close(&bc.values, &expected);
        }
    }

    #[test]
    fn cbc_examples() {
        let cbc = conditional_bc(&path(3), n(2));
        assert_close(&cbc.values, &[1.0, 2.0, 0.0]);
        let ring = conditional_bc(&cycle(5), n(0));
        assert_eq!(ring.get(n(1)), 2.0);
        assert_eq!(ring.get(n(4)), 2.0);
        // leaves of a star carry nobody else's traffic
        let star = Graph::from_edges(&[(0, 1), (0, 2), (0, 3)], 4).unwrap();
        assert_eq!(conditional_bc(&star, n(1)).get(n(2)), 1.0);
    }

    #[test]
    fn wcbc_examples() {
        let w = DemandVector::new(vec![2.0, 1.0, 1.0]).unwrap();
        let v = weighted_cbc(&path(3), &w, n(2));
        assert_close(&v.values, &[2.0, 3.0, 0.0]);
        assert_eq!(v.kind, CentralityKind::WeightedConditional);
        assert_eq!(v.target, Some(n(2)));
    }

    #[test]
    fn wcbc_with_uniform_demand_is_scaled_cbc() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (3, 4)], 5).unwrap();
        for t in g.nodes() {
            let cbc = conditional_bc(&g, t);
            let w = weighted_cbc(&g, &DemandVector::uniform(5, 0.25), t);
            let scaled: Vec<f64> = cbc.values.iter().map(|v| v * 0.25).collect();
            assert_close(&w.values, &scaled);
        }
    }

    #[test]
    fn ring_closed_form_examples() {
        assert_eq!(ring_cbc_closed_form(5, 1), 2.0);
        assert_eq!(ring_cbc_closed_form(5, 2), 1.0);
        assert_eq!(ring_cbc_closed_form(6, 1), 1.5);
        assert_eq!(ring_cbc_closed_form(6, 3), 0.0);
    }

    #[test]
    fn grid_closed_form_examples() {
        // 1-based (1,1),(1,2) of a 2x2 grid
        assert_eq!(
            grid_cbc_closed_form(2, 2, GridPos::new(0, 1), GridPos::new(0, 0)),
            1.5
        );
        assert_eq!(
            grid_cbc_closed_form(1, 4, GridPos::new(0, 1), GridPos::new(0, 0)),
            3.0
        );
        assert_eq!(
            grid_cbc_closed_form(3, 3, GridPos::new(0, 0), GridPos::new(1, 1)),
            1.0
        );
    }
}
