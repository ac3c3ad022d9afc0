//! Aggregate access cost and exact 1-median placement.
//!
//! Costs are demand-weighted hop counts summed with [`ExactSum`], so nodes whose costs are
//! equal as real numbers compare equal and land in the same tie set regardless of summation
//! order. Ties are broken uniformly at random with the caller's generator.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId};
use crate::mapping::{EffectiveDemand, Subgraph};
use crate::metrics::DemandVector;
use crate::sum::ExactSum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementResult {
    pub host: NodeId,
    pub cost: f64,
    /// Every candidate achieving `cost`, ascending.
    pub tie_set: Vec<NodeId>,
}

fn weighted_distance_sum(dist: &[u32], terms: impl Iterator<Item = (NodeId, f64)>) -> f64 {
    let mut sum = ExactSum::new();
    for (node, weight) in terms {
        let d = dist[node.index()];
        if weight != 0.0 && d != 0 {
            sum.add_product(weight, d as f64);
        }
    }
    sum.value()
}

/// `Σ_n w(n)·d(k, n)` over the whole graph.
pub fn access_cost(g: &Graph, w: &DemandVector, k: NodeId) -> f64 {
    assert_eq!(w.len(), g.node_count());
    let dist = g.bfs_distances(k);
    weighted_distance_sum(&dist, g.nodes().zip(w.as_slice().iter().copied()))
}

/// Access cost of every node, indexed by node id.
pub fn all_access_costs(g: &Graph, w: &DemandVector) -> Vec<f64> {
    g.nodes().map(|k| access_cost(g, w, k)).collect()
}

fn pick_minimum<R: Rng + ?Sized>(candidates: &[(NodeId, f64)], rng: &mut R) -> PlacementResult {
    let cost = candidates
        .iter()
        .map(|&(_, c)| c)
        .min_by(f64::total_cmp)
        .expect("at least one candidate");
    let tie_set: Vec<NodeId> = candidates
        .iter()
        .filter(|&&(_, c)| c == cost)
        .map(|&(u, _)| u)
        .collect();
    let host = *tie_set.choose(rng).expect("non-empty tie set");
    PlacementResult { host, cost, tie_set }
}

/// Placement from precomputed per-node costs: minimum, all minimizers, random pick.
pub fn placement_from_costs<R: Rng + ?Sized>(costs: &[f64], rng: &mut R) -> PlacementResult {
    let candidates: Vec<(NodeId, f64)> = costs
        .iter()
        .enumerate()
        .map(|(i, &c)| (NodeId::new(i), c))
        .collect();
    pick_minimum(&candidates, rng)
}

/// Brute-force 1-median over all nodes.
pub fn solve_1median_exact<R: Rng + ?Sized>(g: &Graph, w: &DemandVector, rng: &mut R) -> PlacementResult {
    placement_from_costs(&all_access_costs(g, w), rng)
}

/// Cost of placing the service at `x` when only the subgraph members generate demand,
/// each with its effective weight. Distances are full-graph hop counts.
pub fn effective_cost(g: &Graph, eff: &EffectiveDemand, x: NodeId) -> f64 {
    let dist = g.bfs_distances(x);
    weighted_distance_sum(&dist, eff.iter())
}

/// 1-median restricted to subgraph candidates under effective demands.
pub fn solve_1median_subgraph<R: Rng + ?Sized>(
    g: &Graph,
    sub: &Subgraph,
    eff: &EffectiveDemand,
    rng: &mut R,
) -> PlacementResult {
    assert_eq!(sub.members(), eff.members(), "effective demand must be mapped on this subgraph");
    let candidates: Vec<(NodeId, f64)> = sub
        .members()
        .iter()
        .map(|&x| (x, effective_cost(g, eff, x)))
        .collect();
    pick_minimum(&candidates, rng)
}
