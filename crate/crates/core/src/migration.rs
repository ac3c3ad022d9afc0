//! Iterative service migration: cDSMA and the locality-oriented (LOM) baseline.
//!
//! Both share one loop. At the current host a candidate subgraph is chosen, outside demand
//! is mapped onto it, and the subgraph 1-median is solved. The service moves there while the
//! solved cost strictly decreases. The subgraph depends only on the host, so a revisited host
//! reproduces its earlier cost and stops the loop, which bounds the run to `|V| + 1` solves.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId, ShortestPathField};
use crate::mapping::{map_demand_with_field, select_subgraph_with_field, Subgraph};
use crate::median::{access_cost, solve_1median_subgraph};
use crate::metrics::DemandVector;

/// How the candidate subgraph is chosen at each host.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SubgraphPolicy {
    /// Top `⌈alpha·|V|⌉` nodes by wCBC toward the host (cDSMA).
    TopWcbc { alpha: f64 },
    /// Every node within `radius` hops of the host (LOM).
    Ball { radius: u32 },
}

impl SubgraphPolicy {
    fn select(&self, g: &Graph, field: &ShortestPathField, w: &DemandVector) -> Subgraph {
        match *self {
            Self::TopWcbc { alpha } => select_subgraph_with_field(field, w, alpha),
            Self::Ball { radius } => Subgraph::ball(g, field.target(), radius),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigrationTrace {
    /// Hosts in the order the service occupied them; the first is the generation node.
    pub hosts: Vec<NodeId>,
    /// Subgraph-evaluated cost of every accepted step.
    pub costs: Vec<f64>,
    /// Candidate set used by each solve, including the final rejected one.
    pub subgraphs: Vec<Vec<NodeId>>,
    pub final_host: NodeId,
    /// Full-graph access cost at `final_host`.
    pub final_global_cost: f64,
    /// Number of relocations to a different node.
    pub hop_count: usize,
    /// Number of subgraph 1-median solves.
    pub iterations: usize,
}

pub fn run_migration<R: Rng + ?Sized>(
    g: &Graph,
    w: &DemandVector,
    start: NodeId,
    policy: SubgraphPolicy,
    rng: &mut R,
) -> MigrationTrace {
    assert!(g.contains(start), "start node {start} not in graph");
    assert_eq!(w.len(), g.node_count());
    // the loop provably stops within |V| + 1 solves; the guard only catches regressions
    let guard = 2 * (g.node_count() + 1);

    let mut current = start;
    let mut current_cost = f64::INFINITY;
    let mut hosts = vec![start];
    let mut costs = Vec::new();
    let mut subgraphs = Vec::new();
    let mut iterations = 0;
    while iterations < guard {
        let field = ShortestPathField::new(g, current);
        let sub = policy.select(g, &field, w);
        let eff = map_demand_with_field(&field, w, &sub);
        let next = solve_1median_subgraph(g, &sub, &eff, rng);
        iterations += 1;
        subgraphs.push(sub.members().to_vec());
        if next.cost >= current_cost {
            break;
        }
        current_cost = next.cost;
        costs.push(next.cost);
        if next.host != current {
            current = next.host;
            hosts.push(current);
        }
    }

    MigrationTrace {
        hop_count: hosts.len() - 1,
        final_host: current,
        final_global_cost: access_cost(g, w, current),
        hosts,
        costs,
        subgraphs,
        iterations,
    }
}

pub fn run_cdsma<R: Rng + ?Sized>(
    g: &Graph,
    w: &DemandVector,
    start: NodeId,
    alpha: f64,
    rng: &mut R,
) -> MigrationTrace {
    run_migration(g, w, start, SubgraphPolicy::TopWcbc { alpha }, rng)
}

pub fn run_lom<R: Rng + ?Sized>(
    g: &Graph,
    w: &DemandVector,
    start: NodeId,
    radius: u32,
    rng: &mut R,
) -> MigrationTrace {
    assert!(radius >= 1, "LOM radius must be at least 1");
    run_migration(g, w, start, SubgraphPolicy::Ball { radius }, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TraceViolation {
    NonDecreasingCost,
    IterationBoundExceeded,
    MultipleRevisits,
    InvalidHost,
}

impl fmt::Display for TraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Self::NonDecreasingCost => "accepted costs are not strictly decreasing",
            Self::IterationBoundExceeded => "more than |V| + 1 iterations",
            Self::MultipleRevisits => "more than one host revisited",
            Self::InvalidHost => "host outside the graph or inconsistent with the trace",
        };
        f.write_str(msg)
    }
}

/// Checks a trace against the convergence guarantees. Empty means valid.
pub fn verify_trace(trace: &MigrationTrace, g: &Graph) -> Vec<TraceViolation> {
    let mut out = Vec::new();
    if trace.costs.windows(2).any(|c| c[1] >= c[0]) {
        out.push(TraceViolation::NonDecreasingCost);
    }
    if trace.iterations > g.node_count() + 1 {
        out.push(TraceViolation::IterationBoundExceeded);
    }
    let mut visits: HashMap<NodeId, usize> = HashMap::new();
    for &h in &trace.hosts {
        *visits.entry(h).or_default() += 1;
    }
    let revisited = visits.values().filter(|&&c| c >= 2).count();
    if revisited > 1 || visits.values().any(|&c| c > 2) {
        out.push(TraceViolation::MultipleRevisits);
    }
    let consistent = trace.hosts.iter().all(|&h| g.contains(h))
        && trace.hosts.last() == Some(&trace.final_host)
        && trace.hop_count + 1 == trace.hosts.len();
    if !consistent {
        out.push(TraceViolation::InvalidHost);
    }
    out
}
