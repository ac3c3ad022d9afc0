//! 1-median subgraph selection and projection of outside demand onto it.
//!
//! A [`Subgraph`] is the candidate set for one migration step. Demand from nodes outside it
//! is credited, path by path, to the first member met on each shortest path toward the
//! current host. The host is a member and ends every such path, so no demand is lost.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, NodeId, ShortestPathField};
use crate::metrics::{weighted_cbc_with_field, DemandVector};

/// Candidate nodes for one 1-median solve, always including the current host.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subgraph {
    host: NodeId,
    members: Vec<NodeId>,
    is_member: Vec<bool>,
    alpha: Option<f64>,
}

/// Number of top-ranked nodes taken for fraction `alpha` of `node_count` nodes.
///
/// `⌈alpha·n⌉`, clamped to `1..=n`. A relative slack of 1e-9 keeps products such as
/// `0.07 × 100 = 7.000000000000001` from rounding up to the next integer.
pub fn selection_size(alpha: f64, node_count: usize) -> usize {
    assert!(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1], got {alpha}");
    let exact = alpha * node_count as f64;
    let k = (exact - 1e-9 * exact.max(1.0)).ceil() as usize;
    k.clamp(1, node_count)
}

impl Subgraph {
    /// Builds a subgraph from an explicit member list; `host` is added if missing.
    pub fn from_members(node_count: usize, host: NodeId, members: impl IntoIterator<Item = NodeId>) -> Self {
        let mut is_member = vec![false; node_count];
        is_member[host.index()] = true;
        for m in members {
            is_member[m.index()] = true;
        }
        let members = (0..node_count)
            .filter(|&i| is_member[i])
            .map(NodeId::new)
            .collect();
        Self {
            host,
            members,
            is_member,
            alpha: None,
        }
    }

    /// All nodes within `radius` hops of `host`.
    pub fn ball(g: &Graph, host: NodeId, radius: u32) -> Self {
        Self::from_members(g.node_count(), host, g.ball(host, radius))
    }

    pub fn host(&self) -> NodeId {
        self.host
    }

    /// Members in ascending id order.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.is_member[u.index()]
    }

    /// Fraction used for top-wCBC selection, `None` for other constructions.
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn node_count(&self) -> usize {
        self.is_member.len()
    }
}

/// Top `⌈alpha·|V|⌉` nodes by wCBC toward `host`, plus `host`.
pub fn select_subgraph(g: &Graph, w: &DemandVector, host: NodeId, alpha: f64) -> Subgraph {
    let field = ShortestPathField::new(g, host);
    select_subgraph_with_field(&field, w, alpha)
}

/// [`select_subgraph`] reusing a precomputed field rooted at the host.
pub fn select_subgraph_with_field(field: &ShortestPathField, w: &DemandVector, alpha: f64) -> Subgraph {
    let n = w.len();
    let k = selection_size(alpha, n);
    let wcbc = weighted_cbc_with_field(field, w);
    let mut ranked: Vec<NodeId> = (0..n).map(NodeId::new).collect();
    // descending wCBC, ascending id among equals
    ranked.sort_by(|a, b| wcbc.get(*b).total_cmp(&wcbc.get(*a)).then(a.cmp(b)));
    ranked.truncate(k);
    let mut sub = Subgraph::from_members(n, field.target(), ranked);
    sub.alpha = Some(alpha);
    sub
}

/// Native plus mapped demand of each subgraph member.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveDemand {
    members: Vec<NodeId>,
    w_map: Vec<f64>,
    w_eff: Vec<f64>,
}

impl EffectiveDemand {
    /// Members in the same order as the subgraph they were mapped on.
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    /// Mapped demand, parallel to [`Self::members`].
    pub fn mapped(&self) -> &[f64] {
        &self.w_map
    }

    /// Effective demand, parallel to [`Self::members`].
    pub fn effective(&self) -> &[f64] {
        &self.w_eff
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.members.iter().copied().zip(self.w_eff.iter().copied())
    }

    fn position(&self, u: NodeId) -> Option<usize> {
        self.members.binary_search(&u).ok()
    }

    pub fn mapped_at(&self, u: NodeId) -> Option<f64> {
        self.position(u).map(|i| self.w_map[i])
    }

    pub fn effective_at(&self, u: NodeId) -> Option<f64> {
        self.position(u).map(|i| self.w_eff[i])
    }

    pub fn total(&self) -> f64 {
        self.w_eff.iter().sum()
    }
}

pub fn map_demand(g: &Graph, w: &DemandVector, sub: &Subgraph) -> EffectiveDemand {
    let field = ShortestPathField::new(g, sub.host());
    map_demand_with_field(&field, w, sub)
}

/// Maps outside demand onto entry members by pushing path-fraction mass down the
/// shortest-path DAG toward the host and absorbing it at the first member reached.
pub fn map_demand_with_field(field: &ShortestPathField, w: &DemandVector, sub: &Subgraph) -> EffectiveDemand {
    assert_eq!(field.target(), sub.host(), "field must be rooted at the subgraph host");
    assert_eq!(w.len(), sub.node_count());

    let mut incoming = vec![0f64; w.len()];
    let mut absorbed = vec![0f64; w.len()];
    for &u in field.order().iter().rev() {
        if sub.contains(u) {
            absorbed[u.index()] = incoming[u.index()];
            continue;
        }
        let mass = w.get(u) + incoming[u.index()];
        if mass == 0.0 {
            continue;
        }
        let sigma_u = field.sigma(u);
        for &p in field.preds(u) {
            incoming[p.index()] += mass * field.sigma(p) / sigma_u;
        }
    }

    let members = sub.members().to_vec();
    let w_map: Vec<f64> = members.iter().map(|m| absorbed[m.index()]).collect();
    let w_eff = members
        .iter()
        .zip(&w_map)
        .map(|(m, mapped)| w.get(*m) + mapped)
        .collect();
    EffectiveDemand { members, w_map, w_eff }
}
