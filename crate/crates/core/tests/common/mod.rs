//! Brute-force oracles shared by the integration suites.
//!
//! Nothing here touches `ShortestPathField`: distances come from Floyd–Warshall over the
//! raw edge list, and shortest paths are enumerated one by one.

#![allow(dead_code)]

use cdsma_core::{Graph, NodeId};
use rand::seq::SliceRandom;
use rand::Rng;

pub const INF: u32 = u32::MAX / 4;

pub struct Oracle {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
    pub dist: Vec<Vec<u32>>,
}

impl Oracle {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut dist = vec![vec![INF; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(u, v) in edges {
            if !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
            dist[u][v] = 1;
            dist[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        Self { n, adj, dist }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u.index(), v.index())).collect();
        Self::new(g.node_count(), &edges)
    }

    /// Every shortest path from `s` to `t`, as node sequences starting at `s`.
    pub fn shortest_paths(&self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![s];
        self.extend(&mut path, t, &mut out);
        out
    }

    fn extend(&self, path: &mut Vec<usize>, t: usize, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for &v in &self.adj[u] {
            if self.dist[v][t] + 1 == self.dist[u][t] {
                path.push(v);
                self.extend(path, t, out);
                path.pop();
            }
        }
    }

    /// `Σ_s w(s)·σ_st(u)/σ_st` with the self term counted, zero at `t`.
    pub fn wcbc(&self, w: &[f64], t: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for s in 0..self.n {
            let paths = self.shortest_paths(s, t);
            let share = w[s] / paths.len() as f64;
            for p in &paths {
                for &u in p {
                    if u != t {
                        out[u] += share;
                    }
                }
            }
        }
        out
    }

    /// Classic betweenness over unordered pairs with endpoints excluded.
    pub fn betweenness(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for s in 0..self.n {
            for t in 0..s {
                let paths = self.shortest_paths(s, t);
                for p in &paths {
                    for &u in &p[1..p.len() - 1] {
                        out[u] += 1.0 / paths.len() as f64;
                    }
                }
            }
        }
        out
    }

    /// Demand of each outside node credited per path to its first member.
    pub fn mapped_demand(&self, w: &[f64], members: &[bool], t: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for s in (0..self.n).filter(|&s| !members[s]) {
            let paths = self.shortest_paths(s, t);
            let share = w[s] / paths.len() as f64;
            for p in &paths {
                let entry = p.iter().copied().find(|&u| members[u]).expect("host ends every path");
                out[entry] += share;
            }
        }
        out
    }

    pub fn cost(&self, w: &[f64], k: usize) -> f64 {
        (0..self.n).map(|n| w[n] * self.dist[k][n] as f64).sum()
    }
}

pub fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

pub fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

pub fn star_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (0, i)).collect()
}

/// Paths, cycles and stars on 2..=max nodes (cycles from 3).
pub fn families(max: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut out = Vec::new();
    for n in 2..=max {
        out.push((n, path_edges(n)));
        out.push((n, star_edges(n)));
        if n >= 3 {
            out.push((n, cycle_edges(n)));
        }
    }
    out
}

/// A random connected graph on `n` nodes: random spanning tree plus extra edges.
pub fn random_connected<R: Rng>(n: usize, extra_p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent, order[i]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(extra_p) && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Every connected labeled graph on exactly `n` nodes (use for n <= 5).
pub fn all_connected(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect::<Vec<_>>()
        })
        .filter(|edges| Graph::from_edges(edges, n).is_ok())
        .collect()
}

pub fn random_demand<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..10.0) })
        .collect();
    w[rng.random_range(0..n)] += 1.0;
    w
}

pub fn node(i: usize) -> NodeId {
    NodeId::new(i)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
