//! Repeated randomized experiments: normalized excess cost, migration hop counts, α sweeps
//! and the cDSMA / LOM comparison.
//!
//! Each run owns independent random streams derived from the master seed and the run index,
//! so adding runs never perturbs earlier ones and parallel execution gives the same report
//! as sequential execution.

use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;
use thiserror::Error;

use crate::generate::{
    gen_barabasi_albert, gen_grid, gen_ring, gen_zipf_demand, ClusterHead, DemandAssignment, GenError,
    GridLayout, ZipfDemandSpec,
};
use crate::graph::{Graph, NodeId};
use crate::io::{load_edge_list, IoError, TopologySnapshot};
use crate::mapping::selection_size;
use crate::median::{all_access_costs, placement_from_costs};
use crate::metrics::DemandVector;
use crate::migration::{run_migration, verify_trace, MigrationTrace, SubgraphPolicy, TraceViolation};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Generate(#[from] GenError),
    #[error("invalid experiment: {0}")]
    InvalidSpec(String),
    #[error("run {run}: trace violates {violations:?}")]
    InvariantViolation { run: usize, violations: Vec<TraceViolation> },
    #[error("no alpha reaches mean beta <= 1 + {epsilon}")]
    NoAlphaMeetsEpsilon { epsilon: f64 },
}

#[derive(Debug, Clone)]
pub enum TopologySource {
    BarabasiAlbert { nodes: usize, m: usize },
    Grid { rows: usize, cols: usize },
    Ring { nodes: usize },
    File(PathBuf),
    Fixed(Arc<TopologySnapshot>),
}

#[derive(Debug, Clone)]
pub enum DemandSource {
    /// Zipf demand with skew `s`; `cluster_radius` packs the top ranks around a random
    /// grid node.
    Zipf { s: f64, cluster_radius: Option<u32> },
    Fixed(DemandVector),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Algorithm {
    Cdsma { alpha: f64 },
    Lom { radius: u32 },
}

impl Algorithm {
    pub fn policy(self) -> SubgraphPolicy {
        match self {
            Self::Cdsma { alpha } => SubgraphPolicy::TopWcbc { alpha },
            Self::Lom { radius } => SubgraphPolicy::Ball { radius },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartPolicy {
    Random,
    Fixed(NodeId),
    /// Uniform among nodes exactly this many hops from an exact optimum.
    AtDistance(u32),
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub topology: TopologySource,
    pub demand: DemandSource,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub seed: u64,
    pub start: StartPolicy,
}

impl ExperimentSpec {
    pub fn new(topology: TopologySource, demand: DemandSource, algorithm: Algorithm) -> Self {
        Self {
            topology,
            demand,
            algorithm,
            runs: 20,
            seed: 0,
            start: StartPolicy::Random,
        }
    }

    pub fn with_runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_start(mut self, start: StartPolicy) -> Self {
        self.start = start;
        self
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.runs == 0 {
            return Err(ExperimentError::InvalidSpec("runs must be >= 1".into()));
        }
        match self.algorithm {
            Algorithm::Cdsma { alpha } if !(alpha > 0.0 && alpha <= 1.0) => {
                return Err(ExperimentError::InvalidSpec(format!("alpha must lie in (0, 1], got {alpha}")))
            }
            Algorithm::Lom { radius: 0 } => {
                return Err(ExperimentError::InvalidSpec("LOM radius must be >= 1".into()))
            }
            _ => {}
        }
        if let DemandSource::Zipf { cluster_radius: Some(_), .. } = self.demand {
            if !matches!(self.topology, TopologySource::Grid { .. }) {
                return Err(ExperimentError::InvalidSpec("clustered demand requires a grid topology".into()));
            }
        }
        Ok(())
    }

    /// Loads file topologies once so every run shares them.
    fn resolved(&self) -> Result<Self, ExperimentError> {
        self.validate()?;
        let mut spec = self.clone();
        if let TopologySource::File(path) = &self.topology {
            spec.topology = TopologySource::Fixed(Arc::new(load_edge_list(path)?));
        }
        Ok(spec)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

const INSTANCE_STREAM: u64 = 0;
const ORACLE_STREAM: u64 = 1;
const ALGORITHM_STREAM: u64 = 2;
const LOM_STREAM: u64 = 3;

fn stream(run_seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(run_seed, index))
}

/// One randomized problem instance with its exact optimum.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Arc<Graph>,
    pub demand: DemandVector,
    pub costs: Vec<f64>,
    pub optimum: NodeId,
    pub optimal_cost: f64,
}

impl Instance {
    /// Draws the topology and demand from `instance_rng`; `oracle_rng` breaks optimum ties.
    pub fn generate<R: Rng>(
        topology: &TopologySource,
        demand: &DemandSource,
        instance_rng: &mut R,
        oracle_rng: &mut R,
    ) -> Result<Self, ExperimentError> {
        let graph = Arc::new(match topology {
            TopologySource::BarabasiAlbert { nodes, m } => gen_barabasi_albert(*nodes, *m, instance_rng)?,
            TopologySource::Grid { rows, cols } => gen_grid(*rows, *cols)?,
            TopologySource::Ring { nodes } => gen_ring(*nodes)?,
            TopologySource::Fixed(snapshot) => snapshot.graph.clone(),
            TopologySource::File(path) => load_edge_list(path)?.graph,
        });
        let demand = match demand {
            DemandSource::Fixed(w) => {
                if w.len() != graph.node_count() {
                    return Err(ExperimentError::InvalidSpec(format!(
                        "demand has {} entries, topology has {} nodes",
                        w.len(),
                        graph.node_count()
                    )));
                }
                w.clone()
            }
            DemandSource::Zipf { s, cluster_radius } => {
                let assignment = match (cluster_radius, topology) {
                    (None, _) => DemandAssignment::RandomPermutation,
                    (Some(radius), TopologySource::Grid { rows, cols }) => DemandAssignment::Clustered {
                        grid: GridLayout::new(*rows, *cols),
                        head: ClusterHead::Random,
                        radius: *radius,
                    },
                    (Some(_), _) => {
                        return Err(ExperimentError::InvalidSpec(
                            "clustered demand requires a grid topology".into(),
                        ))
                    }
                };
                gen_zipf_demand(&graph, &ZipfDemandSpec { s: *s, assignment }, instance_rng)?
            }
        };
        let costs = all_access_costs(&graph, &demand);
        let opt = placement_from_costs(&costs, oracle_rng);
        Ok(Self {
            graph,
            demand,
            costs,
            optimum: opt.host,
            optimal_cost: opt.cost,
        })
    }

    /// `C_alg / C_opt` of placing at `host`.
    pub fn beta(&self, host: NodeId) -> f64 {
        let c_alg = self.costs[host.index()];
        if self.optimal_cost == 0.0 {
            if c_alg == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            c_alg / self.optimal_cost
        }
    }

    /// Nodes exactly `d` hops from the optimum, ascending.
    pub fn nodes_at_distance(&self, d: u32) -> Vec<NodeId> {
        let dist = self.graph.bfs_distances(self.optimum);
        self.graph.nodes().filter(|u| dist[u.index()] == d).collect()
    }

    fn pick_start<R: Rng>(&self, policy: StartPolicy, rng: &mut R) -> Result<Option<NodeId>, ExperimentError> {
        Ok(match policy {
            StartPolicy::Random => Some(NodeId::new(rng.random_range(0..self.graph.node_count()))),
            StartPolicy::Fixed(u) if self.graph.contains(u) => Some(u),
            StartPolicy::Fixed(u) => {
                return Err(ExperimentError::InvalidSpec(format!("start node {u} not in topology")))
            }
            StartPolicy::AtDistance(d) => {
                let candidates = self.nodes_at_distance(d);
                if candidates.is_empty() {
                    None
                } else {
                    Some(candidates[rng.random_range(0..candidates.len())])
                }
            }
        })
    }

    fn migrate(
        &self,
        run: usize,
        start: NodeId,
        algorithm: Algorithm,
        rng: &mut ChaCha8Rng,
    ) -> Result<MigrationTrace, ExperimentError> {
        let trace = run_migration(&self.graph, &self.demand, start, algorithm.policy(), rng);
        let violations = verify_trace(&trace, &self.graph);
        if !violations.is_empty() {
            return Err(ExperimentError::InvariantViolation { run, violations });
        }
        Ok(trace)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub start: NodeId,
    pub final_host: NodeId,
    pub c_alg: f64,
    pub c_opt: f64,
    pub beta: f64,
    pub h_m: usize,
    pub iterations: usize,
}

/// Mean and 95% confidence half-width `1.96·s/√n` of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub ci: f64,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        match values.len() {
            0 => Self { mean: f64::NAN, ci: f64::NAN },
            1 => Self { mean: values[0], ci: 0.0 },
            n => Self {
                mean: values.mean(),
                ci: 1.96 * values.std_dev() / (n as f64).sqrt(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub algorithm: Algorithm,
    pub node_count: usize,
    pub records: Vec<RunRecord>,
    /// Runs dropped because no start node satisfied the start policy.
    pub void_runs: usize,
    pub beta: Estimate,
    pub h_m: Estimate,
}

impl ExperimentReport {
    fn from_records(algorithm: Algorithm, node_count: usize, records: Vec<RunRecord>, void_runs: usize) -> Self {
        let betas: Vec<f64> = records.iter().map(|r| r.beta).collect();
        let hops: Vec<f64> = records.iter().map(|r| r.h_m as f64).collect();
        Self {
            algorithm,
            node_count,
            void_runs,
            beta: Estimate::of(&betas),
            h_m: Estimate::of(&hops),
            records,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        // header comes from the `RunRecord` field names
        let mut writer = csv::Writer::from_writer(out);
        for record in &self.records {
            writer.serialize(record)?;
        }
        let mut out = writer.into_inner().map_err(|e| e.into_error())?;
        writeln!(
            out,
            "# mean_beta={},ci={},mean_h_m={},ci_h_m={}",
            self.beta.mean, self.beta.ci, self.h_m.mean, self.h_m.ci
        )
    }
}

fn record(run: usize, seed: u64, start: NodeId, instance: &Instance, trace: &MigrationTrace) -> RunRecord {
    RunRecord {
        run,
        seed,
        start,
        final_host: trace.final_host,
        c_alg: trace.final_global_cost,
        c_opt: instance.optimal_cost,
        beta: instance.beta(trace.final_host),
        h_m: trace.hop_count,
        iterations: trace.iterations,
    }
}

fn run_seeds(spec: &ExperimentSpec) -> Vec<(usize, u64)> {
    (0..spec.runs).map(|i| (i, derive_seed(spec.seed, i as u64))).collect()
}

/// Runs the spec's algorithm `spec.runs` times on fresh instances.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, ExperimentError> {
    let spec = spec.resolved()?;
    let outcomes = run_seeds(&spec)
        .into_par_iter()
        .map(|(run, seed)| {
            let mut oracle_rng = stream(seed, ORACLE_STREAM);
            let instance = Instance::generate(&spec.topology, &spec.demand, &mut stream(seed, INSTANCE_STREAM), &mut oracle_rng)?;
            let Some(start) = instance.pick_start(spec.start, &mut oracle_rng)? else {
                return Ok((instance.graph.node_count(), None));
            };
            let trace = instance.migrate(run, start, spec.algorithm, &mut stream(seed, ALGORITHM_STREAM))?;
            Ok((instance.graph.node_count(), Some(record(run, seed, start, &instance, &trace))))
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;

    let node_count = outcomes.first().map_or(0, |(n, _)| *n);
    let void_runs = outcomes.iter().filter(|(_, r)| r.is_none()).count();
    let records = outcomes.into_iter().filter_map(|(_, r)| r).collect();
    Ok(ExperimentReport::from_records(spec.algorithm, node_count, records, void_runs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    /// `⌈alpha·|V|⌉` top nodes plus the host, capped at `|V|`.
    pub subgraph_size: usize,
    pub beta: Estimate,
    pub h_m: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub epsilon: f64,
    pub points: Vec<SweepPoint>,
    /// Smallest alpha with mean beta <= 1 + epsilon.
    pub alpha_epsilon: Option<f64>,
    pub subgraph_size: Option<usize>,
}

impl SweepReport {
    pub fn alpha_epsilon(&self) -> Result<f64, ExperimentError> {
        self.alpha_epsilon
            .ok_or(ExperimentError::NoAlphaMeetsEpsilon { epsilon: self.epsilon })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "alpha,subgraph_size,mean_beta,ci_beta,mean_h_m,ci_h_m")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p.alpha, p.subgraph_size, p.beta.mean, p.beta.ci, p.h_m.mean, p.h_m.ci
            )?;
        }
        match (self.alpha_epsilon, self.subgraph_size) {
            (Some(a), Some(size)) => writeln!(out, "# epsilon={},alpha_eps={},subgraph_size={}", self.epsilon, a, size),
            _ => writeln!(out, "# epsilon={},alpha_eps=none", self.epsilon),
        }
    }
}

/// Subgraph size used by cDSMA at fraction `alpha` of `node_count` nodes.
pub fn nominal_subgraph_size(alpha: f64, node_count: usize) -> usize {
    (selection_size(alpha, node_count) + 1).min(node_count)
}

/// Runs cDSMA at every alpha (ascending) on the same instances.
pub fn sweep_alpha(spec: &ExperimentSpec, alphas: &[f64], epsilon: f64) -> Result<SweepReport, ExperimentError> {
    if alphas.is_empty() || alphas.windows(2).any(|w| w[1] < w[0]) {
        return Err(ExperimentError::InvalidSpec("alphas must be non-empty and ascending".into()));
    }
    let base = spec.resolved()?;
    let mut points = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mut s = base.clone();
        s.algorithm = Algorithm::Cdsma { alpha };
        let report = run_experiment(&s)?;
        points.push(SweepPoint {
            alpha,
            subgraph_size: nominal_subgraph_size(alpha, report.node_count),
            beta: report.beta,
            h_m: report.h_m,
        });
    }
    let hit = points.iter().find(|p| p.beta.mean <= 1.0 + epsilon);
    Ok(SweepReport {
        epsilon,
        alpha_epsilon: hit.map(|p| p.alpha),
        subgraph_size: hit.map(|p| p.subgraph_size),
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub d_gen: u32,
    /// Runs where some node lies `d_gen` hops from the optimum; zero marks a void entry.
    pub valid_runs: usize,
    pub cdsma_beta: Estimate,
    pub cdsma_h_m: Estimate,
    pub lom_beta: Estimate,
    pub lom_h_m: Estimate,
}

impl ComparisonRow {
    pub fn is_void(&self) -> bool {
        self.valid_runs == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub alpha: f64,
    pub radius: u32,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "d_gen,valid_runs,lom_h_m,lom_beta,cdsma_h_m,cdsma_beta,lom_beta_ci,cdsma_beta_ci"
        )?;
        for r in &self.rows {
            if r.is_void() {
                writeln!(out, "{},0,--,--,--,--,--,--", r.d_gen)?;
            } else {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.d_gen,
                    r.valid_runs,
                    r.lom_h_m.mean,
                    r.lom_beta.mean,
                    r.cdsma_h_m.mean,
                    r.cdsma_beta.mean,
                    r.lom_beta.ci,
                    r.cdsma_beta.ci
                )?;
            }
        }
        writeln!(out, "# alpha={},lom_R={}", self.alpha, self.radius)
    }
}

/// cDSMA at `alpha` against LOM at `radius`, started `d_gen` hops from the optimum.
///
/// Both algorithms start from the same node of the same instance in every run.
pub fn compare_cdsma_lom(
    spec: &ExperimentSpec,
    alpha: f64,
    radius: u32,
    d_gen: &[u32],
) -> Result<ComparisonTable, ExperimentError> {
    let mut base = spec.clone();
    base.algorithm = Algorithm::Cdsma { alpha };
    let base = base.resolved()?;
    if radius == 0 {
        return Err(ExperimentError::InvalidSpec("LOM radius must be >= 1".into()));
    }

    let instances = run_seeds(&base)
        .into_par_iter()
        .map(|(_, seed)| {
            let mut oracle_rng = stream(seed, ORACLE_STREAM);
            Instance::generate(&base.topology, &base.demand, &mut stream(seed, INSTANCE_STREAM), &mut oracle_rng)
                .map(|inst| (seed, inst))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::with_capacity(d_gen.len());
    for &d in d_gen {
        let pairs = instances
            .par_iter()
            .enumerate()
            .map(|(run, (seed, inst))| {
                let mut start_rng = stream(derive_seed(*seed, d as u64), ORACLE_STREAM);
                let Some(start) = inst.pick_start(StartPolicy::AtDistance(d), &mut start_rng)? else {
                    return Ok(None);
                };
                let c = inst.migrate(run, start, Algorithm::Cdsma { alpha }, &mut stream(*seed, ALGORITHM_STREAM))?;
                let l = inst.migrate(run, start, Algorithm::Lom { radius }, &mut stream(*seed, LOM_STREAM))?;
                Ok(Some((
                    inst.beta(c.final_host),
                    c.hop_count as f64,
                    inst.beta(l.final_host),
                    l.hop_count as f64,
                )))
            })
            .collect::<Result<Vec<_>, ExperimentError>>()?;
        let valid: Vec<_> = pairs.into_iter().flatten().collect();
        let column = |f: fn(&(f64, f64, f64, f64)) -> f64| Estimate::of(&valid.iter().map(f).collect::<Vec<_>>());
        rows.push(ComparisonRow {
            d_gen: d,
            valid_runs: valid.len(),
            cdsma_beta: column(|v| v.0),
            cdsma_h_m: column(|v| v.1),
            lom_beta: column(|v| v.2),
            lom_h_m: column(|v| v.3),
        });
    }
    Ok(ComparisonTable { alpha, radius, rows })
}
