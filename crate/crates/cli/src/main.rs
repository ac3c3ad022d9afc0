use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use cdsma_core::experiment::{
    compare_cdsma_lom, run_experiment, sweep_alpha, Algorithm, DemandSource, ExperimentError, ExperimentSpec,
    Instance, StartPolicy, TopologySource,
};
use cdsma_core::io::{load_demand, load_demand_for, load_edge_list, write_demand, write_edge_list, TopologySnapshot};
use cdsma_core::median::placement_from_costs;
use cdsma_core::NodeId;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Centrality-driven service migration experiments.
#[derive(Parser)]
#[command(name = "cdsma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a topology edge list and, optionally, a demand file.
    Generate {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Edge list destination.
        #[arg(long)]
        out: PathBuf,
        /// Demand file destination.
        #[arg(long)]
        demand_out: Option<PathBuf>,
    },
    /// Run one algorithm over repeated instances and write per-run CSV.
    Run {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Algo::Cdsma)]
        algo: Algo,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long = "lom-R", default_value_t = 1)]
        lom_r: u32,
        #[command(flatten)]
        runs: RunArgs,
        /// Fixed generation node.
        #[arg(long, conflicts_with = "dgen")]
        start: Option<usize>,
        /// Start this many hops from the optimum.
        #[arg(long)]
        dgen: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep cDSMA over subgraph fractions and report alpha_epsilon.
    Sweep {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Ascending fractions, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = default_alphas())]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 0.025)]
        epsilon: f64,
        #[command(flatten)]
        runs: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare cDSMA and LOM from starts at given distances to the optimum.
    Compare {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0.03)]
        alpha: f64,
        #[arg(long = "lom-R", default_value_t = 1)]
        lom_r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        dgen: Vec<u32>,
        #[command(flatten)]
        runs: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the exact 1-median of one instance.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Cdsma,
    Lom,
}

#[derive(Args)]
struct InstanceArgs {
    /// ba, grid, ring or file:PATH
    #[arg(long, default_value = "ba")]
    topology: String,
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    #[arg(long, default_value_t = 10)]
    rows: usize,
    #[arg(long, default_value_t = 10)]
    cols: usize,
    /// Edges attached per new B-A node.
    #[arg(long, default_value_t = 2)]
    ba_m: usize,
    /// Zipf skew; 0 is uniform demand.
    #[arg(long, default_value_t = 0.0)]
    demand_s: f64,
    /// Pack the top Zipf ranks in a Manhattan ball of this radius (grids only).
    #[arg(long = "cluster-R")]
    cluster_r: Option<u32>,
    /// Fixed demand file instead of generated Zipf demand.
    #[arg(long, conflicts_with_all = ["demand_s", "cluster_r"])]
    demand_file: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 20)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn default_alphas() -> Vec<f64> {
    let mut a: Vec<f64> = (1..=10).map(|k| k as f64 / 100.0).collect();
    a.extend((2..=10).map(|k| k as f64 / 10.0));
    a
}

/// Input errors exit with 1, failed trace verification with 2.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = match error.downcast_ref::<ExperimentError>() {
            Some(ExperimentError::InvariantViolation { .. }) => 2,
            _ => 1,
        };
        Self { code, error }
    }
}

impl InstanceArgs {
    /// Topology with file labels kept, so demand files can refer to them.
    fn snapshot_source(&self) -> Result<(TopologySource, Option<Arc<TopologySnapshot>>)> {
        Ok(match self.topology.as_str() {
            "ba" => (TopologySource::BarabasiAlbert { nodes: self.nodes, m: self.ba_m }, None),
            "grid" => (TopologySource::Grid { rows: self.rows, cols: self.cols }, None),
            "ring" => (TopologySource::Ring { nodes: self.nodes }, None),
            other => match other.strip_prefix("file:") {
                Some(path) => {
                    let snap = Arc::new(load_edge_list(path)?);
                    log::info!(
                        "{}: {} nodes in the largest component ({:.1}% of the file)",
                        snap.name,
                        snap.graph.node_count(),
                        100.0 * snap.mcc_fraction
                    );
                    (TopologySource::Fixed(snap.clone()), Some(snap))
                }
                None => bail!("unknown topology {other:?}; expected ba, grid, ring or file:PATH"),
            },
        })
    }

    fn sources(&self) -> Result<(TopologySource, DemandSource, Option<Arc<TopologySnapshot>>)> {
        let (topology, snap) = self.snapshot_source()?;
        let demand = match &self.demand_file {
            None => DemandSource::Zipf { s: self.demand_s, cluster_radius: self.cluster_r },
            Some(path) => {
                let w = match (&snap, &topology) {
                    (Some(snap), _) => load_demand_for(path, snap)?,
                    (None, TopologySource::Grid { rows, cols }) => load_demand(path, rows * cols)?,
                    (None, TopologySource::Ring { nodes }) => load_demand(path, *nodes)?,
                    _ => bail!("--demand-file needs a fixed topology (grid, ring or file:PATH)"),
                };
                DemandSource::Fixed(w)
            }
        };
        Ok((topology, demand, snap))
    }

    fn spec(&self, algorithm: Algorithm, runs: &RunArgs) -> Result<ExperimentSpec> {
        let (topology, demand, _) = self.sources()?;
        Ok(ExperimentSpec::new(topology, demand, algorithm).with_runs(runs.runs).with_seed(runs.seed))
    }

    fn instance(&self, seed: u64) -> Result<(Instance, Option<Arc<TopologySnapshot>>, ChaCha8Rng)> {
        let (topology, demand, snap) = self.sources()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut oracle = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let inst = Instance::generate(&topology, &demand, &mut rng, &mut oracle)?;
        Ok((inst, snap, oracle))
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn labels(snap: &Option<Arc<TopologySnapshot>>, n: usize) -> Vec<String> {
    match snap {
        Some(s) => s.original_ids.clone(),
        None => (0..n).map(|i| i.to_string()).collect(),
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { instance, out, demand_out } => {
            let (inst, snap, _) = instance.instance(0)?;
            let snapshot = match &snap {
                Some(s) => (**s).clone(),
                None => TopologySnapshot::from_graph(instance.topology.clone(), (*inst.graph).clone()),
            };
            let mut w = output(&Some(out))?;
            write_edge_list(&mut w, &snapshot)?;
            w.flush()?;
            if let Some(path) = demand_out {
                let mut w = output(&Some(path))?;
                write_demand(&mut w, &inst.demand, &labels(&snap, inst.graph.node_count()))?;
                w.flush()?;
            }
        }
        Command::Run { instance, algo, alpha, lom_r, runs, start, dgen, out } => {
            let algorithm = match algo {
                Algo::Cdsma => Algorithm::Cdsma { alpha },
                Algo::Lom => Algorithm::Lom { radius: lom_r },
            };
            let start = match (start, dgen) {
                (Some(u), _) => StartPolicy::Fixed(NodeId::new(u)),
                (None, Some(d)) => StartPolicy::AtDistance(d),
                (None, None) => StartPolicy::Random,
            };
            let report = run_experiment(&instance.spec(algorithm, &runs)?.with_start(start))?;
            if report.void_runs > 0 {
                log::warn!("{} runs had no node at the requested distance", report.void_runs);
            }
            let mut w = output(&out)?;
            report.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Sweep { instance, alphas, epsilon, runs, out } => {
            let first = *alphas.first().unwrap_or(&1.0);
            let sweep = sweep_alpha(&instance.spec(Algorithm::Cdsma { alpha: first }, &runs)?, &alphas, epsilon)?;
            if let Err(e) = sweep.alpha_epsilon() {
                log::warn!("{e}");
            }
            let mut w = output(&out)?;
            sweep.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Compare { instance, alpha, lom_r, dgen, runs, out } => {
            let spec = instance.spec(Algorithm::Cdsma { alpha }, &runs)?;
            let table = compare_cdsma_lom(&spec, alpha, lom_r, &dgen)?;
            let mut w = output(&out)?;
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Oracle { instance, seed, out } => {
            let (inst, snap, mut rng) = instance.instance(seed)?;
            let names = labels(&snap, inst.graph.node_count());
            let best = placement_from_costs(&inst.costs, &mut rng);
            let ties: Vec<&str> = best.tie_set.iter().map(|u| names[u.index()].as_str()).collect();
            let mut w = output(&out)?;
            writeln!(w, "host,cost,tie_set")?;
            writeln!(w, "{},{},{}", names[best.host.index()], best.cost, ties.join(" "))?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
