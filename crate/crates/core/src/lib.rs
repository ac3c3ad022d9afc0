//! Centrality-driven distributed service migration.
//!
//! The service walks toward the demand-weighted 1-median of a network. At each host it
//! ranks nodes by weighted conditional betweenness (wCBC) toward the host, keeps the top
//! fraction as candidates, folds the remaining demand onto them along shortest paths and
//! solves the small 1-median exactly. The crate also carries exact oracles, the
//! locality-oriented baseline, topology and demand generators, file formats and an
//! experiment runner.
//!
//! ```
//! use cdsma_core::{generate, median, migration, metrics::DemandVector, NodeId};
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let g = generate::gen_barabasi_albert(100, 2, &mut rng).unwrap();
//! let w = DemandVector::uniform(100, 1.0);
//! let trace = migration::run_cdsma(&g, &w, NodeId::new(99), 0.1, &mut rng);
//! let opt = median::solve_1median_exact(&g, &w, &mut rng);
//! assert!(trace.final_global_cost >= opt.cost);
//! ```

pub mod experiment;
pub mod generate;
pub mod graph;
pub mod io;
pub mod mapping;
pub mod median;
pub mod metrics;
pub mod migration;
pub mod sum;

pub use graph::{Graph, GraphError, NodeId, ShortestPathField};
pub use mapping::{EffectiveDemand, Subgraph};
pub use median::PlacementResult;
pub use metrics::{CentralityVector, DemandVector};
pub use migration::{MigrationTrace, TraceViolation};
