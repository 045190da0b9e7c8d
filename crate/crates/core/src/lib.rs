//! Causal emergence across the full lattice of scales of a Markov chain.
//!
//! A microscale transition matrix is coarse-grained by every partition of its
//! states. Each scale is scored by its causal primitives (determinism plus
//! specificity minus one), and each scale's ΔCP is its gain over the best
//! strictly finer scale. Scales with positive ΔCP form the emergent
//! hierarchy, whose spread across and within levels is summarized by
//! [`metrics::complexity`]. For systems too large to enumerate,
//! [`greedy::branching_greedy`] samples the lattice along high-CP merge paths.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the double-precision instantiation used by the CLI.

pub mod apportion;
pub mod causal;
pub mod error;
pub mod generators;
pub mod greedy;
pub mod lattice;
pub mod metrics;
pub mod scalar;
pub mod tpm;

pub use apportion::{analyze, analyze_capped, compute_cp_all, delta_cp, emergent_set, Analysis, EmergentHierarchy, PartitionMap};
pub use causal::{cp, degeneracy, determinism, determinism_of_cause, primitives, specificity, AnalysisConfig, CausalPrimitives};
pub use error::{Error, Result};
pub use greedy::{branching_greedy, greedy_completion, GreedyConfig, GreedyResult, TieBreak};
pub use lattice::{build_hasse, enumerate_partitions, HasseDiagram, Partition};
pub use metrics::{complexity, MetricsConfig, MetricsReport};
pub use scalar::Scalar;
pub use tpm::Tpm;

pub type Tpm64 = Tpm<f64>;
pub type Tpm32 = Tpm<f32>;
pub type CpMap64 = apportion::CpMap<f64>;
pub type DeltaCpMap64 = apportion::DeltaCpMap<f64>;
pub type Analysis64 = Analysis<f64>;
pub type EmergentHierarchy64 = EmergentHierarchy<f64>;
pub type GreedyResult64 = GreedyResult<f64>;
pub type MetricsReport64 = MetricsReport<f64>;
