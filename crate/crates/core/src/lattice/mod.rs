//! Partition lattices: set partitions, the refinement order, and Hasse diagrams.

mod enumerate;
mod hasse;
mod order;
mod partition;
mod paths;

pub use enumerate::{
    bell, enumerate_partitions, enumerate_partitions_capped, stirling2, Partitions,
    DEFAULT_ENUMERATION_CAP, MAX_EXACT_COUNT_N,
};
pub use hasse::{ancestors, build_hasse, HasseDiagram};
pub use order::{covers, refines};
pub use partition::Partition;
pub use paths::{paths_between, PathCounter};
