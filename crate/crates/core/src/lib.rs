//! Hamiltonian completion and minimum path partition on undirected graphs.
//!
//! The solver is a multi-start local search over spanning trees: each
//! spanning tree is partitioned optimally into paths in linear time, and
//! perturbations move to spanning trees whose partitions have at most as
//! many paths. Cyclically linking the paths of the best partition yields
//! the edges to add.
//!
//! ```
//! use hcp_core::{generators, solve_disconnected, SolverParams};
//!
//! let g = generators::grid(3, 3).unwrap();
//! let sol = solve_disconnected(&g, &SolverParams::default()).unwrap();
//! assert_eq!(sol.hcn_estimate, 1);
//! assert_eq!(sol.added_edges.len(), 1);
//! ```

pub mod bottleneck;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod report;
pub mod search;
pub mod solve;
pub mod tour;
pub mod tree;
pub mod union_find;
pub mod verify;

pub use graph::{EdgeId, Graph, GraphError};
pub use partition::{PartitionError, PathPartition};
pub use search::{
    estimate_hcn, estimate_hcn_from_partition, CycleEdgeChoice, HcpSolution, SolveError,
    SolverParams,
};
pub use solve::{min_path_partition, solve_disconnected};
pub use tour::TourProvider;
pub use tree::{ppn_of_tree, tree_min_path_partition, SpanningTree, TreeError};
pub use union_find::UnionFind;
