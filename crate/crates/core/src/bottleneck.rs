//! Covering a weighted graph with at most `k` vertex-disjoint paths while
//! minimising the heaviest path edge, by binary search over the edge
//! weights with a Hamiltonian completion solve per candidate.

use std::time::Duration;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError};
use crate::oracle::{exact_ppn, OracleError};
use crate::partition::PathPartition;
use crate::search::{SolveError, SolverParams};
use crate::solve::min_path_partition;

#[derive(Debug, Error)]
pub enum BottleneckError {
    #[error("edge ({u}, {v}) has non-finite weight")]
    NonFiniteWeight { u: usize, v: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("no cover with at most {k} paths was found, even using every edge")]
    Infeasible { k: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    graph: Graph,
    /// Indexed like `graph.edges()`.
    weights: Vec<f64>,
}

impl WeightedGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, BottleneckError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let edges: Vec<(usize, usize, f64)> = edges.into_iter().collect();
        for &(u, v, w) in &edges {
            if !w.is_finite() {
                return Err(BottleneckError::NonFiniteWeight { u, v });
            }
        }
        let graph = Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (u, v)))?;
        let mut weights = vec![0.0; graph.m()];
        for &(u, v, w) in &edges {
            let i = graph
                .edge_index(EdgeId::new(u, v))
                .expect("edge just inserted");
            weights[i] = w;
        }
        Ok(WeightedGraph { graph, weights })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.graph
            .edge_index(EdgeId::new(u, v))
            .map(|i| self.weights[i])
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (EdgeId, f64)> + '_ {
        self.graph
            .edges()
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Distinct edge weights in ascending order.
    pub fn distinct_weights(&self) -> Vec<f64> {
        let mut w = self.weights.clone();
        w.sort_by(f64::total_cmp);
        w.dedup();
        w
    }
}

/// The unweighted graph of all edges with weight at most `w`.
pub fn threshold_subgraph(wg: &WeightedGraph, w: f64) -> Graph {
    wg.graph.filter_edges(|i, _| wg.weights[i] <= w)
}

#[derive(Debug, Clone)]
pub enum InnerSolver {
    /// Local search; the resulting threshold is an upper bound.
    Heuristic(SolverParams),
    /// Subset dynamic program; only for graphs with at most 16 vertices.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckResult {
    /// Smallest accepted weight; `None` when the graph has no edges.
    pub threshold: Option<f64>,
    pub paths: Vec<Vec<usize>>,
    /// Edges that link the paths into a Hamiltonian cycle of the threshold
    /// subgraph plus these edges.
    pub certificate_edges: Vec<EdgeId>,
    /// True when the inner solver was heuristic, so `threshold` may exceed
    /// the optimum.
    pub upper_bound: bool,
    pub candidates_solved: usize,
}

impl BottleneckResult {
    /// Heaviest edge actually used by the paths.
    pub fn max_path_weight(&self, wg: &WeightedGraph) -> Option<f64> {
        max_weight(wg, &self.paths)
    }

    /// Checks that the paths cover every vertex once, number at most `k`,
    /// and only use edges no heavier than the threshold.
    pub fn validate(&self, wg: &WeightedGraph, k: usize) -> Result<(), String> {
        let pp = PathPartition::new(wg.n(), self.paths.clone()).map_err(|e| e.to_string())?;
        pp.validate_in(wg.graph()).map_err(|e| e.to_string())?;
        if pp.path_count() > k {
            return Err(format!("{} paths exceed k = {k}", pp.path_count()));
        }
        if let (Some(max), Some(t)) = (self.max_path_weight(wg), self.threshold) {
            if max > t {
                return Err(format!("path edge weight {max} exceeds threshold {t}"));
            }
        }
        Ok(())
    }
}

fn max_weight(wg: &WeightedGraph, paths: &[Vec<usize>]) -> Option<f64> {
    paths
        .iter()
        .flat_map(|p| p.windows(2))
        .map(|w| wg.weight(w[0], w[1]).expect("path edge exists"))
        .max_by(f64::total_cmp)
}

fn candidate_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn partition_at(
    wg: &WeightedGraph,
    w: f64,
    index: usize,
    inner: &InnerSolver,
    budget: Duration,
) -> Result<PathPartition, BottleneckError> {
    let sub = threshold_subgraph(wg, w);
    match inner {
        InnerSolver::Exact => Ok(exact_ppn(&sub)?.1),
        InnerSolver::Heuristic(params) => {
            let p = SolverParams {
                seed: candidate_seed(params.seed, index),
                time_limit: budget,
                ..params.clone()
            };
            Ok(min_path_partition(&sub, &p)?)
        }
    }
}

/// Binary search over the distinct weights. A partition accepted at some
/// weight stays valid at every larger weight, so after each acceptance the
/// upper end moves down to the heaviest edge that partition really uses.
pub fn solve_bottleneck(
    wg: &WeightedGraph,
    k: usize,
    inner: &InnerSolver,
) -> Result<BottleneckResult, BottleneckError> {
    if k == 0 {
        return Err(BottleneckError::ZeroK);
    }
    let n = wg.n();
    let upper_bound = matches!(inner, InnerSolver::Heuristic(_));
    let candidates = wg.distinct_weights();
    if candidates.is_empty() {
        if n > k {
            return Err(BottleneckError::Infeasible { k });
        }
        return Ok(BottleneckResult {
            threshold: None,
            paths: (0..n).map(|v| vec![v]).collect(),
            certificate_edges: PathPartition::singletons(n).completion_edges(wg.graph()),
            upper_bound,
            candidates_solved: 0,
        });
    }

    let budget = match inner {
        InnerSolver::Heuristic(p) => {
            let rounds = (candidates.len() as f64).log2().ceil().max(1.0) as u32;
            p.time_limit / rounds
        }
        InnerSolver::Exact => Duration::MAX,
    };
    let index_of = |pp: &PathPartition| -> usize {
        match max_weight(wg, pp.paths()) {
            None => 0,
            Some(w) => candidates.partition_point(|&c| c < w),
        }
    };

    let top = candidates.len() - 1;
    let mut best = partition_at(wg, candidates[top], top, inner, budget)?;
    let mut solved = 1;
    if best.path_count() > k {
        return Err(BottleneckError::Infeasible { k });
    }
    let (mut lo, mut hi) = (0, index_of(&best));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let pp = partition_at(wg, candidates[mid], mid, inner, budget)?;
        solved += 1;
        if pp.path_count() <= k {
            hi = index_of(&pp);
            best = pp;
        } else {
            lo = mid + 1;
        }
    }

    let sub = threshold_subgraph(wg, candidates[hi]);
    Ok(BottleneckResult {
        threshold: Some(candidates[hi]),
        certificate_edges: best.completion_edges(&sub),
        paths: best.into_paths(),
        upper_bound,
        candidates_solved: solved,
    })
}
