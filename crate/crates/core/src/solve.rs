//! Solving graphs that may be disconnected: every component is partitioned
//! on its own and the paths are concatenated.

use crate::graph::Graph;
use crate::partition::PathPartition;
use crate::search::{
    estimate_hcn, estimate_hcn_with_clock, finalize, Clock, HcpSolution, SolveError, SolverParams,
};

/// Seed used for component `index`; component 0 keeps the master seed so a
/// connected graph solves exactly as with [`estimate_hcn`].
fn component_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Estimates the completion number of any graph with at least three
/// vertices. Components smaller than three vertices are covered by a single
/// path each; larger ones go through the local search with a shared clock.
pub fn solve_disconnected(g: &Graph, params: &SolverParams) -> Result<HcpSolution, SolveError> {
    params.validate()?;
    if g.n() < 3 {
        return Err(SolveError::TooSmall(g.n()));
    }
    let comps = g.components();
    if comps.len() == 1 {
        return estimate_hcn(g, params);
    }
    if params.time_limit.is_zero() {
        return Err(SolveError::TimeLimit);
    }
    let clock = Clock::new(params.time_limit);
    let (paths, stats) = solve_components(g, &comps, params, &clock)?;
    let combined = PathPartition::new(g.n(), paths).expect("component paths cover the graph");
    let (hcn_estimate, added_edges, partition) = finalize(g, &combined);
    Ok(HcpSolution {
        hcn_estimate,
        added_edges,
        partition,
        elapsed: clock.elapsed(),
        first_found: stats.first_found,
        restarts_used: stats.restarts,
        perturbations_used: stats.perturbations,
        interrupted: stats.interrupted,
    })
}

#[derive(Default)]
struct Totals {
    restarts: usize,
    perturbations: usize,
    interrupted: bool,
    first_found: std::time::Duration,
}

fn solve_components(
    g: &Graph,
    comps: &[Vec<usize>],
    params: &SolverParams,
    clock: &Clock,
) -> Result<(Vec<Vec<usize>>, Totals), SolveError> {
    let mut paths = Vec::with_capacity(comps.len());
    let mut totals = Totals::default();
    for (i, comp) in comps.iter().enumerate() {
        if comp.len() < 3 {
            // One vertex, or two joined by an edge.
            paths.push(comp.clone());
            continue;
        }
        let sub = g.induced_subgraph(comp);
        let p = SolverParams {
            seed: component_seed(params.seed, i),
            ..params.clone()
        };
        let sol = estimate_hcn_with_clock(&sub, &p, clock)?;
        totals.restarts += sol.restarts_used;
        totals.perturbations += sol.perturbations_used;
        totals.interrupted |= sol.interrupted;
        totals.first_found = totals.first_found.max(sol.first_found);
        paths.extend(sol.partition.relabel(comp));
    }
    Ok((paths, totals))
}

/// Heuristic minimum path partition of any graph, including graphs with
/// fewer than three vertices where the completion number is undefined.
pub fn min_path_partition(g: &Graph, params: &SolverParams) -> Result<PathPartition, SolveError> {
    match g.n() {
        0 => Ok(PathPartition::new(0, Vec::new()).expect("empty partition")),
        1 => Ok(PathPartition::singletons(1)),
        2 if g.has_edge(0, 1) => Ok(PathPartition::new(2, vec![vec![0, 1]]).expect("edge path")),
        2 => Ok(PathPartition::singletons(2)),
        _ => Ok(solve_disconnected(g, params)?.partition),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::check_hamiltonian_completion;

    fn quick() -> SolverParams {
        SolverParams {
            max_initial_trees: 2,
            max_bad_perturbations: 30,
            ..SolverParams::default()
        }
    }

    #[test]
    fn two_triangles_need_two_edges() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let sol = solve_disconnected(&g, &quick()).unwrap();
        assert_eq!(sol.hcn_estimate, 2);
        assert_eq!(sol.added_edges.len(), 2);
        check_hamiltonian_completion(&g, &sol.added_edges, &sol.hamiltonian_cycle()).unwrap();
    }

    #[test]
    fn edgeless_graph_needs_n_edges() {
        let g = Graph::empty(4);
        let sol = solve_disconnected(&g, &quick()).unwrap();
        assert_eq!(sol.hcn_estimate, 4);
        check_hamiltonian_completion(&g, &sol.added_edges, &sol.hamiltonian_cycle()).unwrap();
    }

    #[test]
    fn connected_graph_matches_single_solve() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let a = solve_disconnected(&g, &quick()).unwrap();
        let b = estimate_hcn(&g, &quick()).unwrap();
        assert_eq!(a.hcn_estimate, 0);
        assert_eq!(a.partition, b.partition);
    }

    #[test]
    fn mixed_components() {
        // C4, an edge, a singleton and P3.
        let g = Graph::from_edges(10, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (7, 8), (8, 9)])
            .unwrap();
        let sol = solve_disconnected(&g, &quick()).unwrap();
        assert_eq!(sol.hcn_estimate, 4);
        sol.partition.validate_in(&g).unwrap();
        check_hamiltonian_completion(&g, &sol.added_edges, &sol.hamiltonian_cycle()).unwrap();
    }

    #[test]
    fn tiny_graphs_answer_partition_only() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(matches!(
            solve_disconnected(&g, &quick()),
            Err(SolveError::TooSmall(2))
        ));
        assert_eq!(min_path_partition(&g, &quick()).unwrap().path_count(), 1);
        assert_eq!(
            min_path_partition(&Graph::empty(2), &quick())
                .unwrap()
                .path_count(),
            2
        );
        assert_eq!(
            min_path_partition(&Graph::empty(1), &quick())
                .unwrap()
                .path_count(),
            1
        );
    }
}
