//! Multi-start local search over spanning trees.
//!
//! Each restart builds an initial tour, turns it into a path partition and a
//! spanning tree, then perturbs the tree until the number of perturbations
//! that did not change the tree's path partition number exceeds
//! `max_bad_perturbations`. The best partition seen over all restarts gives
//! the estimate of the Hamiltonian completion number.

mod moves;
mod structures;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeId, Graph};
use crate::partition::PathPartition;
use crate::tour::{build_initial_tour, tour_to_path_partition, TourError, TourProvider};
use crate::tree::tree_min_path_partition;

pub(crate) use moves::close_single_path;
pub use moves::{add_edges, apply_rotation_move, make_tree, perturb, preferred_probability};
pub use structures::{join_adjacent_endpoints, CycleEdgeChoice};

pub const DEFAULT_PREFERRED_RATIO: f64 = 25.0;
pub const DEFAULT_MAX_INITIAL_TREES: usize = 10;
pub const DEFAULT_MAX_BAD_PERTURBATIONS: usize = 3000;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(1000);

/// Upper bound on rotation moves spent trying to close a single
/// Hamiltonian path into a cycle (never more than `n`).
const CLOSE_ATTEMPTS: usize = 32;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("Hamiltonian completion needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("graph is disconnected; solve it per component")]
    Disconnected,
    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),
    #[error("time limit reached before any solution was built")]
    TimeLimit,
    #[error(transparent)]
    Tour(#[from] TourError),
}

#[derive(Debug, Clone)]
pub struct SolverParams {
    /// How many times more likely a preferred edge is drawn than a normal one.
    pub preferred_ratio: f64,
    /// Number of restarts, each from a fresh initial spanning tree.
    pub max_initial_trees: usize,
    /// Non-improving perturbations tolerated per restart.
    pub max_bad_perturbations: usize,
    pub time_limit: Duration,
    pub seed: u64,
    pub tour_provider: TourProvider,
    pub cycle_edge_choice: CycleEdgeChoice,
    /// Worker threads for restarts; 1 runs them in order on the caller.
    pub workers: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            preferred_ratio: DEFAULT_PREFERRED_RATIO,
            max_initial_trees: DEFAULT_MAX_INITIAL_TREES,
            max_bad_perturbations: DEFAULT_MAX_BAD_PERTURBATIONS,
            time_limit: DEFAULT_TIME_LIMIT,
            seed: 0,
            tour_provider: TourProvider::default(),
            cycle_edge_choice: CycleEdgeChoice::Random,
            workers: 1,
        }
    }
}

impl SolverParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.preferred_ratio.is_finite() && self.preferred_ratio > 0.0) {
            return Err(SolveError::InvalidParams(format!(
                "preferred ratio must be positive, got {}",
                self.preferred_ratio
            )));
        }
        if self.max_initial_trees == 0 {
            return Err(SolveError::InvalidParams(
                "at least one initial spanning tree is required".into(),
            ));
        }
        if self.workers == 0 {
            return Err(SolveError::InvalidParams(
                "workers must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Short configuration tag, e.g. `MSLS_25_10_3000`.
    pub fn label(&self) -> String {
        format!(
            "MSLS_{}_{}_{}",
            self.preferred_ratio, self.max_initial_trees, self.max_bad_perturbations
        )
    }
}

/// Result of a solve: the estimate, the edges realising it and the witness.
#[derive(Debug, Clone, PartialEq)]
pub struct HcpSolution {
    pub hcn_estimate: usize,
    /// Non-edges whose addition makes the graph Hamiltonian; exactly
    /// `hcn_estimate` of them.
    pub added_edges: Vec<EdgeId>,
    pub partition: PathPartition,
    pub elapsed: Duration,
    /// When the returned estimate was first reached.
    pub first_found: Duration,
    pub restarts_used: usize,
    pub perturbations_used: usize,
    pub interrupted: bool,
}

impl HcpSolution {
    /// Hamiltonian cycle of the graph plus `added_edges`.
    pub fn hamiltonian_cycle(&self) -> Vec<usize> {
        self.partition.linked_cycle()
    }
}

/// Estimate of the completion number implied by one path partition: the
/// path count when above one, otherwise 0 or 1 depending on whether the
/// single path's endpoints are adjacent.
pub fn estimate_hcn_from_partition(g: &Graph, pp: &PathPartition) -> usize {
    match pp.path_count() {
        0 => 0,
        1 => {
            let (s, e) = pp.endpoints(0);
            usize::from(!g.has_edge(s, e))
        }
        k => k,
    }
}

/// Runs the multi-start local search on a connected graph with `n >= 3`.
pub fn estimate_hcn(g: &Graph, params: &SolverParams) -> Result<HcpSolution, SolveError> {
    params.validate()?;
    if g.n() < 3 {
        return Err(SolveError::TooSmall(g.n()));
    }
    if !g.is_connected() {
        return Err(SolveError::Disconnected);
    }
    if params.time_limit.is_zero() {
        return Err(SolveError::TimeLimit);
    }
    let clock = Clock::new(params.time_limit);
    estimate_hcn_with_clock(g, params, &clock)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Clock {
    start: Instant,
    deadline: Option<Instant>,
}

impl Clock {
    pub fn new(limit: Duration) -> Self {
        let start = Instant::now();
        Clock {
            start,
            deadline: start.checked_add(limit),
        }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Seed of restart `index`, independent of how restarts are scheduled.
fn restart_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64 + 1))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

struct RestartOutcome {
    estimate: usize,
    partition: PathPartition,
    found_at: Duration,
    perturbations: usize,
    interrupted: bool,
}

/// Best-so-far bookkeeping within one restart.
struct Best {
    estimate: usize,
    partition: Option<PathPartition>,
    found_at: Duration,
}

impl Best {
    fn consider(&mut self, g: &Graph, pp: &PathPartition, clock: &Clock, rng: &mut ChaCha8Rng) {
        let k = pp.path_count();
        if k >= 2 {
            if k < self.estimate {
                self.record(k, pp.clone(), clock);
            }
            return;
        }
        if self.estimate == 0 {
            return;
        }
        let mut single = pp.clone();
        let closed = close_single_path(g, &mut single, CLOSE_ATTEMPTS.min(g.n()), rng);
        let est = usize::from(!closed);
        if est < self.estimate {
            self.record(est, single, clock);
        }
    }

    fn record(&mut self, estimate: usize, pp: PathPartition, clock: &Clock) {
        self.estimate = estimate;
        self.partition = Some(pp);
        self.found_at = clock.elapsed();
    }
}

fn run_restart(
    g: &Graph,
    params: &SolverParams,
    index: usize,
    clock: &Clock,
    stop: &AtomicBool,
) -> Result<RestartOutcome, SolveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(params.seed, index));
    let mut best = Best {
        estimate: usize::MAX,
        partition: None,
        found_at: Duration::ZERO,
    };

    let tour = build_initial_tour(g, &params.tour_provider, &mut rng)?;
    let initial = tour_to_path_partition(g, &tour);
    best.consider(g, &initial, clock, &mut rng);
    let tree = make_tree(g, &initial, params, &mut rng)?;
    let mut pp = tree_min_path_partition(&tree);
    best.consider(g, &pp, clock, &mut rng);

    let mut bad = 0usize;
    let mut perturbations = 0usize;
    let mut interrupted = false;
    while bad <= params.max_bad_perturbations && best.estimate > 0 {
        if stop.load(Ordering::Relaxed) {
            break;
        }
        if clock.expired() {
            interrupted = true;
            break;
        }
        let tree = moves::perturb_partition(g, &pp, params, &mut rng)?;
        let next = tree_min_path_partition(&tree);
        perturbations += 1;
        debug_assert!(next.path_count() <= pp.path_count());
        if next.path_count() == pp.path_count() {
            bad += 1;
        }
        pp = next;
        best.consider(g, &pp, clock, &mut rng);
    }

    Ok(RestartOutcome {
        estimate: best.estimate,
        partition: best
            .partition
            .expect("initial partition is always recorded"),
        found_at: best.found_at,
        perturbations,
        interrupted,
    })
}

/// Solve on a connected graph with `n >= 3` against an existing clock. The
/// first restart always completes its construction phase, so a solution
/// exists even when the clock has already run out.
pub(crate) fn estimate_hcn_with_clock(
    g: &Graph,
    params: &SolverParams,
    clock: &Clock,
) -> Result<HcpSolution, SolveError> {
    let stop = AtomicBool::new(false);
    let restarts = params.max_initial_trees;
    let mut outcomes: Vec<(usize, RestartOutcome)> = Vec::new();
    let mut interrupted = false;

    if params.workers <= 1 || restarts == 1 {
        for r in 0..restarts {
            if r > 0 && clock.expired() {
                interrupted = true;
                break;
            }
            let out = run_restart(g, params, r, clock, &stop)?;
            let done = out.estimate == 0;
            outcomes.push((r, out));
            if done {
                break;
            }
        }
    } else {
        let workers = params.workers.min(restarts);
        let collected: Mutex<Vec<(usize, Result<RestartOutcome, SolveError>)>> =
            Mutex::new(Vec::new());
        thread::scope(|scope| {
            for w in 0..workers {
                let stop = &stop;
                let collected = &collected;
                scope.spawn(move || {
                    for r in (w..restarts).step_by(workers) {
                        if stop.load(Ordering::Relaxed) || (r > 0 && clock.expired()) {
                            break;
                        }
                        let out = run_restart(g, params, r, clock, stop);
                        if matches!(&out, Ok(o) if o.estimate == 0) {
                            stop.store(true, Ordering::Relaxed);
                        }
                        collected.lock().unwrap().push((r, out));
                    }
                });
            }
        });
        let mut collected = collected.into_inner().unwrap();
        collected.sort_by_key(|(r, _)| *r);
        for (r, out) in collected {
            outcomes.push((r, out?));
        }
        if outcomes.len() < restarts && clock.expired() {
            interrupted = true;
        }
    }

    let perturbations_used = outcomes.iter().map(|(_, o)| o.perturbations).sum();
    let restarts_used = outcomes.len();
    interrupted |= outcomes.iter().any(|(_, o)| o.interrupted);
    let (_, best) = outcomes
        .into_iter()
        .min_by_key(|(r, o)| (o.estimate, *r))
        .ok_or(SolveError::TimeLimit)?;

    let (hcn_estimate, added_edges, partition) = finalize(g, &best.partition);
    Ok(HcpSolution {
        hcn_estimate,
        added_edges,
        partition,
        elapsed: clock.elapsed(),
        first_found: best.found_at,
        restarts_used,
        perturbations_used,
        interrupted,
    })
}

/// Joins paths with adjacent endpoints, then links the paths cyclically.
/// Returns the number of added edges, the edges and the final partition.
pub(crate) fn finalize(g: &Graph, pp: &PathPartition) -> (usize, Vec<EdgeId>, PathPartition) {
    let pp = join_adjacent_endpoints(g, pp);
    let added = pp.completion_edges(g);
    debug_assert!(pp.path_count() == 1 || added.len() == pp.path_count());
    (added.len(), added, pp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::check_hamiltonian_completion;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn quick() -> SolverParams {
        SolverParams {
            max_initial_trees: 3,
            max_bad_perturbations: 50,
            ..SolverParams::default()
        }
    }

    #[test]
    fn defaults_match_tuned_configuration() {
        let p = SolverParams::default();
        assert_eq!(p.preferred_ratio, 25.0);
        assert_eq!(p.max_initial_trees, 10);
        assert_eq!(p.max_bad_perturbations, 3000);
        assert_eq!(p.time_limit, Duration::from_secs(1000));
        assert_eq!(p.label(), "MSLS_25_10_3000");
    }

    #[test]
    fn invalid_params_rejected() {
        let g = cycle(5);
        let p = SolverParams {
            preferred_ratio: 0.0,
            ..SolverParams::default()
        };
        assert!(matches!(
            estimate_hcn(&g, &p),
            Err(SolveError::InvalidParams(_))
        ));
        let p = SolverParams {
            max_initial_trees: 0,
            ..SolverParams::default()
        };
        assert!(matches!(
            estimate_hcn(&g, &p),
            Err(SolveError::InvalidParams(_))
        ));
    }

    #[test]
    fn estimate_from_partition_examples() {
        let c5 = cycle(5);
        let pp = PathPartition::new(5, vec![vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(estimate_hcn_from_partition(&c5, &pp), 0);

        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let pp = PathPartition::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(estimate_hcn_from_partition(&p4, &pp), 1);

        let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let pp = PathPartition::new(6, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(estimate_hcn_from_partition(&g, &pp), 3);
    }

    #[test]
    fn cycle_is_hamiltonian() {
        let sol = estimate_hcn(&cycle(6), &SolverParams::default()).unwrap();
        assert_eq!(sol.hcn_estimate, 0);
        assert!(sol.added_edges.is_empty());
        check_hamiltonian_completion(&cycle(6), &[], &sol.hamiltonian_cycle()).unwrap();
    }

    #[test]
    fn rejects_small_and_disconnected() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(matches!(
            estimate_hcn(&g, &quick()),
            Err(SolveError::TooSmall(2))
        ));
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            estimate_hcn(&g, &quick()),
            Err(SolveError::Disconnected)
        ));
    }

    #[test]
    fn zero_time_limit_has_no_solution() {
        let p = SolverParams {
            time_limit: Duration::ZERO,
            ..quick()
        };
        assert!(matches!(
            estimate_hcn(&cycle(5), &p),
            Err(SolveError::TimeLimit)
        ));
    }

    #[test]
    fn tiny_time_limit_still_returns() {
        let g = crate::generators::grid(30, 31).unwrap();
        let p = SolverParams {
            time_limit: Duration::from_nanos(1),
            ..SolverParams::default()
        };
        let sol = estimate_hcn(&g, &p).unwrap();
        assert!(sol.interrupted);
        check_hamiltonian_completion(&g, &sol.added_edges, &sol.hamiltonian_cycle()).unwrap();
    }

    #[test]
    fn deterministic_for_seed() {
        let g = crate::generators::erdos_renyi(60, 0.06, 3).unwrap();
        let comps = g.components();
        let big = comps.iter().max_by_key(|c| c.len()).unwrap();
        let g = g.induced_subgraph(big);
        let a = estimate_hcn(&g, &quick().with_seed(9)).unwrap();
        let b = estimate_hcn(&g, &quick().with_seed(9)).unwrap();
        assert_eq!(a.hcn_estimate, b.hcn_estimate);
        assert_eq!(a.partition, b.partition);
        assert_eq!(a.perturbations_used, b.perturbations_used);
    }

    #[test]
    fn parallel_matches_sequential_estimate_on_trees() {
        let g = crate::generators::structured_tree(5, 3).unwrap();
        let seq = estimate_hcn(&g, &quick()).unwrap();
        let par = estimate_hcn(
            &g,
            &SolverParams {
                workers: 3,
                ..quick()
            },
        )
        .unwrap();
        assert_eq!(seq.hcn_estimate, par.hcn_estimate);
        assert_eq!(seq.restarts_used, par.restarts_used);
    }

    #[test]
    fn restart_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..100).map(|i| restart_seed(7, i)).collect();
        assert_eq!(seeds.len(), 100);
    }
}
