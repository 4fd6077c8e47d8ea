//! Randomised and exhaustive cross-checks of the solver against the exact
//! oracles at small sizes.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generators::{random_connected, random_tree};
use crate::graph::{EdgeId, Graph};
use crate::oracle::{
    self, exact_ppn, for_each_graph, for_each_spanning_tree, hcn_by_tours, tree_ppn_dp,
};
use crate::partition::check_hamiltonian_completion;
use crate::search::{estimate_hcn, perturb, SolverParams};
use crate::tree::{ppn_of_tree, SpanningTree};

/// How many failures a report keeps verbatim.
const KEPT_FAILURES: usize = 10;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// Cases where a heuristic matched the exact value, when tracked.
    pub exact_matches: Option<usize>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} passed", self.name, self.passed, self.total())?;
        if let Some(m) = self.exact_matches {
            write!(f, ", {m} exact")?;
        }
        for line in &self.failures {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

fn edge_list(g: &Graph) -> String {
    let e: Vec<String> = g.edges().iter().map(|e| e.to_string()).collect();
    format!("n={} [{}]", g.n(), e.join(" "))
}

/// Uniformly shuffled Kruskal: a random spanning tree of a connected graph.
pub fn random_spanning_tree<R: Rng>(g: &Graph, rng: &mut R) -> SpanningTree {
    let mut edges: Vec<EdgeId> = g.edges().to_vec();
    edges.shuffle(rng);
    let mut uf = crate::union_find::UnionFind::new(g.n());
    let kept: Vec<EdgeId> = edges.into_iter().filter(|e| uf.union(e.u, e.v)).collect();
    SpanningTree::in_graph(g, kept).expect("input graph is connected")
}

/// Random trees with `3..=max_n` vertices: the linear tree partition must
/// match the tree dynamic program (and the subset oracle up to 16
/// vertices), and the solver must return the exact completion number.
pub fn tree_suite(count: usize, max_n: usize, seed: u64, params: &SolverParams) -> SuiteReport {
    let mut report = SuiteReport::new("tree optimality");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = max_n.max(3);
    for i in 0..count {
        let n = rng.gen_range(3..=max_n);
        let g = random_tree(n, &mut rng);
        let t = SpanningTree::from_graph(&g).expect("a tree");
        let ppn = ppn_of_tree(&t);
        let dp = tree_ppn_dp(&g).expect("a tree");
        let subset = if n <= oracle::MAX_DP_VERTICES {
            Some(exact_ppn(&g).expect("small").0)
        } else {
            None
        };
        let expected_hcn = dp; // trees on 3+ vertices are never Hamiltonian
        let p = params.clone().with_seed(seed.wrapping_add(i as u64));
        let sol = estimate_hcn(&g, &p);
        let ok = ppn == dp
            && subset.is_none_or(|s| s == dp)
            && sol.as_ref().is_ok_and(|s| {
                s.hcn_estimate == expected_hcn
                    && check_hamiltonian_completion(&g, &s.added_edges, &s.hamiltonian_cycle())
                        .is_ok()
            });
        report.check(ok, || {
            format!(
                "{}: tree={ppn} dp={dp} subset={subset:?} solver={:?}",
                edge_list(&g),
                sol.as_ref().map(|s| s.hcn_estimate)
            )
        });
    }
    report
}

/// Random connected graphs with `3..=max_n` vertices and edge probability
/// drawn from {0.2, 0.4, 0.6}: the estimate must never undercut the exact
/// completion number and its added edges must close a Hamiltonian cycle.
pub fn upper_bound_suite(
    count: usize,
    max_n: usize,
    seed: u64,
    params: &SolverParams,
) -> SuiteReport {
    let mut report = SuiteReport::new("upper bound");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = max_n.clamp(3, oracle::MAX_DP_VERTICES);
    let mut exact = 0;
    for i in 0..count {
        let n = rng.gen_range(3..=max_n);
        let p = [0.2, 0.4, 0.6][rng.gen_range(0..3)];
        let g = random_connected(n, p, &mut rng);
        let truth = oracle::exact_hcn(&g).expect("small graph");
        let sol = estimate_hcn(&g, &params.clone().with_seed(seed.wrapping_add(i as u64)));
        let ok = sol.as_ref().is_ok_and(|s| {
            s.hcn_estimate >= truth
                && check_hamiltonian_completion(&g, &s.added_edges, &s.hamiltonian_cycle()).is_ok()
        });
        if sol.as_ref().is_ok_and(|s| s.hcn_estimate == truth) {
            exact += 1;
        }
        report.check(ok, || {
            format!(
                "{}: exact={truth} solver={:?}",
                edge_list(&g),
                sol.as_ref().map(|s| s.hcn_estimate)
            )
        });
    }
    report.exact_matches = Some(exact);
    report
}

/// Every graph on `3..=max_n` vertices (at most 6 is practical): a graph is
/// Hamiltonian exactly when its completion number is 0, in which case the
/// path partition number is 1; otherwise the two numbers agree. The
/// completion number comes from trying every cyclic order.
pub fn completion_partition_suite(max_n: usize) -> SuiteReport {
    let mut report = SuiteReport::new("Hamiltonian completion vs path partition");
    for n in 3..=max_n.min(oracle::MAX_ENUMERATION_VERTICES) {
        for_each_graph(n, |g| {
            let hcn = hcn_by_tours(g).expect("small");
            let ppn = exact_ppn(g).expect("small").0;
            let ham = oracle::is_hamiltonian(g).expect("small");
            let ok = if hcn == 0 {
                ham && ppn == 1
            } else {
                !ham && hcn == ppn
            };
            report.check(ok, || {
                format!("{}: hcn={hcn} ppn={ppn} hamiltonian={ham}", edge_list(g))
            });
        })
        .expect("within enumeration limit");
    }
    report
}

/// Spanning-tree bound: every spanning tree has at least as many paths as
/// the graph, and some spanning tree attains it. Exhaustive over all
/// connected graphs up to `min(max_n, 6)` vertices, then `random` random
/// connected graphs per size up to `max_n` (at most 8).
pub fn spanning_tree_bound_suite(max_n: usize, random: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("spanning tree bound");
    let check = |g: &Graph, report: &mut SuiteReport| {
        let ppn = exact_ppn(g).expect("small").0;
        let mut min_tree = usize::MAX;
        let mut below = false;
        for_each_spanning_tree(g, |t| {
            let k = ppn_of_tree(t);
            below |= k < ppn;
            min_tree = min_tree.min(k);
        })
        .expect("within enumeration limit");
        report.check(!below && min_tree == ppn, || {
            format!(
                "{}: ppn={ppn} best tree={min_tree} below={below}",
                edge_list(g)
            )
        });
    };
    let exhaustive = max_n.min(6);
    for n in 1..=exhaustive {
        for_each_graph(n, |g| {
            if g.is_connected() {
                check(g, &mut report);
            }
        })
        .expect("within enumeration limit");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in exhaustive + 1..=max_n.min(oracle::MAX_SPANNING_TREE_VERTICES) {
        for _ in 0..random {
            let p = rng.gen_range(0.1..0.9);
            let g = random_connected(n, p, &mut rng);
            check(&g, &mut report);
        }
    }
    report
}

/// Perturbing a spanning tree never increases its path partition number.
pub fn perturbation_suite(
    count: usize,
    max_n: usize,
    seed: u64,
    params: &SolverParams,
) -> SuiteReport {
    let mut report = SuiteReport::new("perturbation monotonicity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_n = max_n.max(3);
    for _ in 0..count {
        let n = rng.gen_range(3..=max_n);
        let p = rng.gen_range(0.05..0.7);
        let g = random_connected(n, p, &mut rng);
        let t = random_spanning_tree(&g, &mut rng);
        let before = ppn_of_tree(&t);
        let after = perturb(&g, &t, params, &mut rng).map(|t2| {
            let valid =
                t2.edges().iter().all(|e| g.has_edge(e.u, e.v)) && t2.edges().len() + 1 == n;
            (ppn_of_tree(&t2), valid)
        });
        let ok = matches!(after, Ok((k, true)) if k <= before);
        report.check(ok, || {
            format!("{}: before={before} after={after:?}", edge_list(&g))
        });
    }
    report
}
