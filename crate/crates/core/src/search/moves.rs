//! Building blocks of the local search: rotation moves, spanning-tree
//! completion from a path partition, and the perturbation operator.

use rand::Rng;

use super::structures::{CycleEdgeChoice, Structures};
use super::{SolveError, SolverParams};
use crate::graph::{EdgeId, Graph};
use crate::partition::PathPartition;
use crate::tree::{tree_min_path_partition, SpanningTree};
use crate::union_find::UnionFind;

/// Rotation on the tail of `path = (v1, ..., vk)`: picks uniformly an `i`
/// with `1 < i < k - 1` (1-based) such that `(vi, vk)` is an edge and
/// returns `(v1, ..., vi, vk, vk-1, ..., vi+1)`. Returns the path unchanged
/// when no such `i` exists.
pub fn apply_rotation_move<R: Rng>(g: &Graph, path: &[usize], rng: &mut R) -> Vec<usize> {
    let mut out = path.to_vec();
    let k = path.len();
    if k < 4 {
        return out;
    }
    let last = path[k - 1];
    let candidates: Vec<usize> = (1..=k - 3).filter(|&j| g.has_edge(path[j], last)).collect();
    if !candidates.is_empty() {
        let j = candidates[rng.gen_range(0..candidates.len())];
        out[j + 1..].reverse();
    }
    out
}

/// 0-based rotation pivots `j` of path `i`, ascending: positions in
/// `1..=len-3` whose vertex is adjacent to the tail.
fn rotation_pivots(g: &Graph, pp: &PathPartition, i: usize, buf: &mut Vec<usize>) {
    buf.clear();
    let path = &pp.paths()[i];
    let k = path.len();
    if k < 4 {
        return;
    }
    let last = path[k - 1];
    for &w in g.neighbors(last) {
        if pp.path_of(w) == i {
            let j = pp.position(w);
            if (1..=k - 3).contains(&j) {
                buf.push(j);
            }
        }
    }
    buf.sort_unstable();
}

/// Applies a rotation move to every path of `pp` where one exists.
pub(crate) fn rotate_all<R: Rng>(g: &Graph, pp: &mut PathPartition, rng: &mut R) {
    let mut buf = Vec::new();
    for i in 0..pp.path_count() {
        rotation_pivots(g, pp, i, &mut buf);
        if buf.is_empty() {
            continue;
        }
        let j = buf[rng.gen_range(0..buf.len())];
        let mut path = pp.paths()[i].clone();
        path[j + 1..].reverse();
        pp.replace_path(i, path);
    }
}

/// Tries to turn the single path of `pp` into one whose endpoints are
/// adjacent, using at most `attempts` rotation moves alternating between
/// the two ends. A rotation that directly produces a closable path is
/// preferred over a random one.
pub(crate) fn close_single_path<R: Rng>(
    g: &Graph,
    pp: &mut PathPartition,
    attempts: usize,
    rng: &mut R,
) -> bool {
    debug_assert_eq!(pp.path_count(), 1);
    let n = pp.n();
    if n < 3 {
        return false;
    }
    let mut buf = Vec::new();
    let mut stuck_ends = 0;
    for _ in 0..attempts {
        let (s, e) = pp.endpoints(0);
        if g.has_edge(s, e) {
            return true;
        }
        rotation_pivots(g, pp, 0, &mut buf);
        if buf.is_empty() {
            stuck_ends += 1;
            if stuck_ends == 2 {
                return false;
            }
            pp.reverse_path(0);
            continue;
        }
        stuck_ends = 0;
        let path = &pp.paths()[0];
        let j = buf
            .iter()
            .copied()
            .find(|&j| g.has_edge(path[j + 1], s))
            .unwrap_or_else(|| buf[rng.gen_range(0..buf.len())]);
        let mut path = path.clone();
        path[j + 1..].reverse();
        pp.replace_path(0, path);
        pp.reverse_path(0);
    }
    let (s, e) = pp.endpoints(0);
    g.has_edge(s, e)
}

/// Extends the paths of `pp` to a spanning tree of `g` with `k - 1` extra
/// edges. Each draw takes a preferred edge (touching a path endpoint) with
/// probability `r / (r + 1)` and a normal edge otherwise, falling back to the
/// other category when one is empty; edges that would close a cycle are
/// skipped.
pub fn add_edges<R: Rng>(
    g: &Graph,
    pp: &PathPartition,
    preferred_ratio: f64,
    rng: &mut R,
) -> Result<SpanningTree, SolveError> {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut tree: Vec<EdgeId> = Vec::with_capacity(n.saturating_sub(1));
    for e in pp.path_edges() {
        uf.union(e.u, e.v);
        tree.push(e);
    }
    let mut preferred = Vec::new();
    let mut normal = Vec::new();
    for &e in g.edges() {
        // Edges inside one path always close a cycle.
        if pp.path_of(e.u) == pp.path_of(e.v) {
            continue;
        }
        if pp.is_endpoint(e.u) || pp.is_endpoint(e.v) {
            preferred.push(e);
        } else {
            normal.push(e);
        }
    }
    let p_preferred = preferred_probability(preferred_ratio);
    let mut missing = pp.path_count().saturating_sub(1);
    while missing > 0 {
        let take_preferred = match (preferred.is_empty(), normal.is_empty()) {
            (true, true) => return Err(SolveError::Disconnected),
            (false, true) => true,
            (true, false) => false,
            (false, false) => rng.gen_bool(p_preferred),
        };
        let list = if take_preferred {
            &mut preferred
        } else {
            &mut normal
        };
        let e = list.swap_remove(rng.gen_range(0..list.len()));
        if uf.union(e.u, e.v) {
            tree.push(e);
            missing -= 1;
        }
    }
    Ok(SpanningTree::from_edges_unchecked(n, tree))
}

/// Probability of drawing from the preferred category.
pub fn preferred_probability(preferred_ratio: f64) -> f64 {
    preferred_ratio / (preferred_ratio + 1.0)
}

/// Rotation moves on every path, then [`add_edges`].
pub fn make_tree<R: Rng>(
    g: &Graph,
    pp: &PathPartition,
    params: &SolverParams,
    rng: &mut R,
) -> Result<SpanningTree, SolveError> {
    let mut pp = pp.clone();
    rotate_all(g, &mut pp, rng);
    add_edges(g, &pp, params.preferred_ratio, rng)
}

/// Joins the paths of `pp` into fewer structures: closes paths into cycles
/// where their endpoints are adjacent, sweeps all edges once merging
/// path/path, path/cycle and cycle/cycle pairs, then reopens leftover cycles.
pub(crate) fn join_structures<R: Rng>(
    g: &Graph,
    pp: &PathPartition,
    choice: CycleEdgeChoice,
    rng: &mut R,
) -> PathPartition {
    let mut s = Structures::from_partition(pp);
    s.close_paths(g, pp);
    s.sweep(g, choice, false, rng);
    s.break_cycles(choice, rng);
    s.into_partition()
}

/// One perturbation of the spanning tree `t`. The tree's own minimum path
/// partition is never worse than the result's, i.e.
/// `ppn(perturb(t)) <= ppn(t)`.
pub fn perturb<R: Rng>(
    g: &Graph,
    t: &SpanningTree,
    params: &SolverParams,
    rng: &mut R,
) -> Result<SpanningTree, SolveError> {
    let pp = tree_min_path_partition(t);
    perturb_partition(g, &pp, params, rng)
}

/// [`perturb`] starting from the tree's already computed minimum partition.
pub(crate) fn perturb_partition<R: Rng>(
    g: &Graph,
    pp: &PathPartition,
    params: &SolverParams,
    rng: &mut R,
) -> Result<SpanningTree, SolveError> {
    let mut joined = join_structures(g, pp, params.cycle_edge_choice, rng);
    rotate_all(g, &mut joined, rng);
    add_edges(g, &joined, params.preferred_ratio, rng)
}
