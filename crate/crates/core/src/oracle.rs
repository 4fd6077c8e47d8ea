//! Exact, exponential-time answers for small graphs. These are the ground
//! truth the heuristic and the tree routine are checked against.

use thiserror::Error;

use crate::generators::tree_from_prufer;
use crate::graph::{EdgeId, Graph};
use crate::partition::PathPartition;
use crate::tree::SpanningTree;

pub const MAX_DP_VERTICES: usize = 16;
pub const MAX_ENUMERATION_VERTICES: usize = 7;
pub const MAX_SPANNING_TREE_VERTICES: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, oracle limit is {max}")]
    TooLarge { n: usize, max: usize },
    #[error("Hamiltonian completion needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("input is not a tree")]
    NotATree,
}

fn guard(n: usize, max: usize) -> Result<(), OracleError> {
    if n > max {
        Err(OracleError::TooLarge { n, max })
    } else {
        Ok(())
    }
}

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub exact_ppn: usize,
    pub exact_hcn: usize,
    pub witness: PathPartition,
}

/// Minimum path partition by dynamic programming over (visited set, last
/// vertex): the vertices are laid out in one sequence and every step to a
/// non-neighbour starts a new path.
pub fn exact_ppn(g: &Graph) -> Result<(usize, PathPartition), OracleError> {
    let n = g.n();
    guard(n, MAX_DP_VERTICES)?;
    if n == 0 {
        return Ok((0, PathPartition::new(0, Vec::new()).expect("empty")));
    }
    let adj = adjacency_masks(g);
    let full = (1usize << n) - 1;
    const INF: u8 = u8::MAX;
    let mut cost = vec![INF; (full + 1) * n];
    let mut parent = vec![u8::MAX; (full + 1) * n];
    for v in 0..n {
        cost[(1 << v) * n + v] = 1;
    }
    for mask in 1..=full {
        for v in 0..n {
            let c = cost[mask * n + v];
            if c == INF {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let step = if adj[v] & (1 << w) != 0 { 0 } else { 1 };
                let idx = (mask | (1 << w)) * n + w;
                if c + step < cost[idx] {
                    cost[idx] = c + step;
                    parent[idx] = v as u8;
                }
            }
        }
    }
    let (best_v, best) = (0..n)
        .map(|v| (v, cost[full * n + v]))
        .min_by_key(|&(v, c)| (c, v))
        .expect("n > 0");

    // Walk back to recover the order, then cut at non-edges.
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut v) = (full, best_v);
    loop {
        order.push(v);
        let p = parent[mask * n + v];
        mask &= !(1 << v);
        if mask == 0 {
            break;
        }
        v = p as usize;
    }
    order.reverse();
    let mut paths: Vec<Vec<usize>> = vec![vec![order[0]]];
    for w in order.windows(2) {
        if g.has_edge(w[0], w[1]) {
            paths.last_mut().expect("nonempty").push(w[1]);
        } else {
            paths.push(vec![w[1]]);
        }
    }
    debug_assert_eq!(paths.len(), best as usize);
    Ok((
        best as usize,
        PathPartition::new(n, paths).expect("valid witness"),
    ))
}

/// Whether `g` has a Hamiltonian cycle (requires `3 <= n <= 16`).
pub fn is_hamiltonian(g: &Graph) -> Result<bool, OracleError> {
    let n = g.n();
    guard(n, MAX_DP_VERTICES)?;
    if n < 3 {
        return Err(OracleError::TooSmall(n));
    }
    let adj = adjacency_masks(g);
    let full = (1usize << n) - 1;
    // ends[mask]: vertices at which a path from 0 covering `mask` can end.
    let mut ends = vec![0u32; full + 1];
    ends[1] = 1;
    for mask in (1..=full).step_by(2) {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = adj[v] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    Ok(ends[full] & adj[0] != 0)
}

/// Exact completion number: 0 for Hamiltonian graphs, otherwise the path
/// partition number.
pub fn exact_hcn(g: &Graph) -> Result<usize, OracleError> {
    Ok(oracle(g)?.exact_hcn)
}

pub fn oracle(g: &Graph) -> Result<OracleResult, OracleError> {
    let hamiltonian = is_hamiltonian(g)?;
    let (exact_ppn, witness) = exact_ppn(g)?;
    let exact_hcn = if hamiltonian { 0 } else { exact_ppn };
    Ok(OracleResult {
        exact_ppn,
        exact_hcn,
        witness,
    })
}

/// Completion number straight from its definition: the fewest non-edges
/// on any cyclic ordering of the vertices. Tries every ordering with vertex
/// 0 fixed first, so only for `3 <= n <= 9`.
pub fn hcn_by_tours(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    guard(n, 9)?;
    if n < 3 {
        return Err(OracleError::TooSmall(n));
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = n;
    for_each_permutation(&mut rest, 0, &mut |p| {
        let mut missing =
            usize::from(!g.has_edge(0, p[0])) + usize::from(!g.has_edge(p[p.len() - 1], 0));
        missing += p.windows(2).filter(|w| !g.has_edge(w[0], w[1])).count();
        best = best.min(missing);
    });
    Ok(best)
}

fn for_each_permutation(v: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        for_each_permutation(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// Path partition number by listing set partitions and checking each block
/// for a Hamiltonian path by trying every order. Independent of
/// [`exact_ppn`]; only for `n <= 7`.
pub fn ppn_by_enumeration(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    guard(n, MAX_ENUMERATION_VERTICES)?;
    let mut best = n;
    enumerate_blocks(g, (1u32 << n) - 1, 0, &mut best);
    Ok(best)
}

fn enumerate_blocks(g: &Graph, remaining: u32, used: usize, best: &mut usize) {
    if remaining == 0 {
        *best = (*best).min(used);
        return;
    }
    if used + 1 > *best {
        return;
    }
    let s = remaining.trailing_zeros();
    let others = remaining & !(1 << s);
    // Every subset of the other remaining vertices, joined with s.
    let mut sub = others;
    loop {
        let block = sub | (1 << s);
        if has_hamiltonian_path(g, block) {
            enumerate_blocks(g, remaining & !block, used + 1, best);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & others;
    }
}

fn has_hamiltonian_path(g: &Graph, block: u32) -> bool {
    let mut verts: Vec<usize> = (0..32).filter(|&v| block & (1 << v) != 0).collect();
    permutations_any(&mut verts, 0, &mut |p| {
        p.windows(2).all(|w| g.has_edge(w[0], w[1]))
    })
}

fn permutations_any(v: &mut [usize], k: usize, test: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == v.len() {
        return test(v);
    }
    for i in k..v.len() {
        v.swap(k, i);
        if permutations_any(v, k + 1, test) {
            v.swap(k, i);
            return true;
        }
        v.swap(k, i);
    }
    false
}

/// Path partition number of a tree by a per-vertex dynamic program over
/// how many children a vertex is joined to (0, 1 or 2). Works at any size.
pub fn tree_ppn_dp(g: &Graph) -> Result<usize, OracleError> {
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    if !g.is_tree() {
        return Err(OracleError::NotATree);
    }
    // BFS order from vertex 0 so children are processed before parents.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                order.push(w);
            }
        }
    }
    // f[v][d]: fewest paths in v's subtree when v is joined to d children.
    let mut f = vec![[usize::MAX; 3]; n];
    for &v in order.iter().rev() {
        let mut base = 1usize;
        let mut gains: [usize; 2] = [0, 0];
        let mut joinable = 0;
        for &c in g.neighbors(v) {
            if c == parent[v] {
                continue;
            }
            let best = f[c].iter().copied().min().expect("three states");
            base += best;
            let open = f[c][0].min(f[c][1]);
            // Joining c to v merges one of c's paths into v's.
            let gain = best + 1 - open;
            joinable += 1;
            if gain > gains[0] {
                gains[1] = gains[0];
                gains[0] = gain;
            } else if gain > gains[1] {
                gains[1] = gain;
            }
        }
        f[v][0] = base;
        if joinable >= 1 {
            f[v][1] = base - gains[0];
        }
        if joinable >= 2 {
            f[v][2] = base - gains[0] - gains[1];
        }
    }
    Ok(f[0].iter().copied().min().expect("three states"))
}

/// Calls `visit` with every spanning tree of `g` once. Limited to `n <= 8`.
pub fn for_each_spanning_tree(
    g: &Graph,
    mut visit: impl FnMut(&SpanningTree),
) -> Result<(), OracleError> {
    let n = g.n();
    guard(n, MAX_SPANNING_TREE_VERTICES)?;
    if n == 0 {
        return Ok(());
    }
    let mut label: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(n - 1);
    choose_edges(g, 0, &mut label, &mut chosen, &mut visit);
    Ok(())
}

fn choose_edges(
    g: &Graph,
    start: usize,
    label: &mut Vec<usize>,
    chosen: &mut Vec<EdgeId>,
    visit: &mut dyn FnMut(&SpanningTree),
) {
    let need = g.n() - 1 - chosen.len();
    if need == 0 {
        visit(&SpanningTree::from_edges_unchecked(g.n(), chosen.clone()));
        return;
    }
    let edges = g.edges();
    if edges.len() - start < need {
        return;
    }
    for i in start..edges.len() {
        if edges.len() - i < need {
            break;
        }
        let e = edges[i];
        let (a, b) = (label[e.u], label[e.v]);
        if a == b {
            continue;
        }
        let saved = label.clone();
        for l in label.iter_mut() {
            if *l == b {
                *l = a;
            }
        }
        chosen.push(e);
        choose_edges(g, i + 1, label, chosen, visit);
        chosen.pop();
        *label = saved;
    }
}

pub fn enumerate_spanning_trees(g: &Graph) -> Result<Vec<SpanningTree>, OracleError> {
    let mut out = Vec::new();
    for_each_spanning_tree(g, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Calls `visit` with every labelled tree on `n` vertices (via all Prüfer
/// codes, `n^(n-2)` of them).
pub fn for_each_labelled_tree(n: usize, mut visit: impl FnMut(&Graph)) {
    match n {
        0 | 1 => visit(&Graph::empty(n)),
        2 => visit(&Graph::from_edges(2, [(0, 1)]).expect("edge")),
        _ => {
            let mut code = vec![0usize; n - 2];
            loop {
                visit(&tree_from_prufer(n, &code));
                let mut i = 0;
                while i < code.len() {
                    code[i] += 1;
                    if code[i] < n {
                        break;
                    }
                    code[i] = 0;
                    i += 1;
                }
                if i == code.len() {
                    break;
                }
            }
        }
    }
}

/// Calls `visit` with every labelled simple graph on `n` vertices
/// (`2^(n(n-1)/2)` of them); `n <= 7`.
pub fn for_each_graph(n: usize, mut visit: impl FnMut(&Graph)) -> Result<(), OracleError> {
    guard(n, MAX_ENUMERATION_VERTICES)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e);
        visit(&Graph::from_edges(n, edges).expect("distinct pairs"));
    }
    Ok(())
}
