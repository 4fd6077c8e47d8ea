//! Spanning trees and the exact linear-time minimum path partition of a tree.
//!
//! The partition is built bottom-up: after a post-order pass every vertex
//! knows which of its children still end an open path at the child itself.
//! A vertex with `k` such children absorbs `min(k, 2)` of them (lowest vertex
//! ids first) and stays open for its parent only when `k <= 1`. The number of
//! paths is therefore `n - sum_v min(k_v, 2)`.

use thiserror::Error;

use crate::graph::{EdgeId, Graph};
use crate::partition::{paths_from_links, PathPartition};
use crate::union_find::UnionFind;

const NONE: usize = crate::partition::NO_LINK;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree on {n} vertices needs {} edges, got {m}", n.saturating_sub(1))]
    WrongEdgeCount { n: usize, m: usize },
    #[error("edge {0} closes a cycle")]
    Cycle(EdgeId),
    #[error("edge {0} is not an edge of the host graph")]
    NotInGraph(EdgeId),
    #[error("edge {0} has an endpoint out of range")]
    OutOfRange(EdgeId),
    #[error("a tree needs at least one vertex")]
    Empty,
}

/// Read access to an undirected adjacency structure.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn adjacent(&self, v: usize) -> &[usize];
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn adjacent(&self, v: usize) -> &[usize] {
        self.neighbors(v)
    }
}

/// Acyclic connected edge set spanning `0..n`, stored in compressed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    edges: Vec<EdgeId>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SpanningTree {
    pub fn new(n: usize, mut edges: Vec<EdgeId>) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() + 1 != n {
            return Err(TreeError::WrongEdgeCount { n, m: edges.len() });
        }
        let mut uf = UnionFind::new(n);
        for &e in &edges {
            if e.v >= n {
                return Err(TreeError::OutOfRange(e));
            }
            if !uf.union(e.u, e.v) {
                return Err(TreeError::Cycle(e));
            }
        }
        edges.sort_unstable();
        Ok(Self::build(n, edges))
    }

    /// Like [`SpanningTree::new`], additionally requiring every edge to be
    /// an edge of `g`.
    pub fn in_graph(g: &Graph, edges: Vec<EdgeId>) -> Result<Self, TreeError> {
        if let Some(&e) = edges.iter().find(|e| !g.has_edge(e.u, e.v)) {
            return Err(TreeError::NotInGraph(e));
        }
        Self::new(g.n(), edges)
    }

    /// The graph itself, when it is a tree.
    pub fn from_graph(g: &Graph) -> Result<Self, TreeError> {
        Self::new(g.n(), g.edges().to_vec())
    }

    /// `edges` must already form a spanning tree on `0..n`.
    pub(crate) fn from_edges_unchecked(n: usize, mut edges: Vec<EdgeId>) -> Self {
        debug_assert!(Self::new(n, edges.clone()).is_ok());
        edges.sort_unstable();
        Self::build(n, edges)
    }

    fn build(n: usize, edges: Vec<EdgeId>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.u + 1] += 1;
            offsets[e.v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        // Sorted edges fill each row in ascending order of neighbor for the
        // `u` side; the `v` side needs a sort below.
        for e in &edges {
            targets[fill[e.u]] = e.v;
            fill[e.u] += 1;
            targets[fill[e.v]] = e.u;
            fill[e.v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        SpanningTree {
            edges,
            offsets,
            targets,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_sorted_unique(self.n(), self.edges.clone())
    }
}

impl Adjacency for SpanningTree {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn adjacent(&self, v: usize) -> &[usize] {
        self.neighbors(v)
    }
}

/// Minimum path partition of a spanning tree, rooted at vertex 0.
pub fn tree_min_path_partition(t: &SpanningTree) -> PathPartition {
    tree_min_path_partition_rooted(t, 0)
}

/// Minimum path partition of a graph that must itself be a tree.
pub fn graph_tree_min_path_partition(g: &Graph) -> Result<PathPartition, TreeError> {
    if g.n() == 0 {
        return Err(TreeError::Empty);
    }
    if !g.is_tree() {
        if g.m() + 1 != g.n() {
            return Err(TreeError::WrongEdgeCount { n: g.n(), m: g.m() });
        }
        // Right edge count but disconnected, so some component has a cycle.
        let mut uf = UnionFind::new(g.n());
        let e = g
            .edges()
            .iter()
            .copied()
            .find(|e| !uf.union(e.u, e.v))
            .expect("disconnected graph with n-1 edges has a cycle");
        return Err(TreeError::Cycle(e));
    }
    Ok(tree_min_path_partition_rooted(g, 0))
}

/// Path partition number of a spanning tree.
pub fn ppn_of_tree(t: &SpanningTree) -> usize {
    tree_min_path_partition(t).path_count()
}

/// Same as [`tree_min_path_partition`] with an explicit root. The adjacency
/// must describe a tree; this is not re-checked.
pub fn tree_min_path_partition_rooted<A: Adjacency>(t: &A, root: usize) -> PathPartition {
    min_path_partition_counted(t, root).0
}

/// Returns the partition together with the number of adjacency entries
/// scanned, which is linear in `n` for a tree.
pub(crate) fn min_path_partition_counted<A: Adjacency>(
    t: &A,
    root: usize,
) -> (PathPartition, usize) {
    let n = t.vertex_count();
    let mut work = 0usize;
    if n == 0 {
        return (PathPartition::from_paths_unchecked(0, Vec::new()), 0);
    }

    // Pre-order with parents; reversed it is a valid post-order.
    let mut parent = vec![NONE; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in t.adjacent(v) {
            work += 1;
            if parent[w] == NONE {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "adjacency is not connected");

    let mut open = vec![false; n];
    let mut link = vec![[NONE; 2]; n];
    for &v in order.iter().rev() {
        let mut absorbed = 0;
        for &c in t.adjacent(v) {
            work += 1;
            if c == parent[v] || !open[c] {
                continue;
            }
            if absorbed < 2 {
                link[v][absorbed] = c;
                let slot = if link[c][0] == NONE { 0 } else { 1 };
                link[c][slot] = v;
                absorbed += 1;
            }
        }
        open[v] = absorbed <= 1;
    }

    let paths = paths_from_links(&link, &mut work);
    (PathPartition::from_paths_unchecked(n, paths), work)
}
