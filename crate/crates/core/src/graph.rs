//! Simple undirected graphs over dense vertex ids `0..n`.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Canonical undirected edge, always stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub u: usize,
    pub v: usize,
}

impl EdgeId {
    /// Builds the canonical orientation of `{a, b}`. Panics on `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            EdgeId { u: a, v: b }
        } else {
            EdgeId { u: b, v: a }
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl From<(usize, usize)> for EdgeId {
    fn from((a, b): (usize, usize)) -> Self {
        EdgeId::new(a, b)
    }
}

impl From<EdgeId> for (usize, usize) {
    fn from(e: EdgeId) -> Self {
        (e.u, e.v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// Immutable simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<EdgeId>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops and duplicate edges.
    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<(usize, usize)>,
    {
        Self::build(n, edges, false)
    }

    /// Like [`Graph::from_edges`], but silently drops repeated edges.
    /// Self-loops are still an error.
    pub fn from_edges_dedup<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<(usize, usize)>,
    {
        Self::build(n, edges, true)
    }

    fn build<I, E>(n: usize, edges: I, dedupe: bool) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<(usize, usize)>,
    {
        let mut list = Vec::new();
        for e in edges {
            let (u, v) = e.into();
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push(EdgeId::new(u, v));
        }
        list.sort_unstable();
        if dedupe {
            list.dedup();
        } else if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].u, w[0].v));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// `edges` must be sorted, canonical, loop-free and duplicate-free.
    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<EdgeId>) -> Self {
        let mut deg = vec![0usize; n];
        for e in &edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        let mut adj: Vec<Vec<usize>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        // Lexicographic edge order fills every list in ascending order.
        for e in &edges {
            adj[e.u].push(e.v);
        }
        for e in &edges {
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj, edges }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// All edges in ascending `(u, v)` order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Connected components, each sorted ascending; components ordered by
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m() + 1 == self.n() && self.is_connected()
    }

    /// Subgraph induced by `vertices` (sorted, distinct), relabelled so that
    /// `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push(EdgeId { u: i, v: j });
                }
            }
        }
        edges.sort_unstable();
        Graph::from_sorted_unique(vertices.len(), edges)
    }

    /// Same vertex set, keeping only edges for which `keep` returns true.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, EdgeId) -> bool) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| keep(*i, **e))
            .map(|(_, e)| *e)
            .collect();
        Graph::from_sorted_unique(self.n(), edges)
    }

    /// Returns a copy with the extra edges added (already present ones ignored).
    pub fn with_extra_edges(&self, extra: &[EdgeId]) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(extra.iter().copied());
        edges.sort_unstable();
        edges.dedup();
        Graph::from_sorted_unique(self.n(), edges)
    }
}
