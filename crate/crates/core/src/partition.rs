//! Path partitions: vertex-disjoint paths covering every vertex exactly once.

use thiserror::Error;

use crate::graph::{EdgeId, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("vertex {0} is outside the vertex range")]
    VertexOutOfRange(usize),
    #[error("vertex {0} appears more than once")]
    Repeated(usize),
    #[error("vertex {0} is not covered by any path")]
    Uncovered(usize),
    #[error("empty path in partition")]
    EmptyPath,
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
}

/// Set of vertex-disjoint paths covering `0..n`, with per-vertex lookup of
/// the containing path and the position inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPartition {
    paths: Vec<Vec<usize>>,
    path_of: Vec<usize>,
    position: Vec<usize>,
}

impl PathPartition {
    /// Checks the cover property only; use [`PathPartition::validate_in`]
    /// to check adjacency against a graph.
    pub fn new(n: usize, paths: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut path_of = vec![usize::MAX; n];
        let mut position = vec![usize::MAX; n];
        for (i, p) in paths.iter().enumerate() {
            if p.is_empty() {
                return Err(PartitionError::EmptyPath);
            }
            for (j, &v) in p.iter().enumerate() {
                if v >= n {
                    return Err(PartitionError::VertexOutOfRange(v));
                }
                if path_of[v] != usize::MAX {
                    return Err(PartitionError::Repeated(v));
                }
                path_of[v] = i;
                position[v] = j;
            }
        }
        if let Some(v) = path_of.iter().position(|&p| p == usize::MAX) {
            return Err(PartitionError::Uncovered(v));
        }
        Ok(PathPartition {
            paths,
            path_of,
            position,
        })
    }

    pub(crate) fn from_paths_unchecked(n: usize, paths: Vec<Vec<usize>>) -> Self {
        debug_assert!(Self::new(n, paths.clone()).is_ok());
        let mut path_of = vec![0; n];
        let mut position = vec![0; n];
        for (i, p) in paths.iter().enumerate() {
            for (j, &v) in p.iter().enumerate() {
                path_of[v] = i;
                position[v] = j;
            }
        }
        PathPartition {
            paths,
            path_of,
            position,
        }
    }

    /// Every vertex on its own.
    pub fn singletons(n: usize) -> Self {
        Self::from_paths_unchecked(n, (0..n).map(|v| vec![v]).collect())
    }

    pub fn validate_in(&self, g: &Graph) -> Result<(), PartitionError> {
        if g.n() != self.n() {
            return Err(PartitionError::VertexOutOfRange(g.n().min(self.n())));
        }
        for p in &self.paths {
            for w in p.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(PartitionError::NotAdjacent(w[0], w[1]));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.path_of.len()
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<Vec<usize>> {
        self.paths
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn path_of(&self, v: usize) -> usize {
        self.path_of[v]
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// First and last vertex of path `i` (equal for a singleton).
    pub fn endpoints(&self, i: usize) -> (usize, usize) {
        let p = &self.paths[i];
        (p[0], p[p.len() - 1])
    }

    pub fn is_endpoint(&self, v: usize) -> bool {
        let pos = self.position[v];
        pos == 0 || pos + 1 == self.paths[self.path_of[v]].len()
    }

    /// True when `u` and `v` are consecutive on one path.
    pub fn is_path_edge(&self, u: usize, v: usize) -> bool {
        self.path_of[u] == self.path_of[v] && self.position[u].abs_diff(self.position[v]) == 1
    }

    pub fn path_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.paths
            .iter()
            .flat_map(|p| p.windows(2).map(|w| EdgeId::new(w[0], w[1])))
    }

    /// Edges that turn the paths into one Hamiltonian cycle when linked
    /// end-to-start in order. Links already present in `g` are omitted, so a
    /// single path whose endpoints are adjacent needs nothing.
    pub fn completion_edges(&self, g: &Graph) -> Vec<EdgeId> {
        let k = self.paths.len();
        if self.n() < 3 || k == 0 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let (_, end) = self.endpoints(i);
            let (start, _) = self.endpoints((i + 1) % k);
            if !g.has_edge(end, start) {
                out.push(EdgeId::new(end, start));
            }
        }
        out.sort_unstable();
        out
    }

    /// Paths concatenated in order; read cyclically this is the Hamiltonian
    /// cycle realised by [`PathPartition::completion_edges`].
    pub fn linked_cycle(&self) -> Vec<usize> {
        self.paths.iter().flatten().copied().collect()
    }

    /// Lifts a partition of an induced subgraph back to host labels.
    pub(crate) fn relabel(&self, labels: &[usize]) -> Vec<Vec<usize>> {
        self.paths
            .iter()
            .map(|p| p.iter().map(|&v| labels[v]).collect())
            .collect()
    }

    /// Reverses path `i` in place.
    pub(crate) fn reverse_path(&mut self, i: usize) {
        self.paths[i].reverse();
        let len = self.paths[i].len();
        for (j, &v) in self.paths[i].iter().enumerate() {
            debug_assert_eq!(self.position[v], len - 1 - j);
            self.position[v] = j;
        }
    }

    /// Replaces path `i` by a reordering of the same vertex set.
    pub(crate) fn replace_path(&mut self, i: usize, path: Vec<usize>) {
        debug_assert_eq!(path.len(), self.paths[i].len());
        for (j, &v) in path.iter().enumerate() {
            debug_assert_eq!(self.path_of[v], i);
            self.position[v] = j;
        }
        self.paths[i] = path;
    }
}

/// Empty neighbor slot in a two-slot link array.
pub(crate) const NO_LINK: usize = usize::MAX;

/// Walks a linear forest given as two neighbor slots per vertex. Paths are
/// started from their smaller endpoint, in ascending order of that endpoint.
pub(crate) fn paths_from_links(link: &[[usize; 2]], work: &mut usize) -> Vec<Vec<usize>> {
    let n = link.len();
    let mut visited = vec![false; n];
    let mut paths = Vec::new();
    for s in 0..n {
        if visited[s] || (link[s][0] != NO_LINK && link[s][1] != NO_LINK) {
            continue;
        }
        let mut path = Vec::new();
        let mut prev = NO_LINK;
        let mut cur = s;
        loop {
            *work += 1;
            visited[cur] = true;
            path.push(cur);
            let [a, b] = link[cur];
            let next = if a != NO_LINK && a != prev {
                a
            } else if b != NO_LINK && b != prev {
                b
            } else {
                break;
            };
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    debug_assert!(visited.iter().all(|&x| x), "links contain a cycle");
    paths
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleCheckError {
    #[error("cycle has {got} vertices, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("vertex {0} visited twice or out of range")]
    BadVertex(usize),
    #[error("cycle step ({0}, {1}) is neither a graph edge nor an added edge")]
    MissingEdge(usize, usize),
    #[error("added edge {0} is already an edge of the graph")]
    AddedExisting(EdgeId),
}

/// Constructive check that `cycle` is a Hamiltonian cycle of `g` plus
/// `added`, and that every added edge is new.
pub fn check_hamiltonian_completion(
    g: &Graph,
    added: &[EdgeId],
    cycle: &[usize],
) -> Result<(), CycleCheckError> {
    let n = g.n();
    for &e in added {
        if g.has_edge(e.u, e.v) {
            return Err(CycleCheckError::AddedExisting(e));
        }
    }
    if cycle.len() != n || n < 3 {
        return Err(CycleCheckError::WrongLength {
            got: cycle.len(),
            expected: n,
        });
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return Err(CycleCheckError::BadVertex(v));
        }
        seen[v] = true;
    }
    let mut extra = added.to_vec();
    extra.sort_unstable();
    for i in 0..n {
        let a = cycle[i];
        let b = cycle[(i + 1) % n];
        if !g.has_edge(a, b) && extra.binary_search(&EdgeId::new(a, b)).is_err() {
            return Err(CycleCheckError::MissingEdge(a, b));
        }
    }
    Ok(())
}
