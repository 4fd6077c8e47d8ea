//! Benchmark instance generators and their metadata sidecar.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("invalid parameters for {kind}: {reason}")]
    BadParams { kind: &'static str, reason: String },
    #[error("instance too large to index")]
    Overflow,
}

fn bad(kind: &'static str, reason: impl Into<String>) -> GenError {
    GenError::BadParams {
        kind,
        reason: reason.into(),
    }
}

/// Every pair joined independently with probability `p`. Below `p = 0.01`
/// the pairs are visited by geometric jumps instead of one by one.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::BadProbability(p));
    }
    if n == 0 {
        return Err(bad("erdos-renyi", "n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    if p == 0.0 {
        // nothing to add
    } else if p < 0.01 {
        // Walk the pairs (u, v), v < u, in row order skipping Geom(p) pairs.
        let log_q = (1.0 - p).ln();
        let (mut u, mut v) = (1usize, 0usize);
        loop {
            let r: f64 = rng.gen::<f64>();
            let skip = ((1.0 - r).ln() / log_q).floor();
            if !skip.is_finite() || skip > (n * n) as f64 {
                break;
            }
            v += skip as usize;
            while u < n && v >= u {
                v -= u;
                u += 1;
            }
            if u >= n {
                break;
            }
            edges.push(EdgeId::new(v, u));
            v += 1;
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push(EdgeId::new(u, v));
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Erdős–Rényi graph with expected average degree `avg_degree`.
pub fn erdos_renyi_avg_degree(n: usize, avg_degree: f64, seed: u64) -> Result<Graph, GenError> {
    if n < 2 {
        return erdos_renyi(n, 0.0, seed);
    }
    erdos_renyi(n, avg_degree / (n - 1) as f64, seed)
}

/// Vertex `i` adjacent to `i+1, ..., i+k` modulo `n`.
pub fn circulant(n: usize, k: usize) -> Result<Graph, GenError> {
    if k == 0 || n <= 2 * k {
        return Err(bad(
            "circulant",
            format!("need k >= 1 and n > 2k, got n={n}, k={k}"),
        ));
    }
    let edges = (0..n).flat_map(|i| (1..=k).map(move |d| EdgeId::new(i, (i + d) % n)));
    let mut edges: Vec<EdgeId> = edges.collect();
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Grid graph; vertex `r * cols + c` sits at row `r`, column `c`.
pub fn grid(rows: usize, cols: usize) -> Result<Graph, GenError> {
    if rows == 0 || cols == 0 {
        return Err(bad("grid", "rows and cols must be positive"));
    }
    let n = rows.checked_mul(cols).ok_or(GenError::Overflow)?;
    let mut edges = Vec::with_capacity(2 * n);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push(EdgeId::new(v, v + 1));
            }
            if r + 1 < rows {
                edges.push(EdgeId::new(v, v + cols));
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Barabási–Albert style growth from a clique on `out_degree + 1` vertices;
/// each new vertex links to `out_degree` distinct existing vertices drawn
/// proportionally to degree.
pub fn preferential_attachment(n: usize, out_degree: usize, seed: u64) -> Result<Graph, GenError> {
    if out_degree == 0 || n <= out_degree {
        return Err(bad(
            "preferential-attachment",
            format!("need n > out_degree >= 1, got n={n}, out_degree={out_degree}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = out_degree + 1;
    let mut edges = Vec::new();
    // Each vertex appears once per incident edge.
    let mut ends: Vec<usize> = Vec::new();
    for u in 0..start {
        for v in u + 1..start {
            edges.push(EdgeId::new(u, v));
            ends.push(u);
            ends.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(out_degree);
    for v in start..n {
        chosen.clear();
        while chosen.len() < out_degree {
            let t = ends[rng.gen_range(0..ends.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push(EdgeId::new(t, v));
            ends.push(t);
            ends.push(v);
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Star with center 0 and leaves `1..=n`, plus `n` distinct random edges
/// between leaves.
pub fn star_plus_random(n: usize, seed: u64) -> Result<Graph, GenError> {
    let leaf_pairs = n
        .checked_mul(n.saturating_sub(1))
        .ok_or(GenError::Overflow)?
        / 2;
    if n < 2 || leaf_pairs < n {
        return Err(bad(
            "star-plus-random",
            format!("{n} leaves leave room for only {leaf_pairs} extra edges"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<EdgeId> = (1..=n).map(|v| EdgeId::new(0, v)).collect();
    let mut extra = HashSet::with_capacity(n);
    while extra.len() < n {
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        if a != b && extra.insert(EdgeId::new(a, b)) {
            edges.push(EdgeId::new(a, b));
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n + 1, edges))
}

/// Perfect `c`-ary tree with `l` levels in breadth-first numbering.
pub fn structured_tree(levels: usize, children: usize) -> Result<Graph, GenError> {
    if levels == 0 || children == 0 {
        return Err(bad(
            "structured-tree",
            "levels and children must be positive",
        ));
    }
    let mut n: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..levels {
        n = n.checked_add(layer).ok_or(GenError::Overflow)?;
        layer = layer.checked_mul(children).ok_or(GenError::Overflow)?;
    }
    let edges: Vec<EdgeId> = (1..n).map(|v| EdgeId::new((v - 1) / children, v)).collect();
    let mut edges = edges;
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// A generator invocation, enough to rebuild an instance exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    ErdosRenyi {
        n: usize,
        p: f64,
        seed: u64,
    },
    Circulant {
        n: usize,
        k: usize,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    PreferentialAttachment {
        n: usize,
        out_degree: usize,
        seed: u64,
    },
    StarPlusRandom {
        n: usize,
        seed: u64,
    },
    StructuredTree {
        levels: usize,
        children: usize,
    },
}

impl GenSpec {
    pub fn generate(&self) -> Result<Graph, GenError> {
        match *self {
            GenSpec::ErdosRenyi { n, p, seed } => erdos_renyi(n, p, seed),
            GenSpec::Circulant { n, k } => circulant(n, k),
            GenSpec::Grid { rows, cols } => grid(rows, cols),
            GenSpec::PreferentialAttachment {
                n,
                out_degree,
                seed,
            } => preferential_attachment(n, out_degree, seed),
            GenSpec::StarPlusRandom { n, seed } => star_plus_random(n, seed),
            GenSpec::StructuredTree { levels, children } => structured_tree(levels, children),
        }
    }

    /// File-name friendly instance name, e.g. `grid_graph_3_3`.
    pub fn name(&self) -> String {
        match *self {
            GenSpec::ErdosRenyi { n, p, seed } => format!("er_{n}_{p}_s{seed}"),
            GenSpec::Circulant { n, k } => format!("circle_like_{n}_{k}"),
            GenSpec::Grid { rows, cols } => format!("grid_graph_{rows}_{cols}"),
            GenSpec::PreferentialAttachment {
                n,
                out_degree,
                seed,
            } => format!("preferential_attachment_{n}_{out_degree}_s{seed}"),
            GenSpec::StarPlusRandom { n, seed } => format!("star_plus_random_{n}_s{seed}"),
            GenSpec::StructuredTree { levels, children } => format!("tree_{levels}_{children}"),
        }
    }

    /// Known completion number for the families where it is fixed.
    pub fn known_hcn(&self) -> Option<usize> {
        match *self {
            GenSpec::Circulant { .. } => Some(0),
            GenSpec::Grid { rows, cols } if rows >= 2 && cols >= 2 => {
                Some(usize::from(rows % 2 == 1 && cols % 2 == 1))
            }
            _ => None,
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Sidecar written next to a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub name: String,
    pub generator: GenSpec,
    pub n: usize,
    pub m: usize,
    pub components: usize,
    /// How the preferential attachment process was started, when relevant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_hcn: Option<usize>,
}

impl InstanceMetadata {
    pub fn describe(spec: &GenSpec, g: &Graph) -> Self {
        let bootstrap = match spec {
            GenSpec::PreferentialAttachment { out_degree, .. } => {
                Some(format!("clique on {} vertices", out_degree + 1))
            }
            _ => None,
        };
        InstanceMetadata {
            name: spec.name(),
            generator: spec.clone(),
            n: g.n(),
            m: g.m(),
            components: g.components().len(),
            bootstrap,
            known_hcn: spec.known_hcn(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("metadata serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// The benchmark family: ER sweeps over `n = 2^8..2^13` with average degree
/// `2^0..n`, circulants, grids, preferential attachment, star-plus-random
/// and the two structured trees. Seeds are derived from `seed`.
pub fn benchmark_suite(seed: u64) -> Vec<GenSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for e in 8..=13u32 {
        let n = 1usize << e;
        let mut d = 1usize;
        while d < n {
            out.push(GenSpec::ErdosRenyi {
                n,
                p: d as f64 / (n - 1) as f64,
                seed: rng.gen(),
            });
            d *= 2;
        }
    }
    for n in [500, 1000, 5000, 10000, 30000] {
        for k in [3, 5, 10] {
            out.push(GenSpec::Circulant { n, k });
        }
    }
    for (rows, cols) in [
        (2, 5000),
        (50, 50),
        (51, 51),
        (100, 100),
        (101, 101),
        (99, 100),
    ] {
        out.push(GenSpec::Grid { rows, cols });
    }
    for n in [1000, 1500, 2000, 4000] {
        for out_degree in [3, 4, 6, 8] {
            out.push(GenSpec::PreferentialAttachment {
                n,
                out_degree,
                seed: rng.gen(),
            });
        }
    }
    for n in [1000, 2000, 3000, 4000] {
        out.push(GenSpec::StarPlusRandom { n, seed: rng.gen() });
    }
    out.push(GenSpec::StructuredTree {
        levels: 10,
        children: 2,
    });
    out.push(GenSpec::StructuredTree {
        levels: 7,
        children: 3,
    });
    out
}

/// Uniformly random labelled tree on `n` vertices from a random Prüfer code.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    if n <= 1 {
        return Graph::empty(n);
    }
    if n == 2 {
        return Graph::from_edges(2, [(0, 1)]).expect("single edge");
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    tree_from_prufer(n, &code)
}

/// Decodes a Prüfer sequence of length `n - 2` into its tree.
pub fn tree_from_prufer(n: usize, code: &[usize]) -> Graph {
    assert_eq!(code.len() + 2, n, "Prüfer code must have length n - 2");
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push(EdgeId::new(leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(std::cmp::Reverse(c));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push(EdgeId::new(a, b));
    Graph::from_edges(n, edges).expect("Prüfer decoding yields a simple tree")
}

/// Random connected graph: a random tree plus each remaining pair with
/// probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let tree = random_tree(n, rng);
    let mut edges: Vec<EdgeId> = tree.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !tree.has_edge(u, v) && rng.gen::<f64>() < p {
                edges.push(EdgeId::new(u, v));
            }
        }
    }
    // Shuffle labels so the tree is not always the first edges found.
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    Graph::from_edges(n, edges.iter().map(|e| (labels[e.u], labels[e.v])))
        .expect("relabelled simple graph")
}
