//! Initial tours on the implicit complete graph where a vertex pair costs 0
//! if it is an edge of the input graph and 1 otherwise.
//!
//! The complete graph is never built; costs are looked up in the adjacency
//! lists on demand.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Arc, Mutex};

use log::warn;
use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::partition::PathPartition;

/// Improvement sweeps allowed to the internal 2-opt pass.
pub const DEFAULT_TWO_OPT_SWEEPS: usize = 30;

#[derive(Debug, Error)]
pub enum TourError {
    #[error("a tour needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("tour order is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("external solver: {0}")]
    External(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Cyclic vertex order with a flag per consecutive pair telling whether the
/// pair is a graph edge (cost 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
    zero_edge: Vec<bool>,
}

impl Tour {
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<Self, TourError> {
        let n = g.n();
        if order.len() != n {
            return Err(TourError::NotPermutation(n));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(TourError::NotPermutation(n));
            }
            seen[v] = true;
        }
        let zero_edge = (0..n)
            .map(|i| g.has_edge(order[i], order[(i + 1) % n]))
            .collect();
        Ok(Tour { order, zero_edge })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `zero_edge_flags()[i]` describes the pair `(order[i], order[i + 1 mod n])`.
    pub fn zero_edge_flags(&self) -> &[bool] {
        &self.zero_edge
    }

    /// Number of non-edges used by the tour.
    pub fn weight(&self) -> usize {
        self.zero_edge.iter().filter(|&&z| !z).count()
    }
}

/// Settings for the built-in greedy + 2-opt tour heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InternalTourConfig {
    pub two_opt_sweeps: usize,
}

impl Default for InternalTourConfig {
    fn default() -> Self {
        InternalTourConfig {
            two_opt_sweeps: DEFAULT_TWO_OPT_SWEEPS,
        }
    }
}

/// Parameters handed to an external LKH-compatible solver. The defaults are
/// the deliberately light settings used for initial tours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalTourConfig {
    pub command: PathBuf,
    pub move_type: u32,
    pub patching_c: u32,
    pub patching_a: u32,
    pub runs: u32,
    pub candidate_set_type: String,
    pub max_trials: u32,
}

impl ExternalTourConfig {
    pub fn new(command: impl Into<PathBuf>) -> Self {
        ExternalTourConfig {
            command: command.into(),
            move_type: 5,
            patching_c: 3,
            patching_a: 2,
            runs: 1,
            candidate_set_type: "POPMUSIC".to_string(),
            max_trials: 2,
        }
    }
}

/// Where initial tours come from.
#[derive(Debug, Clone)]
pub enum TourProvider {
    Internal(InternalTourConfig),
    External {
        config: ExternalTourConfig,
        // One solver process at a time per provider.
        lock: Arc<Mutex<()>>,
    },
}

impl Default for TourProvider {
    fn default() -> Self {
        TourProvider::Internal(InternalTourConfig::default())
    }
}

impl TourProvider {
    pub fn external(config: ExternalTourConfig) -> Self {
        TourProvider::External {
            config,
            lock: Arc::new(Mutex::new(())),
        }
    }
}

/// Builds a heuristic low-weight tour. External solver failures fall back to
/// the internal heuristic with a warning.
pub fn build_initial_tour<R: Rng>(
    g: &Graph,
    provider: &TourProvider,
    rng: &mut R,
) -> Result<Tour, TourError> {
    if g.n() < 3 {
        return Err(TourError::TooSmall(g.n()));
    }
    match provider {
        TourProvider::Internal(cfg) => Ok(internal_tour(g, cfg, rng)),
        TourProvider::External { config, lock } => {
            let seed: u32 = rng.gen_range(1..=i32::MAX as u32);
            let result = {
                let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
                run_external(g, config, seed)
            };
            match result {
                Ok(t) => Ok(t),
                Err(e) => {
                    warn!("external tour solver failed ({e}); using internal heuristic");
                    Ok(internal_tour(g, &InternalTourConfig::default(), rng))
                }
            }
        }
    }
}

fn internal_tour<R: Rng>(g: &Graph, cfg: &InternalTourConfig, rng: &mut R) -> Tour {
    let mut order = greedy_order(g, rng);
    two_opt(g, &mut order, cfg.two_opt_sweeps);
    Tour::new(g, order).expect("internal tour is a permutation")
}

/// Walks to the unvisited neighbor with the fewest unvisited neighbors
/// (lowest id on ties); jumps to a random unvisited vertex when stuck.
fn greedy_order<R: Rng>(g: &Graph, rng: &mut R) -> Vec<usize> {
    let n = g.n();
    let mut remaining: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut unvisited: Vec<usize> = (0..n).collect();
    let mut slot: Vec<usize> = (0..n).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    let mut cur = unvisited[rng.gen_range(0..n)];
    loop {
        visited[cur] = true;
        order.push(cur);
        let s = slot[cur];
        let last = *unvisited.last().expect("cur is unvisited");
        unvisited.swap_remove(s);
        if last != cur {
            slot[last] = s;
        }
        if unvisited.is_empty() {
            break;
        }
        let mut best: Option<usize> = None;
        for &w in g.neighbors(cur) {
            if visited[w] {
                continue;
            }
            remaining[w] -= 1;
            if best.is_none_or(|b| remaining[w] < remaining[b]) {
                best = Some(w);
            }
        }
        cur = match best {
            Some(w) => w,
            None => unvisited[rng.gen_range(0..unvisited.len())],
        };
    }
    order
}

/// 2-opt restricted to moves that strictly reduce the number of non-edges.
/// Candidate moves always introduce at least one graph edge next to a broken
/// tour link. Returns the number of moves applied.
fn two_opt(g: &Graph, order: &mut [usize], max_sweeps: usize) -> usize {
    let n = order.len();
    if n < 4 {
        return 0;
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let cost = |a: usize, b: usize| -> i32 { i32::from(!g.has_edge(a, b)) };
    let mut moves = 0;
    for _ in 0..max_sweeps {
        let mut improved = false;
        for i in 0..n {
            let x = order[i];
            let y = order[(i + 1) % n];
            if g.has_edge(x, y) {
                continue;
            }
            // Partner link (t[k], t[k+1]); the move adds (t[i], t[k]) and
            // (t[i+1], t[k+1]).
            let mut chosen = None;
            for &b in g.neighbors(x) {
                let k = pos[b];
                let bn = order[(k + 1) % n];
                if k == (i + 1) % n || bn == x {
                    continue;
                }
                if cost(y, bn) - 1 - cost(b, bn) < 0 {
                    chosen = Some(k);
                    break;
                }
            }
            if chosen.is_none() {
                for &c in g.neighbors(y) {
                    let k = (pos[c] + n - 1) % n;
                    let cp = order[k];
                    if k == i || k == (i + 1) % n {
                        continue;
                    }
                    if cost(x, cp) - 1 - cost(cp, c) < 0 {
                        chosen = Some(k);
                        break;
                    }
                }
            }
            if let Some(k) = chosen {
                reverse_cyclic(order, &mut pos, (i + 1) % n, k);
                moves += 1;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    moves
}

/// Reverses the cyclic segment `from..=to`, or the complementary segment
/// when that one is shorter (same cyclic tour up to direction).
fn reverse_cyclic(order: &mut [usize], pos: &mut [usize], from: usize, to: usize) {
    let n = order.len();
    let len = (to + n - from) % n + 1;
    let (mut a, mut b, len) = if 2 * len > n {
        ((to + 1) % n, (from + n - 1) % n, n - len)
    } else {
        (from, to, len)
    };
    for _ in 0..len / 2 {
        order.swap(a, b);
        pos[order[a]] = a;
        pos[order[b]] = b;
        a = (a + 1) % n;
        b = (b + n - 1) % n;
    }
}

/// Cuts the tour at every non-edge. A tour without non-edges (a Hamiltonian
/// cycle) is cut once, just before `order[0]`.
pub fn tour_to_path_partition(g: &Graph, tour: &Tour) -> PathPartition {
    let n = tour.order.len();
    let start = tour
        .zero_edge
        .iter()
        .position(|&z| !z)
        .map(|i| (i + 1) % n)
        .unwrap_or(0);
    let mut paths = Vec::new();
    let mut cur = Vec::new();
    for s in 0..n {
        let i = (start + s) % n;
        cur.push(tour.order[i]);
        if !tour.zero_edge[i] || s + 1 == n {
            paths.push(std::mem::take(&mut cur));
        }
    }
    let pp = PathPartition::from_paths_unchecked(n, paths);
    debug_assert!(pp.validate_in(g).is_ok());
    pp
}

/// TSPLIB text for the 0/1 instance as a full matrix.
pub fn write_tsplib_problem(g: &Graph, name: &str) -> String {
    let n = g.n();
    let mut out = String::with_capacity(n * n * 2 + 256);
    let _ = writeln!(out, "NAME : {name}");
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "COMMENT : 0 for graph edges, 1 otherwise");
    let _ = writeln!(out, "DIMENSION : {n}");
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
    let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
    let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
    let mut row = vec![b'1'; n];
    for u in 0..n {
        row.iter_mut().for_each(|c| *c = b'1');
        row[u] = b'0';
        for &v in g.neighbors(u) {
            row[v] = b'0';
        }
        for (j, &c) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push(c as char);
        }
        out.push('\n');
    }
    out.push_str("EOF\n");
    out
}

/// Solver parameter file pointing at the problem and tour paths.
pub fn write_lkh_parameters(
    cfg: &ExternalTourConfig,
    problem: &Path,
    tour: &Path,
    seed: u32,
) -> String {
    format!(
        "PROBLEM_FILE = {}\nTOUR_FILE = {}\nMOVE_TYPE = {}\nPATCHING_C = {}\nPATCHING_A = {}\n\
         RUNS = {}\nCANDIDATE_SET_TYPE = {}\nMAX_TRIALS = {}\nSEED = {}\n",
        problem.display(),
        tour.display(),
        cfg.move_type,
        cfg.patching_c,
        cfg.patching_a,
        cfg.runs,
        cfg.candidate_set_type,
        cfg.max_trials,
        seed
    )
}

/// Reads the `TOUR_SECTION` of a TSPLIB tour (1-based ids, `-1` terminated)
/// into 0-based order.
pub fn parse_tsplib_tour(text: &str, n: usize) -> Result<Vec<usize>, TourError> {
    let mut lines = text.lines();
    lines
        .by_ref()
        .find(|l| l.trim() == "TOUR_SECTION")
        .ok_or_else(|| TourError::External("no TOUR_SECTION in solver output".into()))?;
    let mut order = Vec::with_capacity(n);
    'outer: for line in lines {
        for tok in line.split_whitespace() {
            if tok == "EOF" {
                break 'outer;
            }
            let id: i64 = tok
                .parse()
                .map_err(|_| TourError::External(format!("bad tour entry {tok:?}")))?;
            if id == -1 {
                break 'outer;
            }
            if id < 1 || id as usize > n {
                return Err(TourError::External(format!("tour node {id} out of range")));
            }
            order.push(id as usize - 1);
        }
    }
    Ok(order)
}

fn run_external(g: &Graph, cfg: &ExternalTourConfig, seed: u32) -> Result<Tour, TourError> {
    let dir = tempfile::tempdir()?;
    let problem = dir.path().join("hcp.tsp");
    let tour_path = dir.path().join("hcp.tour");
    let par = dir.path().join("hcp.par");
    fs::write(&problem, write_tsplib_problem(g, "hcp"))?;
    fs::write(&par, write_lkh_parameters(cfg, &problem, &tour_path, seed))?;

    let output = Command::new(&cfg.command).arg(&par).output()?;
    if !output.status.success() {
        return Err(TourError::External(format!(
            "{} exited with {}",
            cfg.command.display(),
            output.status
        )));
    }
    let text = match fs::read_to_string(&tour_path) {
        Ok(t) => t,
        Err(_) => String::from_utf8_lossy(&output.stdout).into_owned(),
    };
    let order = parse_tsplib_tour(&text, g.n())?;
    Tour::new(g, order)
}
