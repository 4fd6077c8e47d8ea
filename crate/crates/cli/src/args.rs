use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hcp_core::tour::ExternalTourConfig;
use hcp_core::{SolverParams, TourProvider};

#[derive(Debug, Parser)]
#[command(
    name = "hcp",
    version,
    about = "Hamiltonian completion and minimum path partition solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the Hamiltonian completion number of an instance.
    Solve(SolveArgs),
    /// Write a benchmark instance and its metadata sidecar.
    Generate(GenerateArgs),
    /// Cross-check the solver against exact oracles on small instances.
    Verify(VerifyArgs),
    /// Cover a weighted graph with at most k paths, minimising the heaviest path edge.
    Bottleneck(BottleneckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 1000.0, value_parser = parse_seconds)]
    pub time_limit: f64,
    #[arg(long, default_value_t = 25.0)]
    pub preferred_ratio: f64,
    /// Number of initial spanning trees.
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Non-improving perturbations tolerated per restart.
    #[arg(long, default_value_t = 3000)]
    pub bad_perturbations: usize,
    /// Run restarts on this many worker threads.
    #[arg(long, value_name = "WORKERS", default_value_t = 1)]
    pub parallel: usize,
    /// `internal`, or `external:<path>` to an LKH-compatible executable.
    #[arg(long, default_value = "internal", value_parser = parse_tour_provider)]
    pub tour_provider: TourProviderArg,
}

#[derive(Debug, Clone)]
pub enum TourProviderArg {
    Internal,
    External(PathBuf),
}

impl SolverArgs {
    pub fn params(&self) -> SolverParams {
        let tour_provider = match &self.tour_provider {
            TourProviderArg::Internal => TourProvider::default(),
            TourProviderArg::External(path) => {
                TourProvider::external(ExternalTourConfig::new(path))
            }
        };
        SolverParams {
            preferred_ratio: self.preferred_ratio,
            max_initial_trees: self.restarts,
            max_bad_perturbations: self.bad_perturbations,
            time_limit: Duration::from_secs_f64(self.time_limit),
            seed: self.seed,
            tour_provider,
            workers: self.parallel,
            ..SolverParams::default()
        }
    }
}

fn parse_seconds(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..1e12).contains(&v) {
        Ok(v)
    } else {
        Err(format!(
            "expected a non-negative number of seconds, got {s}"
        ))
    }
}

fn parse_tour_provider(s: &str) -> Result<TourProviderArg, String> {
    match s.split_once(':') {
        None if s == "internal" => Ok(TourProviderArg::Internal),
        Some(("external", path)) if !path.is_empty() => Ok(TourProviderArg::External(path.into())),
        _ => Err(format!(
            "expected `internal` or `external:<path>`, got `{s}`"
        )),
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file in `p edge n m` / `e u v` format; `-` reads stdin.
    pub input: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Skip repeated edges instead of rejecting the instance.
    #[arg(long)]
    pub dedupe: bool,
    /// Include wall-clock time in machine output (text output always shows it).
    #[arg(long)]
    pub timing: bool,
    /// Also report when the final answer was first reached.
    #[arg(long)]
    pub report_first_found: bool,
    /// Instance name in the record; defaults to the file stem.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: Option<GenKind>,
    /// Emit a whole benchmark family instead of one instance.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Directory for `--suite` output.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Only list the instances `--suite` would write.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Instance path; the metadata goes to `<out>.meta.toml`. Stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Erdős–Rényi G(n, p).
    Er {
        n: usize,
        #[arg(
            long,
            conflicts_with = "avg_degree",
            required_unless_present = "avg_degree"
        )]
        p: Option<f64>,
        #[arg(long)]
        avg_degree: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Vertex i joined to the k cyclically following vertices.
    Circulant {
        n: usize,
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    Grid {
        rows: usize,
        cols: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Preferential attachment with `out_degree` edges per new vertex.
    Pa {
        n: usize,
        out_degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// A star on n+1 vertices plus n random edges among the leaves.
    Star {
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Complete tree with `levels` levels and `children` children per inner vertex.
    Tree {
        levels: usize,
        children: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random trees checked for exactness.
    #[arg(long)]
    pub trees: Option<usize>,
    /// Random small graphs checked for the upper-bound property.
    #[arg(long)]
    pub upper_bound: Option<usize>,
    /// Completion number vs path partition number on all small graphs.
    #[arg(long)]
    pub lemma2: bool,
    /// Spanning-tree bound on all small connected graphs.
    #[arg(long)]
    pub lemma5: bool,
    /// Random perturbation monotonicity checks.
    #[arg(long)]
    pub perturbations: Option<usize>,
    /// Largest instance size; each suite caps it at what its oracle handles.
    #[arg(long)]
    pub max_n: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Args)]
pub struct BottleneckArgs {
    /// Weighted instance: `u v w` lines, or DIMACS with `e u v w`; `-` reads stdin.
    pub input: PathBuf,
    /// Maximum number of paths.
    #[arg(short, long)]
    pub k: usize,
    /// Use the exact subset DP inside the search (at most 16 vertices).
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub dedupe: bool,
}
