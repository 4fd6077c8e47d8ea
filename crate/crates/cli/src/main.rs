mod args;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use log::info;
use serde::Serialize;

use hcp_core::bottleneck::{solve_bottleneck, BottleneckError, BottleneckResult, InnerSolver};
use hcp_core::generators::{benchmark_suite, GenSpec, InstanceMetadata};
use hcp_core::io::{parse_dimacs, parse_weighted_any, write_dimacs, LabelledWeightedGraph};
use hcp_core::report::ResultRecord;
use hcp_core::verify::{
    completion_partition_suite, perturbation_suite, spanning_tree_bound_suite, tree_suite,
    upper_bound_suite, SuiteReport,
};
use hcp_core::{min_path_partition, solve_disconnected, Graph, SolveError, SolverParams};

use args::{
    BottleneckArgs, Cli, Command, Format, GenKind, GenerateArgs, Output, SolveArgs, Suite,
    VerifyArgs,
};

/// An error together with the process exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const EXIT_GUARD: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_TIME_LIMIT: u8 = 3;

fn fail(code: u8, error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code,
        error: error.into(),
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            code: EXIT_GUARD,
            error,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(error: io::Error) -> Self {
        Failure {
            code: EXIT_GUARD,
            error: error.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bottleneck(a) => cmd_bottleneck(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text)
}

fn instance_name(path: &Path) -> String {
    match path.file_stem() {
        Some(s) if path.as_os_str() != "-" => s.to_string_lossy().into_owned(),
        _ => "stdin".to_string(),
    }
}

fn params_of(solver: &args::SolverArgs) -> Result<SolverParams, Failure> {
    let params = solver.params();
    params.validate().map_err(|e| fail(EXIT_GUARD, e))?;
    Ok(params)
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let text = read_input(&a.input)?;
    let g = parse_dimacs(&text, a.dedupe).map_err(|e| {
        fail(
            EXIT_PARSE,
            anyhow!(e).context(format!("parsing {}", a.input.display())),
        )
    })?;
    let params = params_of(&a.solver)?;
    let name = a.name.clone().unwrap_or_else(|| instance_name(&a.input));

    if g.n() < 3 {
        let pp = min_path_partition(&g, &params).map_err(|e| fail(EXIT_GUARD, e))?;
        println!(
            "path partition number {} (completion number undefined below 3 vertices)",
            pp.path_count()
        );
        return Err(fail(
            EXIT_GUARD,
            anyhow!("instance has {} vertices, need at least 3", g.n()),
        ));
    }
    let components = g.components().len();
    if components > 1 {
        eprintln!("note: instance has {components} components; solving each separately and joining the paths");
    }
    info!(
        "solving {name}: n={} m={} with {}",
        g.n(),
        g.m(),
        params.label()
    );

    let sol = match solve_disconnected(&g, &params) {
        Ok(sol) => sol,
        Err(SolveError::TimeLimit) => {
            return Err(fail(
                EXIT_TIME_LIMIT,
                anyhow!("time limit reached before any solution"),
            ));
        }
        Err(e) => return Err(fail(EXIT_GUARD, e)),
    };
    let mut record = ResultRecord::new(&name, &g, &params, &sol, true);
    if a.format == Format::Machine && !a.timing {
        record.elapsed_secs = None;
    }
    if !a.report_first_found {
        record.first_found_secs = None;
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match a.format {
        Format::Machine => writeln!(out, "{}", to_json(&record)?)?,
        Format::Text => write_text_record(&mut out, &record)?,
    }
    if sol.interrupted {
        eprintln!("note: time limit reached; reporting the best solution found");
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| fail(EXIT_GUARD, e))
}

fn write_text_record(out: &mut impl Write, r: &ResultRecord) -> io::Result<()> {
    writeln!(out, "instance      {}", r.instance)?;
    writeln!(out, "vertices      {}", r.n)?;
    writeln!(out, "edges         {}", r.m)?;
    writeln!(out, "components    {}", r.components)?;
    writeln!(out, "params        {} seed={}", r.params.label, r.seed)?;
    writeln!(out, "paths         {}", r.path_count)?;
    match r.elapsed_secs {
        Some(t) => writeln!(out, "edges added   {} ({t:.3}s)", r.hcn_estimate)?,
        None => writeln!(out, "edges added   {}", r.hcn_estimate)?,
    }
    if let Some(t) = r.first_found_secs {
        writeln!(out, "first found   {t:.3}s")?;
    }
    writeln!(out, "restarts      {}", r.restarts_used)?;
    writeln!(out, "perturbations {}", r.perturbations_used)?;
    if r.interrupted {
        writeln!(out, "interrupted   yes")?;
    }
    let list: Vec<String> = r
        .added_edges
        .iter()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect();
    writeln!(out, "added         {}", list.join(" "))
}

fn gen_spec(kind: &GenKind) -> (GenSpec, &Output) {
    match kind {
        GenKind::Er {
            n,
            p,
            avg_degree,
            output,
        } => {
            let p = match (p, avg_degree) {
                (Some(p), _) => *p,
                (None, Some(d)) if *n >= 2 => d / (*n - 1) as f64,
                _ => 0.0,
            };
            (
                GenSpec::ErdosRenyi {
                    n: *n,
                    p,
                    seed: output.seed,
                },
                output,
            )
        }
        GenKind::Circulant { n, k, output } => (GenSpec::Circulant { n: *n, k: *k }, output),
        GenKind::Grid { rows, cols, output } => (
            GenSpec::Grid {
                rows: *rows,
                cols: *cols,
            },
            output,
        ),
        GenKind::Pa {
            n,
            out_degree,
            output,
        } => (
            GenSpec::PreferentialAttachment {
                n: *n,
                out_degree: *out_degree,
                seed: output.seed,
            },
            output,
        ),
        GenKind::Star { n, output } => (
            GenSpec::StarPlusRandom {
                n: *n,
                seed: output.seed,
            },
            output,
        ),
        GenKind::Tree {
            levels,
            children,
            output,
        } => (
            GenSpec::StructuredTree {
                levels: *levels,
                children: *children,
            },
            output,
        ),
    }
}

fn render_instance(spec: &GenSpec) -> Result<(Graph, InstanceMetadata, String), Failure> {
    let g = spec.generate().map_err(|e| fail(EXIT_GUARD, e))?;
    let meta = InstanceMetadata::describe(spec, &g);
    let comments = vec![meta.name.clone(), format!("generator {}", to_json(spec)?)];
    let body = write_dimacs(&g, &comments);
    Ok((g, meta, body))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.toml");
    PathBuf::from(s)
}

fn write_instance(path: &Path, body: &str, meta: &InstanceMetadata) -> Result<(), Failure> {
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    let side = sidecar_path(path);
    fs::write(&side, meta.to_toml()).with_context(|| format!("writing {}", side.display()))?;
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    match (&a.kind, a.suite) {
        (Some(kind), _) => {
            let (spec, output) = gen_spec(kind);
            let (_, meta, body) = render_instance(&spec)?;
            match &output.out {
                Some(path) => {
                    write_instance(path, &body, &meta)?;
                    eprintln!(
                        "wrote {} (n={}, m={}, components={})",
                        path.display(),
                        meta.n,
                        meta.m,
                        meta.components
                    );
                }
                None => io::stdout().lock().write_all(body.as_bytes())?,
            }
            Ok(())
        }
        (None, Some(Suite::Paper)) => {
            let specs = benchmark_suite(a.seed);
            if a.list {
                let mut out = io::stdout().lock();
                for s in &specs {
                    writeln!(out, "{}", s.name())?;
                }
                return Ok(());
            }
            fs::create_dir_all(&a.out_dir)
                .with_context(|| format!("creating {}", a.out_dir.display()))?;
            for spec in &specs {
                let (_, meta, body) = render_instance(spec)?;
                let path = a.out_dir.join(format!("{}.col", meta.name));
                write_instance(&path, &body, &meta)?;
                info!("wrote {}", path.display());
            }
            eprintln!("wrote {} instances to {}", specs.len(), a.out_dir.display());
            Ok(())
        }
        (None, None) => Err(fail(
            EXIT_GUARD,
            anyhow!("give a generator kind or --suite"),
        )),
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let params = params_of(&a.solver)?;
    let seed = a.solver.seed;
    let any = a.trees.is_some()
        || a.upper_bound.is_some()
        || a.lemma2
        || a.lemma5
        || a.perturbations.is_some();
    let mut reports: Vec<SuiteReport> = Vec::new();

    if let Some(count) = a.trees.or((!any).then_some(200)) {
        reports.push(tree_suite(count, a.max_n.unwrap_or(12), seed, &params));
    }
    if let Some(count) = a.upper_bound.or((!any).then_some(100)) {
        reports.push(upper_bound_suite(
            count,
            a.max_n.unwrap_or(10),
            seed,
            &params,
        ));
    }
    if a.lemma2 || !any {
        reports.push(completion_partition_suite(a.max_n.unwrap_or(5)));
    }
    if a.lemma5 || !any {
        reports.push(spanning_tree_bound_suite(a.max_n.unwrap_or(6), 20, seed));
    }
    if let Some(count) = a.perturbations.or((!any).then_some(1000)) {
        reports.push(perturbation_suite(
            count,
            a.max_n.unwrap_or(30),
            seed,
            &params,
        ));
    }

    let mut out = io::stdout().lock();
    let mut failed = 0;
    for r in &reports {
        writeln!(out, "{} {r}", if r.ok() { "PASS" } else { "FAIL" })?;
        for f in &r.failures {
            writeln!(out, "     {f}")?;
        }
        failed += usize::from(!r.ok());
    }
    if failed > 0 {
        return Err(fail(EXIT_GUARD, anyhow!("{failed} suite(s) failed")));
    }
    Ok(())
}

#[derive(Serialize)]
struct BottleneckRecord<'a> {
    instance: String,
    n: usize,
    m: usize,
    k: usize,
    threshold: Option<f64>,
    paths: Vec<Vec<&'a str>>,
    upper_bound: bool,
    candidates_solved: usize,
    seed: u64,
}

fn cmd_bottleneck(a: BottleneckArgs) -> CmdResult {
    let text = read_input(&a.input)?;
    let LabelledWeightedGraph { graph: wg, labels } =
        parse_weighted_any(&text, a.dedupe).map_err(|e| {
            fail(
                EXIT_PARSE,
                anyhow!(e).context(format!("parsing {}", a.input.display())),
            )
        })?;
    let params = params_of(&a.solver)?;
    let inner = if a.exact {
        InnerSolver::Exact
    } else {
        InnerSolver::Heuristic(params.clone())
    };
    let result: BottleneckResult = solve_bottleneck(&wg, a.k, &inner).map_err(|e| match e {
        BottleneckError::Solve(SolveError::TimeLimit) => fail(EXIT_TIME_LIMIT, e),
        e => fail(EXIT_GUARD, e),
    })?;
    let record = BottleneckRecord {
        instance: instance_name(&a.input),
        n: wg.n(),
        m: wg.graph().m(),
        k: a.k,
        threshold: result.threshold,
        paths: result
            .paths
            .iter()
            .map(|p| p.iter().map(|&v| labels[v].as_str()).collect())
            .collect(),
        upper_bound: result.upper_bound,
        candidates_solved: result.candidates_solved,
        seed: params.seed,
    };

    let mut out = io::stdout().lock();
    match a.format {
        Format::Machine => writeln!(out, "{}", to_json(&record)?)?,
        Format::Text => {
            match record.threshold {
                Some(w) => writeln!(out, "bottleneck    {w}")?,
                None => writeln!(out, "bottleneck    none (no edges)")?,
            }
            if record.upper_bound {
                writeln!(
                    out,
                    "              heuristic inner solver: an upper bound on the optimum"
                )?;
            }
            writeln!(out, "paths         {} (k = {})", record.paths.len(), a.k)?;
            for p in &record.paths {
                writeln!(out, "  {}", p.join(" "))?;
            }
        }
    }
    Ok(())
}
