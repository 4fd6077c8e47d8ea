use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcp"))
        .args(args)
        .output()
        .expect("hcp runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn quick<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = extra.to_vec();
    v.extend_from_slice(&[
        "--restarts",
        "2",
        "--bad-perturbations",
        "200",
        "--seed",
        "1",
    ]);
    v
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON line")
}

#[test]
fn generate_grid_writes_instance_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.col");
    let o = hcp(&["generate", "grid", "3", "3", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let body = fs::read_to_string(&out).unwrap();
    assert!(body.contains("p edge 9 12"));
    assert_eq!(body.lines().filter(|l| l.starts_with("e ")).count(), 12);
    let meta = fs::read_to_string(dir.path().join("g.col.meta.toml")).unwrap();
    assert!(meta.contains("kind = \"grid\""));
    assert!(meta.contains("components = 1"));
}

#[test]
fn generate_circulant_edge_count() {
    let o = hcp(&["generate", "circulant", "500", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("p edge 500 1500"));
    assert_eq!(s.lines().filter(|l| l.starts_with("e ")).count(), 1500);
}

#[test]
fn generate_er_is_reproducible() {
    let a = hcp(&["generate", "er", "256", "--avg-degree", "4", "--seed", "7"]);
    let b = hcp(&["generate", "er", "256", "--avg-degree", "4", "--seed", "7"]);
    let c = hcp(&["generate", "er", "256", "--avg-degree", "4", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generate_benchmark_suite_lists_every_family() {
    let o = hcp(&["generate", "--suite", "paper", "--list"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for prefix in [
        "er_",
        "circle_like_",
        "grid_graph_",
        "preferential_attachment_",
        "star_plus_random_",
        "tree_",
    ] {
        assert!(s.lines().any(|l| l.starts_with(prefix)), "missing {prefix}");
    }
}

#[test]
fn generate_rejects_bad_parameters() {
    let o = hcp(&["generate", "circulant", "4", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_reports_default_label() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.col");
    assert!(
        hcp(&["generate", "grid", "3", "3", "-o", g.to_str().unwrap()])
            .status
            .success()
    );
    let o = hcp(&[
        "solve",
        g.to_str().unwrap(),
        "--seed",
        "1",
        "--format",
        "machine",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["params"]["label"], "MSLS_25_10_3000");
    assert_eq!(v["hcn_estimate"], 1);
    assert_eq!(v["added_edges"].as_array().unwrap().len(), 1);
    assert_eq!(v["instance"], "g");
    assert!(v.get("elapsed_secs").is_none());
}

#[test]
fn solve_overridden_params() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "c5.col",
        "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n",
    );
    let o = hcp(&[
        "solve",
        &g,
        "--preferred-ratio",
        "5",
        "--restarts",
        "1",
        "--bad-perturbations",
        "100",
        "--format",
        "machine",
        "--timing",
        "--report-first-found",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["params"]["label"], "MSLS_5_1_100");
    assert_eq!(v["hcn_estimate"], 0);
    assert!(v["elapsed_secs"].is_number());
    assert!(v["first_found_secs"].is_number());
}

#[test]
fn machine_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("er.col");
    let gen = hcp(&[
        "generate",
        "er",
        "120",
        "--avg-degree",
        "3",
        "--seed",
        "2",
        "-o",
        g.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let args = quick(&["solve", g.to_str().unwrap(), "--format", "machine"]);
    let runs: Vec<Vec<u8>> = (0..3).map(|_| hcp(&args).stdout).collect();
    assert!(!runs[0].is_empty());
    assert!(runs.iter().all(|r| *r == runs[0]));
}

#[test]
fn disconnected_input_gets_a_notice() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "tt.col",
        "p edge 6 6\ne 1 2\ne 2 3\ne 1 3\ne 4 5\ne 5 6\ne 4 6\n",
    );
    let o = hcp(&quick(&["solve", &g, "--format", "machine"]));
    assert!(o.status.success());
    assert!(stderr(&o).contains("2 components"));
    assert_eq!(json(&o)["hcn_estimate"], 2);
}

#[test]
fn parse_error_reports_line_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "bad.col",
        "c broken\np edge 3 2\ne 1 2\ne 2 q\n",
    );
    let o = hcp(&["solve", &g]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn duplicate_edges_need_dedupe() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "dup.col",
        "p edge 3 4\ne 1 2\ne 2 3\ne 3 1\ne 2 1\n",
    );
    assert_eq!(hcp(&["solve", &g]).status.code(), Some(2));
    let o = hcp(&quick(&["solve", &g, "--dedupe", "--format", "machine"]));
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["hcn_estimate"], 0);
}

#[test]
fn tiny_instance_is_a_guard_failure() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "two.col", "p edge 2 1\ne 1 2\n");
    let o = hcp(&["solve", &g]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("path partition number 1"));
}

#[test]
fn zero_time_limit_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "c4.col",
        "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n",
    );
    let o = hcp(&["solve", &g, "--time-limit", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_tour_provider_is_rejected() {
    let o = hcp(&["solve", "x.col", "--tour-provider", "lkh"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("external:<path>"));
}

#[test]
fn missing_external_solver_falls_back() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "c5.col",
        "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n",
    );
    let o = hcp(&quick(&[
        "solve",
        &g,
        "--tour-provider",
        "external:/nonexistent/solver",
        "--format",
        "machine",
    ]));
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["hcn_estimate"], 0);
}

#[test]
fn bottleneck_examples() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.txt", "# path\na b 5\nb c 9\n");
    let o = hcp(&quick(&[
        "bottleneck",
        &p3,
        "-k",
        "1",
        "--format",
        "machine",
    ]));
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["threshold"], 9.0);
    assert_eq!(v["upper_bound"], true);
    let path: Vec<&str> = v["paths"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert!(path == ["a", "b", "c"] || path == ["c", "b", "a"]);

    let k3 = write(dir.path(), "k3.txt", "x y 1\ny z 2\nx z 3\n");
    let o = hcp(&quick(&[
        "bottleneck",
        &k3,
        "-k",
        "1",
        "--format",
        "machine",
        "--exact",
    ]));
    let v = json(&o);
    assert_eq!(v["threshold"], 2.0);
    assert_eq!(v["upper_bound"], false);

    // k = n admits singleton paths, so the smallest weight is accepted.
    let o = hcp(&quick(&[
        "bottleneck",
        &k3,
        "-k",
        "3",
        "--format",
        "machine",
    ]));
    assert_eq!(json(&o)["threshold"], 1.0);
}

#[test]
fn bottleneck_reads_weighted_dimacs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "k3.col",
        "p edge 3 3\ne 1 2 1\ne 2 3 2\ne 1 3 3\n",
    );
    let o = hcp(&quick(&["bottleneck", &f, "-k", "1"]));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("bottleneck    2"));
}

#[test]
fn bottleneck_infeasible_k_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "two.txt", "a b 1\nc d 2\n");
    let o = hcp(&quick(&["bottleneck", &f, "-k", "1"]));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_trees() {
    let o = hcp(&[
        "verify",
        "--trees",
        "40",
        "--max-n",
        "12",
        "--bad-perturbations",
        "300",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS tree optimality: 40/40"));
}

#[test]
fn verify_spanning_tree_bound_rerun() {
    let a = hcp(&["verify", "--lemma5", "--max-n", "6", "--seed", "3"]);
    let b = hcp(&["verify", "--lemma5", "--max-n", "6", "--seed", "3"]);
    assert!(a.status.success());
    assert!(stdout(&a).starts_with("PASS spanning tree bound"));
    assert_eq!(a.stdout, b.stdout);
}
