//! Front-end contracts: exit codes, CSV layout, determinism and round trips.

use std::path::Path;

use costbeta_core::io;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["costbeta"];
    argv.extend_from_slice(args);
    let code = costbeta_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn cycles_manifest(dir: &Path) -> String {
    write(
        dir,
        "cycles.json",
        r#"{"schema_version": 1, "kind": "graphs",
            "instances": ["cycle(4)", "cycle(6)", "cycle(9)", "cycle(14)"], "n0": 2}"#,
    )
}

#[test]
fn generate_cycle_is_an_edge_list() {
    let (code, out, _) = run(&["generate", "cycle", "6"]);
    assert_eq!(code, 0);
    assert_eq!(out, "6 6\n0 1\n0 5\n1 2\n2 3\n3 4\n4 5\n");
    let (code, same, _) = run(&["generate", "cycle(6)"]);
    assert_eq!((code, same), (0, out));
}

#[test]
fn generated_instances_round_trip() {
    let (_, a, _) = run(&["generate", "random-schreier", "2", "200", "--seed", "0"]);
    let action = io::read_action(&a).unwrap();
    assert_eq!(action.degree(), 200);
    assert_eq!(io::write_action(&action), a);
    let (_, again, _) = run(&["generate", "random-schreier", "2", "200", "--seed", "0"]);
    assert_eq!(a, again);
    let (_, other, _) = run(&["generate", "random-schreier", "2", "200", "--seed", "1"]);
    assert_ne!(a, other);

    let (code, chain, _) = run(&["generate", "double-cover-chain", "4", "--seed", "3"]);
    assert_eq!(code, 0);
    let c = io::read_chain(&chain).unwrap();
    assert_eq!(c.iter().map(|a| a.degree()).collect::<Vec<_>>(), [1, 2, 4, 8, 16]);
    assert!(c.iter().all(|a| a.is_transitive()));
    assert_eq!(io::write_chain(&c), chain);
}

#[test]
fn ccost_csv_header_and_exact_columns() {
    let dir = tempfile::tempdir().unwrap();
    let m = cycles_manifest(dir.path());
    let (code, out, _) = run(&["ccost", "--manifest", &m, "--Lmax", "8", "--n0", "1", "--out", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,L,cost_num,cost_den,exact_flag,edges_kept"));
    assert_eq!(out.lines().count(), 1 + 4 * 8);
    assert!(!out.contains('.'), "rationals must be num/den columns");
    // cost_3(C_4) = 3/4, exact.
    assert!(out.lines().any(|l| l == "0,3,3,4,true,3"));
}

#[test]
fn rank_gradient_json_has_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (_, chain, _) = run(&["generate", "double-cover-chain", "3"]);
    let p = write(dir.path(), "chain.json", &chain);
    let (code, out, _) = run(&["rank-gradient", "--chain", &p, "--out", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["summary"]["final"]["gradient"], serde_json::json!(["1/1", "1/1"]));
}

#[test]
fn reports_are_byte_identical_across_runs_and_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let m = cycles_manifest(dir.path());
    let args = |jobs: &'static str| {
        vec!["ccost", "--manifest", m.as_str(), "--Lmax", "6", "--jobs", jobs, "--seed", "5"]
    };
    let (_, serial, _) = run(&args("1"));
    let (_, parallel, _) = run(&args("4"));
    let (_, again, _) = run(&args("4"));
    assert_eq!(serial, parallel);
    assert_eq!(parallel, again);
    let (_, e1, _) = run(&["elek-beta", "--manifest", &m, "--jobs", "1"]);
    let (_, e3, _) = run(&["elek-beta", "--manifest", &m, "--jobs", "3"]);
    assert_eq!(e1, e3);
    let (_, b1, _) = run(&["beta-d", "--manifest", &m, "--d", "1", "--jobs", "1"]);
    let (_, b3, _) = run(&["beta-d", "--manifest", &m, "--d", "1", "--jobs", "3"]);
    assert_eq!(b1, b3);
}

#[test]
fn schema_violations_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_version = write(dir.path(), "v.json", r#"{"schema_version": 9, "kind": "graphs", "instances": ["cycle(4)"]}"#);
    let (code, _, err) = run(&["ccost", "--manifest", &bad_version]);
    assert_eq!(code, 2);
    assert!(err.contains("schema_version"), "{err}");

    let unknown = write(dir.path(), "u.json", "{\"schema_version\": 1,\n \"kind\": \"graphs\",\n \"colour\": 1}");
    let (code, _, err) = run(&["ccost", "--manifest", &unknown]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    let unseeded = write(dir.path(), "s.json", r#"{"schema_version": 1, "kind": "graphs", "instances": ["gnp(5, 0.5)"]}"#);
    let (code, _, err) = run(&["ccost", "--manifest", &unseeded]);
    assert_eq!(code, 2);
    assert!(err.contains("instances[0]"), "{err}");

    let empty_grid = write(dir.path(), "g.json", r#"{"schema_version": 1, "kind": "graphs", "instances": ["cycle(4)"], "grids": {"q": []}}"#);
    assert_eq!(run(&["elek-beta", "--manifest", &empty_grid]).0, 2);

    assert_eq!(run(&["ccost", "--manifest", "/does/not/exist.json"]).0, 2);
    assert_eq!(run(&["lipcost", "--graph", &bad_version, "--L", "2"]).0, 2);
    assert_eq!(run(&["betti", "--complex", &bad_version, "--i", "0", "--field", "fp:4"]).0, 2);
    assert_eq!(run(&["generate", "random-schreier", "2"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
}

#[test]
fn relator_violation_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "a.json",
        r#"{"generators": ["a"], "relators": ["a^2"], "degree": 3, "perms": {"a": [1, 2, 0]}}"#,
    );
    let (code, _, err) = run(&["schreier", "--action", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("relator"), "{err}");
    // The same permutations are accepted as a labeled graph.
    let (code, out, _) = run(&["farber", "--action", &bad, "--R", "2", "--labeled", "--out", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().ends_with(",1,1"), "{out}");
}

#[test]
fn size_cap_becomes_an_error_row() {
    let dir = tempfile::tempdir().unwrap();
    let (_, c40, _) = run(&["generate", "cycle", "40"]);
    let g = write(dir.path(), "c40.txt", &c40);
    let (code, out, err) = run(&["lipcost", "--graph", &g, "--L", "3", "--exact", "--out", "csv"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");
    assert_eq!(out.lines().nth(1), Some("40,3,,,error,"));
    let (code, out, _) = run(&["lipcost", "--graph", &g, "--L", "3", "--out", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().ends_with(",false,40"), "{out}");
}

#[test]
fn plot_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = cycles_manifest(dir.path());
    let svg = dir.path().join("p.svg");
    let report = dir.path().join("r.json");
    let (code, out, _) = run(&[
        "elek-beta", "--manifest", &m,
        "--emit-plot", svg.to_str().unwrap(),
        "--output", report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let plot = std::fs::read_to_string(&svg).unwrap();
    assert!(plot.starts_with("<svg") && plot.contains("<polyline"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // Output locations are not part of the job echo.
    assert!(!v["job"].to_string().contains("p.svg"));
}

#[test]
fn homology_commands() {
    let dir = tempfile::tempdir().unwrap();
    let (_, c6, _) = run(&["generate", "cycle", "6"]);
    let g = write(dir.path(), "c6.txt", &c6);
    let k = dir.path().join("r1.json");
    let (code, _, _) = run(&["rips", "--graph", &g, "--q", "1", "--save", k.to_str().unwrap()]);
    assert_eq!(code, 0);
    let k = k.to_str().unwrap();
    let (_, out, _) = run(&["betti", "--complex", k, "--i", "1", "--laplacian", "--out", "csv"]);
    assert_eq!(out.lines().nth(1), Some("0,1,q,1,1"));
    let (_, out, _) = run(&["nabla", "--sub", k, "--super", k, "--i", "1", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["nabla"], "1/1");
    let (_, out, _) = run(&["connectivity", "--graph", &g, "--q", "1", "--inner", "1", "--outer", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["passing"], 6);
}

#[test]
fn spectral_commands() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.txt", "3\n2 -1 -1\n-1 2 -1\n-1 -1 2\n");
    let (code, out, _) = run(&["spectral", "--matrix", &x, "--bins", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["kernel_dim"], 1);
    assert_eq!(v["summary"]["zero_mass"], "1/3");
    let (_, out, _) = run(&["lueck-check", "--matrix", &x, "--eps", "0.5,0.1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["nonzero_product"]["product"], "9");
    assert_eq!(run(&["lueck-check", "--matrix", &x, "--eps", "1.5"]).0, 2);
    let m = write(
        dir.path(),
        "m.json",
        r#"{"schema_version": 1, "kind": "matrices", "instances": ["laplacian(cycle(4))", "zeros(3)", "identity(2)"]}"#,
    );
    let (_, out, _) = run(&["kernel-seq", "--manifest", &m, "--window", "2", "--out", "csv"]);
    assert_eq!(out, "n,size,kernel_dim,normalized_num,normalized_den\n0,4,1,1,4\n1,3,3,1,1\n2,2,0,0,1\n");
}
