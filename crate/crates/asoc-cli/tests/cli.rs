//! End-to-end tests driving the compiled binary: exit codes, stream
//! discipline (data on stdout, diagnostics on stderr), format selection,
//! config-file precedence, and determinism across invocations.

use std::process::{Command, Output};

fn asoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asoc"))
        .args(args)
        .env_remove("ASOC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(output)).expect("stdout is json")
}

#[test]
fn optimize_solves_a_small_sphere() {
    let output = asoc(&[
        "optimize", "--function", "sphere", "--dim", "2", "--seed", "1", "--max-iters", "500",
    ]);
    assert!(output.status.success());
    // piped stdout defaults to json
    let report = json(&output);
    assert_eq!(report["function"], "sphere");
    assert_eq!(report["dim"], 2);
    assert!(report["best_f"].as_f64().unwrap() <= 1e-3);
    assert_eq!(report["best_x"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_function_exits_2_and_lists_the_catalog() {
    let output = asoc(&["optimize", "--function", "nosuch"]);
    assert_eq!(output.status.code(), Some(2));
    let message = stderr(&output);
    assert!(message.contains("sphere"));
    assert!(message.contains("eggholder"));
    assert!(stdout(&output).is_empty());
}

#[test]
fn invalid_dimension_exits_2() {
    let output = asoc(&["optimize", "--function", "beale", "--dim", "5"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("exactly 2"));

    let output = asoc(&["optimize", "--function", "rosenbrock", "--dim", "1"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("at least 2"));
}

#[test]
fn baselines_dispatch_and_emit_traces() {
    let output = asoc(&[
        "optimize", "--function", "booth", "--method", "sa", "--seed", "1", "--max-iters", "80",
    ]);
    assert!(output.status.success());
    let report = json(&output);
    assert_eq!(report["method"], "sa");
    assert_eq!(report["iterations"], 80);

    let output = asoc(&[
        "optimize", "--function", "booth", "--method", "sa", "--seed", "1", "--max-iters", "80",
        "--format", "csv",
    ]);
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "iteration,best_f,pool_mean_f,evaluations,segment_index"
    );
    assert_eq!(lines.count(), 80);
}

#[test]
fn compare_is_deterministic_across_invocations() {
    let args = [
        "compare", "--functions", "booth,8", "--methods", "asoc,ga", "--checkpoints", "10,30",
        "--seeds", "2", "--seed", "7", "--format", "json",
    ];
    let first = asoc(&args);
    let second = asoc(&args);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));

    let report = json(&first);
    assert_eq!(report["master_seed"], 7);
    let groups = report["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 4); // 2 functions x 2 methods
    assert_eq!(groups[0]["function"], "booth");
    assert_eq!(groups[3]["function"], "matyas");
}

#[test]
fn compare_out_prefix_writes_json_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("results");
    let output = asoc(&[
        "compare", "--functions", "booth", "--methods", "asoc", "--checkpoints", "15",
        "--seeds", "2", "--seed", "3", "--out", prefix.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).is_empty(), "data went to files, stdout stays quiet");
    let json_text = std::fs::read_to_string(dir.path().join("results.json")).unwrap();
    let table_text = std::fs::read_to_string(dir.path().join("results.txt")).unwrap();
    assert!(json_text.contains("\"master_seed\": 3"));
    assert!(table_text.starts_with("function"));
    assert!(table_text.contains("booth"));
}

#[test]
fn adapt_emits_one_csv_covering_all_17_segments() {
    let output = asoc(&["adapt", "--iterations", "10", "--seed", "5"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 17 * 10);
    assert_eq!(lines[0], "iteration,best_f,pool_mean_f,evaluations,segment_index");
    assert!(lines.last().unwrap().ends_with(",17"));

    // cumulative iteration numbering: strictly increasing across the file
    let iterations: Vec<u64> = lines[1..]
        .iter()
        .map(|line| line.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(iterations.windows(2).all(|w| w[1] == w[0] + 1));
    assert_eq!(iterations[0], 1);
    assert_eq!(*iterations.last().unwrap(), 170);
}

#[test]
fn list_functions_covers_the_whole_catalog() {
    let output = asoc(&["list-functions", "--format", "json"]);
    assert!(output.status.success());
    let rows = json(&output);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert_eq!(rows[0]["name"], "ackley");
    assert_eq!(rows[17]["name"], "styblinski-tang");

    let output = asoc(&["list-functions", "--format", "table"]);
    let text = stdout(&output);
    assert!(text.contains("goldstein-price"));
    assert!(text.contains("[-512, 512]^2"));
}

#[test]
fn config_file_fills_gaps_but_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "function = \"booth\"\nseed = 5\nmax-iters = 60\n").unwrap();

    let from_file = asoc(&["optimize", "--config", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    let report = json(&from_file);
    assert_eq!(report["function"], "booth");
    assert_eq!(report["seed"], 5);

    let overridden = asoc(&["optimize", "--config", path.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(json(&overridden)["seed"], 4);

    let typo = dir.path().join("typo.toml");
    std::fs::write(&typo, "functoin = \"booth\"\n").unwrap();
    let rejected = asoc(&["optimize", "--config", typo.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn env_seed_is_a_fallback_only() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_asoc"))
        .args(["optimize", "--function", "matyas", "--max-iters", "30"])
        .env("ASOC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(json(&with_env)["seed"], 9);

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_asoc"))
        .args(["optimize", "--function", "matyas", "--max-iters", "30", "--seed", "2"])
        .env("ASOC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(json(&flag_wins)["seed"], 2);

    let garbage = Command::new(env!("CARGO_BIN_EXE_asoc"))
        .args(["optimize", "--function", "matyas", "--max-iters", "30"])
        .env("ASOC_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(garbage.status.code(), Some(2));
}

#[test]
fn optimize_out_writes_the_trace_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let output = asoc(&[
        "optimize", "--function", "booth", "--seed", "1", "--max-iters", "40",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).is_empty());
    assert!(stderr(&output).contains("trace written"));

    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "iteration,best_f,pool_mean_f,evaluations,segment_index");
    assert_eq!(lines.len(), 41);
    assert!(!text.contains('\r'), "LF endings only");
}

#[test]
fn adapt_ignores_format_and_respects_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adapt.csv");
    let output = asoc(&[
        "adapt", "--iterations", "5", "--seed", "3", "--out", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 17 * 5);
}
