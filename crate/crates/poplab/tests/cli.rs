use std::fs;
use std::process::Command;

use poplab::cli::{run_from, EXIT_CEILING, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_from(std::iter::once("poplab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_sussman() {
    let (code, out, _) = run(&["solve", "fixture:sussman", "--planner", "ua"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("solved (depth limit 3"), "{out}");
    assert!(out.contains("steps: "));
    let (code, out, _) = run(&["solve", "fixture:sussman", "--planner", "to", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["solved"], true);
    assert_eq!(v["operator_sequence"].as_array().unwrap().len(), 5);
}

#[test]
fn unsolved_and_ceiling_exit_codes() {
    let (code, _, _) = run(&["solve", "fixture:sussman", "--depth-limit", "2"]);
    assert_eq!(code, EXIT_FAILED);
    let (code, _, err) = run(&["solve", "fixture:unsolvable"]);
    assert_eq!(code, EXIT_FAILED, "{err}");
    let (code, _, err) = run(&["--node-ceiling", "3", "solve", "fixture:sussman"]);
    assert_eq!(code, EXIT_CEILING);
    assert!(err.contains("node ceiling of 3"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["solve"]).0, EXIT_USAGE);
    assert_eq!(run(&["solve", "fixture:sussman", "--planner", "nope"]).0, EXIT_USAGE);
    let (code, _, err) = run(&["solve", "/no/such/file.problem"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cannot read"), "{err}");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.problem");
    fs::write(&bad, "problem x\ninit: a\ngoal: b\noperator o\n  pre: a\n  add: b\n  del: c\nend\n").unwrap();
    let (code, _, err) = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 4") && err.contains("precondition"), "{err}");
    assert_eq!(run(&["solve", "fixture:sussman", "--depth-limit", "x"]).0, EXIT_USAGE);
}

#[test]
fn verify_reports_checks() {
    let (code, out, _) = run(&["verify", "fixture:interaction"]);
    assert_eq!(code, EXIT_OK, "{out}");
    for check in ["totality", "disjointness", "partition", "mapping lemma"] {
        assert!(out.lines().any(|l| l.starts_with(check) && l.contains(" ok ")), "{check}: {out}");
    }
    let (code, out, _) = run(&["verify", "bw:3:5", "--planner", "uac"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(run(&["verify", "fixture:sussman", "--planner", "to"]).0, EXIT_USAGE);
}

#[test]
fn verify_mt_reports_overlap_as_a_finding() {
    let (code, out, _) = run(&["verify", "fixture:overlap", "--mt", "--depth-limit", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let line = out.lines().find(|l| l.starts_with("disjointness")).unwrap();
    let n: usize = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(n >= 1, "{out}");
}

#[test]
fn gen_writes_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["gen", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("wrote 44 problems"));
    let mut classes: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    classes.sort();
    assert_eq!(classes, ["len3", "len4", "len5", "len6"]);
    for c in &classes {
        assert_eq!(fs::read_dir(dir.path().join(c)).unwrap().count(), 11);
    }
    let one = dir.path().join("len3/len3_bw4_2.problem");
    let (code, out, _) = run(&["solve", one.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("len3_bw4_2: solved (depth limit 3"), "{out}");
}

#[test]
fn experiment_from_config_and_directory() {
    let dir = tempfile::tempdir().unwrap();
    run(&["gen", dir.path().join("suite").to_str().unwrap()]);
    let cfg = dir.path().join("exp.cfg");
    let csv = dir.path().join("out/rows.csv");
    fs::write(
        &cfg,
        format!(
            "problems = {}\nplanners = to,ua\nstrategies = dfs\nheuristics = none,min-goals-rank\ntrials = 2\noutput = {}\n",
            dir.path().join("suite/len3").display(),
            csv.display()
        ),
    )
    .unwrap();
    let summary = dir.path().join("summary.csv");
    let (code, out, err) = run(&["experiment", cfg.to_str().unwrap(), "--summary", summary.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("mean_nodes"));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem_id,length_class,planner,strategy,heuristic,seed,trial,solved,depth_limit,nodes_expanded,\
         leaves_visited,solution_length,iterations,error,wall_ms"
    );
    assert_eq!(lines.count(), 11 * 2 * 2 * 2);
    assert!(fs::read_to_string(&summary).unwrap().lines().count() > 1);

    let glob = format!("{}/len4/*_1*.problem", dir.path().join("suite").display());
    fs::write(&cfg, format!("problems = {glob}\ntrials = 1\nformat = json\n")).unwrap();
    let (code, out, _) = run(&["experiment", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    // len4 seeds starting with 1: 10, 12, 13, 15, 19
    assert_eq!(rows.as_array().unwrap().len(), 5 * 2);
    assert!(rows.as_array().unwrap().iter().all(|r| r["length_class"] == "4"));
}

#[test]
fn dump_tree_json() {
    let (code, out, _) = run(&["dump-tree", "fixture:insertion_gaps", "--planner", "ua", "--with-map"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tree"].as_array().unwrap().len(), 4);
    assert_eq!(v["to_tree"].as_array().unwrap().len(), 10);
    assert_eq!(v["map"].as_array().unwrap().len(), 4);
    let (code, out, _) = run(&["dump-tree", "fixture:sussman", "--planner", "to", "--depth-limit", "1"]);
    assert_eq!(code, EXIT_OK);
    let nodes: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(nodes[0]["operator_sequence"], serde_json::json!(["*initial*", "*final*"]));
}

#[test]
fn fixture_listing_and_text() {
    let (code, out, _) = run(&["fixture"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "overlap"));
    let (code, out, _) = run(&["fixture", "sussman"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("problem sussman\n"));
    assert_eq!(run(&["fixture", "nope"]).0, EXIT_USAGE);
}

#[test]
fn binary_honours_ceiling_env_var() {
    let status = Command::new(env!("CARGO_BIN_EXE_poplab"))
        .args(["solve", "fixture:sussman"])
        .env("POPLAB_NODE_CEILING", "2")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_CEILING));
    let ok = Command::new(env!("CARGO_BIN_EXE_poplab")).args(["solve", "fixture:sussman"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let help = Command::new(env!("CARGO_BIN_EXE_poplab")).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&help.stdout).contains("dump-tree"));
}
