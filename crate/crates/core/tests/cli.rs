use std::process::Command;

fn liarsel(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_liarsel"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn run_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rows.csv");
    let args = [
        "run", "--algorithm", "simple", "--n", "60", "--k", "2", "--oracle", "random-liar", "--p", "0.3",
        "--trials", "5", "--seed", "11", "--out", out.to_str().unwrap(),
    ];
    let status = liarsel(&args);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(first.lines().count(), 6);
    assert!(first.starts_with("algorithm,n,k,oracle,seed,comparisons,restarts,bound,within_bound\n"));
    assert!(first.contains("random-liar(p=0.3)"));

    assert!(liarsel(&args).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn run_to_stdout_with_triggers() {
    let out = liarsel(&[
        "run", "--algorithm", "find-max", "--n", "20", "--k", "2", "--oracle", "triggered-liar", "--trigger",
        "1,3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("find-max,20,2,triggered-liar(1;3)"));
}

#[test]
fn verify_passes_small_instance() {
    let out = liarsel(&["verify", "--algorithm", "find-min", "--n", "3", "--k", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("pass"));
    let capped = liarsel(&["verify", "--algorithm", "find-min", "--n", "6", "--k", "1"]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn thickness_csv() {
    let out = liarsel(&["thickness", "--sorter", "mergesort", "--s", "16,32", "--trials", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("sorter,s,trials,min_thickness,mean_thickness,max_thickness,max_comparisons\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn flow_selftest_and_graph_dump() {
    let out = liarsel(&["flow-selftest", "--max-s", "4", "--max-k", "1", "--random", "50"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("pass"));

    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("h.txt");
    std::fs::write(&graph, "3\n1 3 1\n").unwrap();
    let out = liarsel(&["flow-selftest", "--graph", graph.to_str().unwrap(), "--k", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# completed, 2 edges added"), "{text}");
}

#[test]
fn config_file_overrides_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cal.conf");
    // a budget no sort of 6 elements fits: every group attempt fails
    std::fs::write(&config, "sort_budget_linear=0\nsort_budget_nlogn=0\n").unwrap();
    let out = liarsel(&[
        "run", "--algorithm", "improved", "--n", "30", "--k", "4", "--config", config.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("restarts"));
}
