use coverbench_cli::run_cli;

const TOWER_GOLDEN: &str = include_str!("golden/tower.txt");

fn script_path(name: &str) -> String {
    format!("{}/scripts/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> coverbench_cli::CliResult {
    run_cli(std::iter::once("coverbench").chain(args.iter().copied()))
}

#[test]
fn tower_script_matches_golden_and_is_deterministic() {
    let a = cli(&["--script", &script_path("tower.cbs")]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, TOWER_GOLDEN);
    let b = cli(&["--script", &script_path("tower.cbs")]);
    assert_eq!(a, b);
}

#[test]
fn structured_output_is_json() {
    let r = cli(&["--script", &script_path("tower.cbs"), "--format", "structured"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let sections = v["sections"].as_array().unwrap();
    assert_eq!(sections[1]["name"], "analyze G41");
    assert_eq!(sections[1]["entries"][0]["key"], "index");
    assert_eq!(sections[1]["entries"][0]["value"], 4);
}

#[test]
fn parse_errors_exit_2_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cbs");
    std::fs::write(&path, "group PT free x, h\nsub K = kernel nope\n").unwrap();
    let r = cli(&["--script", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("bad.cbs:2:16:"), "{}", r.stderr);
    assert!(r.stderr.contains("nope"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["--frobnicate"]).code, 2);
    assert_eq!(cli(&["--verify", "--search-bound", "0"]).code, 2);
    assert_eq!(cli(&["--seed", "3"]).code, 2);
    assert_eq!(cli(&["--script", "/nonexistent/x.cbs"]).code, 2);
    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("--search-bound"));
}

#[test]
fn runtime_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inf.cbs");
    std::fs::write(&path, "group PT free x, h\nsub L = < h >\nanalyze L\n").unwrap();
    let r = cli(&["--script", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("[analyze L]\nerror = "), "{}", r.stdout);
    assert!(r.stdout.contains("status = 1"));
}

#[test]
fn out_and_edges_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let edges = dir.path().join("edges.txt");
    let r = cli(&[
        "--script",
        &script_path("tower.cbs"),
        "--out",
        out.to_str().unwrap(),
        "--edges",
        edges.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), TOWER_GOLDEN);
    let e = std::fs::read_to_string(&edges).unwrap();
    assert!(e.starts_with("# fiber\npolygon 0 "));
    assert!(e.contains("# double\n"));
    assert!(e.lines().any(|l| l.ends_with(" free")));
}

#[test]
fn selftest_flag_with_seed() {
    let r = cli(&["--selftest", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.starts_with("[selftest]\nseed = 7\n"));
    assert!(r.stdout.contains("fold confluence = \"ok\""));
}
