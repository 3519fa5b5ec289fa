use std::path::Path;
use std::process::{Command, Output};

fn rbl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbl"))
        .current_dir(dir)
        .env("RBL_JOBS", "2")
        .args(args)
        .output()
        .expect("run rbl")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

#[test]
fn generate_run_and_check() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    assert_eq!(code(&rbl(p, &["gen", "--n", "500", "--red-prob", "0.5", "--seed", "7", "--out", "g.rbc"])), 0);
    let text = std::fs::read_to_string(p.join("g.rbc")).unwrap();
    assert!(text.starts_with("RBC1 500\n"));
    assert_eq!(text.lines().count(), 500);
    let run = [
        "run-book", "--in", "g.rbc", "--k", "12", "--ell", "12", "--mu", "0.4", "--epsilon", "0.3", "--x-min", "20",
        "--w-min", "10", "--out", "trace.json",
    ];
    assert_eq!(code(&rbl(p, &run)), 0);
    let o = rbl(p, &["check-trace", "--colouring", "g.rbc", "--trace", "trace.json", "--out", "report.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(p.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["checks"]["1"]["status"], "pass");
    // no temporary files left behind
    let names: Vec<_> = std::fs::read_dir(p).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 3);
}

#[test]
fn tampered_trace_exits_with_check_failure() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    rbl(p, &["gen", "--n", "300", "--red-prob", "7/10", "--seed", "1", "--out", "g.rbc"]);
    let run = [
        "run-book", "--in", "g.rbc", "--k", "12", "--ell", "12", "--mu", "2/5", "--epsilon", "0.01", "--x-min", "10",
        "--w-min", "1000", "--out", "t.json",
    ];
    assert_eq!(code(&rbl(p, &run)), 0);
    let mut t: serde_json::Value = serde_json::from_slice(&std::fs::read(p.join("t.json")).unwrap()).unwrap();
    let x = t["steps"][0]["x_size"].as_u64().unwrap();
    t["steps"][0]["x_size"] = (x + 1).into();
    std::fs::write(p.join("bad.json"), serde_json::to_vec(&t).unwrap()).unwrap();
    assert_eq!(code(&rbl(p, &["check-trace", "--colouring", "g.rbc", "--trace", "bad.json"])), 2);
    // a trace checked against another colouring
    rbl(p, &["gen", "--n", "300", "--red-prob", "7/10", "--seed", "2", "--out", "h.rbc"]);
    assert_eq!(code(&rbl(p, &["check-trace", "--colouring", "h.rbc", "--trace", "t.json"])), 2);
}

#[test]
fn usage_and_io_errors_exit_with_one() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    for args in [
        vec!["bogus"],
        vec!["gen", "--n", "5"],
        vec!["gen", "--n", "5", "--red-prob", "half", "--out", "x"],
        vec!["gen", "--n", "5", "--red-prob", "0.5", "--out", "x", "--colour", "red"],
        vec!["clique", "--in", "missing.rbc", "--colour", "red"],
        vec!["verify-bounds", "--appendix", "Q"],
        vec!["tables", "--k-range", "9:3"],
        vec!["tables", "--k-range", "3:9", "--ell-rule", "half"],
    ] {
        let o = rbl(p, &args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(code(&rbl(p, &["--help"])), 0);
}

#[test]
fn bound_outputs() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let o = rbl(p, &["verify-bounds", "--appendix", "A", "--tol", "1e-3"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("claim_id,region,certified_max_or_gap,claimed_constant,maximizer_x,maximizer_y,status"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.contains(",pass,")));

    let o = rbl(p, &["tables", "--k-range", "4:6", "--ell-rule", "equal", "--out", "t.csv"]);
    assert_eq!(code(&o), 0);
    let t = std::fs::read_to_string(p.join("t.csv")).unwrap();
    assert!(t.lines().next().unwrap().starts_with("k,ell,es_bound,theorem,improved_bound_ln"));
    assert!(t.contains("4,4,70,diagonal,"));
    assert!(t.contains("6,6,924,explicit,"));
}

#[test]
fn clique_search_on_a_file() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    // all-red K_4
    std::fs::write(p.join("r.rbc"), "RBC1 4\n1\n11\n111\n").unwrap();
    let o = rbl(p, &["clique", "--in", "r.rbc", "--colour", "red"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "red clique of size 4: 0 1 2 3");
    let o = rbl(p, &["clique", "--in", "r.rbc", "--colour", "blue"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "blue clique of size 1: 0");
}
