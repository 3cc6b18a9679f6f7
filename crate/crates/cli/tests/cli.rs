use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wrsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrsp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Runs `args` twice with `--out` and returns the file contents.
fn twice(dir: &Path, name: &str, args: &[&str]) -> String {
    let mut texts = Vec::new();
    for run in 0..2 {
        let path = dir.join(format!("{name}-{run}"));
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        full.extend(["--out", &p]);
        let o = wrsp(&full);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        texts.push(fs::read_to_string(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1], "{args:?} is not deterministic");
    texts.pop().unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    twice(d, "verify", &["verify", "--k", "2", "--all"]);
    twice(d, "verify-csv", &["verify", "--k", "1", "--all", "--format", "csv"]);
    for kind in ["gamma", "lowerp", "frattini", "dimension", "power", "m"] {
        twice(d, kind, &["series", "--k", "2", "--kind", kind]);
        twice(d, kind, &["series", "--k", "2", "--kind", kind, "--format", "csv"]);
    }
    twice(d, "power3", &["series", "--k", "3", "--kind", "power", "--format", "csv"]);
    twice(d, "density", &["density", "--k", "3", "--kind", "m", "--target", "Z"]);
    twice(d, "density-csv", &["density", "--k", "2", "--kind", "gamma", "--target", "H", "--format", "csv"]);
    twice(d, "pres", &["export-presentation", "--k", "2"]);
    twice(d, "oracle", &["oracle", "--k", "1"]);
}

#[test]
fn verify_level_one_all_passes_with_order() {
    let o = wrsp(&["verify", "--k", "1", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let results = v["results"].as_array().unwrap();
    let ids: Vec<&str> = results.iter().map(|r| r["claim_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let order = results.iter().find(|r| r["claim_id"] == "prop-order").unwrap();
    assert_eq!(order["status"], "pass");
    assert!(order["details"].to_string().contains('6'));
}

#[test]
fn verify_prefix_and_sandwich() {
    let o = wrsp(&["verify", "--k", "2", "--claims", "lemma-exp2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = wrsp(&["verify", "--k", "3", "--claims", "power-series", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("power-series,3,sandwich-only"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--k", "2", "--claims", "no-such-claim"][..],
        &["verify", "--k", "3", "--claims", "oracle"],
        &["verify", "--k", "4", "--all"],
        &["verify", "--k", "7", "--all"],
        &["verify", "--k", "2"],
        &["series", "--k", "2", "--kind", "upper"],
        &["density", "--k", "3", "--kind", "power"],
        &["oracle", "--k", "3"],
    ] {
        assert_eq!(wrsp(args).status.code(), Some(2), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_wrsp"))
        .args(["verify", "--k", "1", "--claims", "prop-order"])
        .env("WRSP_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worker_count_does_not_change_output() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_wrsp"))
            .args(["verify", "--k", "2", "--all"])
            .env("WRSP_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn series_lengths() {
    let csv = stdout(&wrsp(&["series", "--k", "2", "--kind", "gamma", "--format", "csv"]));
    // header, gamma_1..gamma_7, trivial gamma_8
    assert_eq!(csv.lines().count(), 9);
    let csv = stdout(&wrsp(&["series", "--k", "1", "--kind", "dimension", "--format", "csv"]));
    assert_eq!(csv.lines().skip(1).filter(|l| l.split(',').nth(3) != Some("0")).count(), 4);
    let json = stdout(&wrsp(&["series", "--k", "3", "--kind", "lowerp"]));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.iter().filter(|r| r["log_order"] != 0).count(), 15);
}

#[test]
fn density_examples() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&wrsp(&["density", "--k", "3", "--kind", "m", "--target", "Z"]))).unwrap();
    assert_eq!(v["top_ratio"], "36/47");
    let csv = stdout(&wrsp(&["density", "--k", "1", "--kind", "m", "--target", "Z", "--format", "csv"]));
    assert!(csv.ends_with("m,1,1,3,6,3/6,0.500000\n"));
    let csv = stdout(&wrsp(&["density", "--k", "2", "--kind", "gamma", "--target", "trivial", "--format", "csv"]));
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(3) == Some("0")));
}

#[test]
fn seed_file_targets() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    fs::write(&good, "# one commutator coordinate\nc0_1\n").unwrap();
    let o = wrsp(&["density", "--k", "2", "--kind", "m", "--seed-file", good.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["target_log_order"], 4);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "s0\n\nx^1 y:0 s:0 c:00\n").unwrap();
    let o = wrsp(&["density", "--k", "2", "--kind", "m", "--seed-file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn exported_presentation_sizes() {
    let text = stdout(&wrsp(&["export-presentation", "--k", "1"]));
    let gens = text.lines().find_map(|l| l.strip_prefix("generators ")).unwrap();
    assert_eq!(gens.split_whitespace().count(), 6);
    let text = stdout(&wrsp(&["export-presentation", "--k", "2"]));
    let gens = text.lines().find_map(|l| l.strip_prefix("generators ")).unwrap();
    assert_eq!(gens.split_whitespace().count(), 1 + 4 + 4 + 6);
    assert!(text.contains("log2 order 16"));
}

#[test]
fn oracle_report() {
    let o = wrsp(&["oracle"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cosets"], 64);
    assert_eq!(v["mismatches"], 0);
    let max_order = v["order_census"].as_array().unwrap().iter().map(|p| p[0].as_u64().unwrap()).max();
    assert_eq!(max_order, Some(8));
}
