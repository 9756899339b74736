use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revhazard"))
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn sample_file(lines: &[String]) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for l in lines {
        writeln!(f, "{l}").unwrap();
    }
    f
}

#[test]
fn negative_eq_tol_is_rejected_by_name() {
    let o = run(&["verify", "--eq-tol", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--eq-tol"), "{}", stderr(&o));
}

#[test]
fn unknown_family_and_check_exit_one() {
    assert_eq!(run(&["verify", "--family", "nosuch:x=1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--theorem", "T9_9"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--theorem", "T2_10:k=2"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_defaults_to_json_over_the_full_matrix() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 220);
}

#[test]
fn verify_csv_selects_rows() {
    let o = run(&[
        "verify",
        "--family",
        "power:b=1,c=2",
        "--theorem",
        "T2_1",
        "--theorem",
        "T2_2",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("theorem,check,family,model,lhs,rhs,gap,ratio,verdict"));
    assert!(lines[1].contains("StrictInequality"));
    assert!(lines[2].contains("Equality"));
}

#[test]
fn verify_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["verify", "--theorem", "T2_1", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let rows: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 11);
}

#[test]
fn table_has_the_intensity_column_only_for_finite_support() {
    let o = run(&["table", "--family", "power:b=1,c=2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "t,F,f,phi,m,L");
    assert_eq!(text.lines().count(), 17);

    let o = run(&["table", "--family", "type3ev:gamma=1,b=0", "--grid", "8"]);
    for line in stdout(&o).lines().skip(1) {
        let l: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((l - 1.0).abs() <= 1e-12);
    }

    let o = run(&["table", "--family", "invweibull:nu=1,delta=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next().unwrap(), "t,F,f,phi,m");
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn table_rejects_a_coarse_grid() {
    let o = run(&["table", "--family", "power:b=1,c=2", "--grid", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--grid"));
}

#[test]
fn identify_rejects_short_and_malformed_samples() {
    let short = sample_file(&(1..=10).map(|i| i.to_string()).collect::<Vec<_>>());
    let o = run(&["identify", short.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let mut lines: Vec<String> = (1..=60).map(|i| i.to_string()).collect();
    lines[6] = "seven".to_string();
    let bad = sample_file(&lines);
    let o = run(&["identify", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 7"), "{}", stderr(&o));
}

#[test]
fn sample_then_identify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    let p = path.to_str().unwrap();
    let o = run(&["sample", "--family", "type3ev:gamma=1,b=0", "--n", "20000", "--seed", "3", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with('#'));
    assert_eq!(text.lines().count(), 20001);

    let o = run(&["identify", p]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["entries"][0]["label"], "type3ev");
}

#[test]
fn sampling_is_seed_deterministic() {
    let a = run(&["sample", "--family", "power:b=1,c=2", "--n", "100", "--seed", "9"]);
    let b = run(&["sample", "--family", "power:b=1,c=2", "--n", "100", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}
