use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slipflow")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Header and data rows of a CSV with '#' comment lines.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn compute_disk() {
    let (h, rows) = csv_rows(&stdout(&["compute", "--shape", "disk", "--radius", "1", "--beta", "0"]));
    let (q, v) = (column(&h, "quantity"), column(&h, "value"));
    let get = |name: &str| rows.iter().find(|r| r[q] == name).unwrap()[v].parse::<f64>().unwrap();
    assert!((get("q_steady") - 0.392699).abs() < 5e-7);
    assert!((get("lambda1") - 5.783186).abs() < 5e-7);
    let json: serde_json::Value = serde_json::from_str(&stdout(&["compute", "--shape", "disk", "--format", "json"])).unwrap();
    assert_eq!(json["columns"][0], "quantity");
}

#[test]
fn compute_other_shapes() {
    for args in [
        &["compute", "--shape", "rect", "--a", "1", "--b", "0.5", "--beta", "0.2"][..],
        &["compute", "--shape", "tri", "--area", "3.14159", "--beta", "1"],
        &["compute", "--shape", "ngon", "--n", "6", "--rings", "8"],
        &["compute", "--shape", "ellipse", "--a", "1.1", "--beta", "0.5", "--rings", "8"],
        &["compute", "--shape", "fourier", "--a0", "0", "--cos", "0,0.05", "--sin", "0,-0.02"],
    ] {
        let (h, rows) = csv_rows(&stdout(args));
        let v = column(&h, "value");
        assert!(rows.iter().any(|r| r[0] == "lambda1"), "{args:?}");
        assert!(rows.iter().all(|r| r[v].parse::<f64>().is_ok()), "{args:?}");
    }
}

#[test]
fn square_ratio_figure_stays_below_one() {
    let (h, rows) = csv_rows(&stdout(&["sweep", "--figure", "square-q-ratio"]));
    let r = column(&h, "ratio");
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|row| row[r].parse::<f64>().unwrap() < 1.0));
}

#[test]
fn verify_theorem3_json() {
    let out = run(&["verify", "--suite", "theorem3"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = json.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert!(r["min_margin"].as_f64().unwrap() >= 0.0);
        assert_eq!(r["pass"], true);
    }
    assert!(String::from_utf8_lossy(&out.stderr).lines().all(|l| l.starts_with("PASS")));
    let csv = stdout(&["verify", "--suite", "compmon", "--format", "csv"]);
    assert!(csv.starts_with("id,label,beta,param,margin,sense,holds"));
}

#[test]
fn tables() {
    let (h, rows) = csv_rows(&stdout(&["table", "--table", "rn-table"]));
    let w = column(&h, "rayleigh_weight");
    let weight = |n: &str| rows.iter().find(|r| r[0] == n).unwrap()[w].parse::<f64>().unwrap();
    assert_eq!(weight("1"), -1.0);
    assert!((1.0..5.0).contains(&weight("2")));
    let (h, rows) = csv_rows(&stdout(&["table", "--table", "polygon-deficits"]));
    let d = column(&h, "deficit_ratio");
    let square = rows.iter().find(|r| r[0] == "4").unwrap()[d].parse::<f64>().unwrap();
    assert!((square - 0.273239544).abs() < 1e-9);
}

#[test]
fn transient_and_periodic() {
    let (h, rows) = csv_rows(&stdout(&["transient", "--shape", "disk", "--beta", "0.1", "--t-grid", "0.01:2:20:log"]));
    let q = column(&h, "q_over_steady");
    let vals: Vec<f64> = rows.iter().map(|r| r[q].parse().unwrap()).collect();
    assert_eq!(vals.len(), 20);
    assert!(vals.windows(2).all(|w| w[1] > w[0]) && vals[19] < 1.0);
    let (h, rows) = csv_rows(&stdout(&["periodic", "--omega", "0.5,1,5", "--beta", "0.5"]));
    let (re, mre) = (column(&h, "re"), column(&h, "mode_sum_re"));
    for r in &rows {
        let (a, b): (f64, f64) = (r[re].parse().unwrap(), r[mre].parse().unwrap());
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn outputs_are_deterministic_and_written_to_files() {
    let dir = std::env::temp_dir().join(format!("slipflow-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.svg");
    let p = path.to_str().unwrap();
    let args = ["sweep", "--figure", "tri-q-ratio", "--format", "svg", "--out", p];
    assert!(run(&args).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
    assert!(first.starts_with(b"<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(stdout(&["sweep", "--figure", "rect-bounds"]), stdout(&["sweep", "--figure", "rect-bounds"]));
}

#[test]
fn custom_sweep() {
    let (h, rows) = csv_rows(&stdout(&["sweep", "--shape", "rect", "--param", "2", "--beta-grid", "0.01:100:5"]));
    assert_eq!(rows.len(), 5);
    let r = column(&h, "q_over_disk");
    assert!(rows.iter().all(|row| row[r].parse::<f64>().unwrap() < 1.0));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["compute", "--shape", "blob"]), Some(2));
    assert_eq!(code(&["compute", "--shape", "rect", "--beta", "nan"]), Some(2));
    assert_eq!(code(&["compute", "--shape", "disk", "--beta", "-1"]), Some(2));
    assert_eq!(code(&["transient", "--shape", "tri", "--a", "1", "--t-grid", "0:1:3"]), Some(2));
    assert_eq!(code(&["transient", "--shape", "disk", "--t-grid", "1:0:3"]), Some(2));
    assert_eq!(code(&["sweep", "--figure", "no-such-figure"]), Some(2));
    assert_eq!(code(&["verify", "--suite", "nope"]), Some(2));
    assert_eq!(code(&["compute", "--shape", "disk", "--out", "/nonexistent-dir/x.csv"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}
