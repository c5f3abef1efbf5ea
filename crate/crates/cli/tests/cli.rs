use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gegenchain"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn table1_rows() {
    let v = json(&["table1", "--n", "9", "--a", "1"]);
    assert_eq!(v["command"], "table1");
    assert_eq!(v["index_base"], 0);
    let rows = v["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let row7 = &rows[6];
    assert_eq!(row7[0], 7);
    for (got, want) in
        row7.as_array().unwrap()[1..]
            .iter()
            .zip([0.7760367842, 1.284679682, 2.333798009])
    {
        assert!((num(got) - want).abs() < 1e-8);
    }
    assert_eq!(rows[0], serde_json::json!([1, "inf", null, null]));
    assert!(rows[3][3].is_null() && rows[4][3].is_null() && !rows[5][3].is_null());
}

#[test]
fn table1_small() {
    let v = json(&["table1", "--n", "1"]);
    assert_eq!(
        v["payload"]["rows"],
        serde_json::json!([[1, "inf", null, null]])
    );
    let v = json(&["table1", "--n", "3"]);
    let g: Vec<&Value> = v["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| &r[1])
        .collect();
    assert_eq!(g[0], "inf");
    assert!((num(g[1]) - 1.0).abs() < 1e-8 && (num(g[2]) - 0.8164965809).abs() < 1e-8);
}

#[test]
fn table1_is_deterministic_across_pool_sizes() {
    let one = run(&["table1", "--n", "7", "--jobs", "1"]).stdout;
    let four = run(&["table1", "--n", "7", "--jobs", "4"]).stdout;
    assert_eq!(one, four);
}

#[test]
fn table1_csv() {
    let out = run(&["table1", "--n", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,G,G_prime,G_double_prime");
    assert_eq!(lines[1], "1,inf,,");
    assert!(lines[4].starts_with("4,0.78358092"));
    assert_eq!(lines.len(), 5);
}

#[test]
fn fig1_curves() {
    let out = run(&["fig1", "--samples", "241", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 241);
    assert_eq!(rows[120], vec![0.0, 1.0, 2.0, 2.0]);
    for s in 0..241 {
        assert_eq!(rows[s][0], -rows[240 - s][0]);
        for k in 1..4 {
            assert!((rows[s][k] - rows[240 - s][k]).abs() < 1e-12);
        }
    }
    let cross = rows
        .windows(2)
        .find(|w| w[0][0] > 0.0 && w[0][1] > 0.0 && w[1][1] <= 0.0)
        .unwrap();
    assert!(cross[0][0] < 0.8165 && 0.8165 < cross[1][0]);
}

#[test]
fn fig1_needs_two_samples() {
    assert_eq!(run(&["fig1", "--samples", "1"]).status.code(), Some(2));
}

#[test]
#[allow(clippy::approx_constant)]
fn dump_objects() {
    let z = json(&["dump", "zeros", "--n", "3", "--a", "1"]);
    let e: Vec<f64> = z["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| num(&r[1]))
        .collect();
    for (x, y) in e.iter().zip([-0.70710678, 0.0, 0.70710678]) {
        assert!((x - y).abs() < 1e-8);
    }

    let t = json(&["dump", "theta0", "--n", "9"]);
    let rows = t["payload"]["rows"].as_array().unwrap();
    let t7 = rows.iter().find(|r| r[0] == 7 && r[1] == 7).unwrap();
    assert!((num(&t7[2]) - 0.0003968).abs() < 1e-7);
    assert_eq!(t["payload"]["dim"], 9);

    let l = json(&["dump", "plongrange", "--n", "4"]);
    let get = |i: u64, j: u64| {
        l["payload"]["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r[0] == i && r[1] == j)
            .map(|r| num(&r[2]))
    };
    assert_eq!(get(0, 3), Some(1.0));
    assert!((get(1, 2).unwrap() - 1.0).abs() < 1e-15);
    assert!((get(2, 3).unwrap() + 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(get(0, 0), None);

    let h = json(&["dump", "hamiltonian", "--n", "3"]);
    assert_eq!(
        h["payload"]["rows"],
        serde_json::json!([[0, 1, 0.5], [1, 0, 0.5], [1, 2, 0.25], [2, 1, 0.5]])
    );
    assert!(run(&["dump", "partner", "--n", "5"]).status.success());
    assert!(run(&["dump", "banded", "--n", "6", "--k", "4"])
        .status
        .success());
}

#[test]
fn dump_rejects_bad_input() {
    let unknown = run(&["dump", "nonsense"]);
    assert_eq!(unknown.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&unknown.stderr);
    assert!(msg.contains("theta0") && msg.contains("plongrange"));
    assert_eq!(
        run(&["dump", "plongrange", "--n", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["dump", "p2", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["dump", "banded", "--n", "5"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--a", "-2"]).status.code(), Some(2));
    assert_eq!(run(&["table1", "--tol", "0"]).status.code(), Some(2));
}

#[test]
fn dump_residual_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (object, n, a) in [
        ("theta0", "12", "1"),
        ("p1", "10", "2"),
        ("p2", "9", "0.5"),
        ("plongrange", "8", "5"),
    ] {
        let path = dir.path().join(format!("{object}.json"));
        let path = path.to_str().unwrap();
        assert!(run(&["dump", object, "--n", n, "--a", a, "--out", path])
            .status
            .success());
        let r = json(&["residual", path]);
        let row = &r["payload"]["rows"][0];
        assert_eq!(row[0], object);
        assert!(num(&row[3]) <= 1e-12, "{object}: {}", row[3]);
        assert_eq!(row[4], "false");
    }
}

#[test]
fn residual_rejects_non_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let path = path.to_str().unwrap();
    run(&["dump", "hamiltonian", "--n", "4", "--out", path]);
    assert_eq!(run(&["residual", path]).status.code(), Some(2));
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    assert_eq!(
        run(&["residual", junk.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn boundary_command() {
    let v = json(&["boundary", "--n", "4", "--max-negatives", "0"]);
    assert!((num(&v["payload"]["rows"][0][3]) - 0.7835809235).abs() < 1e-8);
    let v = json(&["boundary", "--n", "2", "--a", "3", "--tol", "1e-10"]);
    assert!((num(&v["payload"]["rows"][0][3]) - 8f64.sqrt() / 2.0).abs() < 1e-9);
    // Θ₁ of size 3 never gets a second negative eigenvalue.
    assert_eq!(
        run(&["boundary", "--n", "3", "--max-negatives", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["boundary", "--max-negatives", "3"]).status.code(),
        Some(2)
    );
}
