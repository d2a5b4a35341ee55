use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tempjump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempjump"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = tempjump(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let out = tempjump(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("tempjump-{}-{name}", std::process::id()))
}

#[test]
fn point_reproduces_diffuse_first_order_value() {
    let doc = json(&["point", "--q", "1", "--order", "1", "--format", "json"]);
    for key in ["config", "results", "diagnostics"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    let eps_t = doc["results"]["eps_t"].as_f64().unwrap();
    assert!((eps_t - 1.32156).abs() < 1e-3);
    assert_eq!(doc["results"]["coefficients"].as_array().unwrap().len(), 2);
}

#[test]
fn zero_gradient_gives_zero_jumps() {
    let doc = json(&["point", "--q", "1", "--g-t", "0"]);
    assert_eq!(doc["results"]["eps_n"].as_f64(), Some(0.0));
    assert_eq!(doc["results"]["eps_t"].as_f64(), Some(0.0));
}

#[test]
fn oracle_deviation_is_reported() {
    let doc = json(&["point", "--q", "0.5", "--order", "1", "--oracle"]);
    let oracle = &doc["results"]["oracle"];
    assert!(oracle["deviation"].as_f64().unwrap() < 5e-4);
    assert!(oracle["residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(oracle["comparison_order"].as_u64(), Some(3));
}

#[test]
fn default_table_matches_published_rows() {
    let expected = [
        (1.32156, -1.4),
        (1.58911, -1.2),
        (2.33522, -0.75),
        (2.88411, -0.58),
        (3.64401, -0.44),
        (6.64085, -0.16),
        (21.45400, -0.018),
    ];
    let (header, rows) = csv_rows(&["table", "--format", "csv"]);
    assert_eq!(
        header,
        ["q", "eps_t", "eps_n", "reference_eps_t", "error_percent"]
    );
    assert_eq!(rows.len(), expected.len());
    for (row, (value, error)) in rows.iter().zip(expected) {
        let eps_t: f64 = row[1].parse().unwrap();
        let pct: f64 = row[4].parse().unwrap();
        assert!((eps_t - value).abs() < 1e-3);
        assert!((pct - error).abs() < 0.1, "{row:?}");
    }
}

#[test]
fn table_subsets_and_unknown_q() {
    let (_, rows) = csv_rows(&["table", "--q-list", "1", "--format", "csv"]);
    assert_eq!(rows.len(), 1);
    let pct: f64 = rows[0][4].parse().unwrap();
    assert!((pct + 1.4).abs() < 0.1);

    let (_, rows) = csv_rows(&["table", "--q-list", "0.42", "--format", "csv"]);
    assert_eq!(rows[0][3], "");
    assert_eq!(rows[0][4], "");
    let doc = json(&["table", "--q-list", "0.42"]);
    assert!(doc["results"][0]["reference_eps_t"].is_null());
}

#[test]
fn profile_rows_and_decay() {
    let (_, rows) = csv_rows(&["profile", "--points", "2", "--format", "csv"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[1][0], "20");

    let doc = json(&["profile", "--q", "1", "--x-max", "20", "--points", "100"]);
    let results = doc["results"].as_array().unwrap();
    let near_two = results
        .iter()
        .min_by(|a, b| {
            let da = (a["x"].as_f64().unwrap() - 2.0).abs();
            let db = (b["x"].as_f64().unwrap() - 2.0).abs();
            da.total_cmp(&db)
        })
        .unwrap();
    let last = results.last().unwrap();
    for key in ["dn", "dt"] {
        assert!(last[key].as_f64().unwrap().abs() < near_two[key].as_f64().unwrap().abs());
    }
    let wall = &doc["diagnostics"]["boundary_distribution_mu0"];
    for key in ["dn", "dt"] {
        let d = results[0][key].as_f64().unwrap() - wall[key].as_f64().unwrap();
        assert!(d.abs() < 1e-6);
    }
}

#[test]
fn identical_runs_write_identical_files() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for path in [&a, &b] {
        let out = tempjump(&[
            "point",
            "--q",
            "0.7",
            "--order",
            "2",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let doc = json(&["table", "--q-list", "0.3,0.9"]);
    let (header, rows) = csv_rows(&["table", "--q-list", "0.3,0.9", "--format", "csv"]);
    for (i, row) in rows.iter().enumerate() {
        for (name, text) in header.iter().zip(row) {
            let from_json = doc["results"][i][name].as_f64().unwrap();
            assert_eq!(text.parse::<f64>().unwrap(), from_json, "{name}");
        }
    }
}

#[test]
fn config_file_with_flag_precedence() {
    let path = scratch("run.conf");
    std::fs::write(&path, "# run settings\nq = 0.5\norder = 2\nformat = csv\n").unwrap();
    let p = path.to_str().unwrap();
    let (header, rows) = csv_rows(&["point", "--config", p]);
    assert_eq!(rows[0][0], "0.5");
    assert!(header.contains(&"eps_t_2".to_string()));
    let doc = json(&["point", "--config", p, "--q", "0.9", "--format", "json"]);
    assert_eq!(doc["config"]["q"].as_f64(), Some(0.9));
    assert_eq!(doc["config"]["order"].as_u64(), Some(2));
    let _ = std::fs::remove_file(path);
}

#[test]
fn exit_codes() {
    let bad_q = tempjump(&["point", "--q", "1.5"]);
    assert_eq!(bad_q.status.code(), Some(2));
    assert!(!bad_q.stderr.is_empty());
    assert_eq!(
        tempjump(&["point", "--k-nodes", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(tempjump(&["point", "--order", "9"]).status.code(), Some(2));
    assert_eq!(
        tempjump(&["point", "--no-such-flag"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tempjump(&["profile", "--points", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(tempjump(&["table", "--q-list", "0"]).status.code(), Some(2));
    let missing = scratch("missing.conf");
    assert_eq!(
        tempjump(&["point", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tempjump(&["point", "--oracle", "--tol", "1e-30"])
            .status
            .code(),
        Some(3)
    );
    let unwritable = scratch("no-dir").join("out.json");
    assert_eq!(
        tempjump(&["point", "--out", unwritable.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
}
