mod common;

use common::{golden, recipe, shape, tricritical};
use tricritical_cli::config::{resolve, BoundaryConfig, EdRunConfig, ScalingConfig, SweepConfig};

fn stdout(args: &[&str]) -> String {
    let out = tricritical(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn smoke_sweep_has_three_rows_and_fixed_header() {
    let text = stdout(&[
        "sweep", "--x-min", "0", "--x-max", "0.6", "--x-count", "3", "--y-min", "1.5", "--y-max", "1.5", "--y-count",
        "1", "--lambda", "1",
    ]);
    let mut lines = text.lines();
    assert_eq!(format!("{}\n", lines.next().unwrap()), golden("sweep_header.csv"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[8], "superradiant");
        assert!(fields[9] == "true" || fields[9] == "false");
        for f in &fields[..8] {
            f.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn unrequested_quantities_are_empty() {
    let text = stdout(&[
        "sweep", "--x-min", "0.2", "--x-max", "0.2", "--x-count", "1", "--y-min", "0.5", "--y-max", "0.5", "--y-count",
        "1", "--quantities", "z,phase",
    ]);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "0.0000000000000000e0");
    assert_eq!(&row[4..8], &["", "", "", ""]);
    assert_eq!(row[8], "normal");
    assert_eq!(row[9], "");
}

#[test]
fn row_order_is_x_major_then_y_then_lambda() {
    let text = stdout(&[
        "sweep", "--x-min", "0", "--x-max", "0.2", "--x-count", "2", "--y-min", "0.5", "--y-max", "1.5", "--y-count",
        "2", "--lambda", "0.5,2", "--quantities", "z",
    ]);
    let keys: Vec<(f64, f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').take(3).map(|s| s.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 8);
}

#[test]
fn sweep_json_schema() {
    let doc = json(&[
        "sweep", "--format", "json", "--x-min", "0", "--x-max", "0", "--x-count", "1", "--y-min", "2", "--y-max", "2",
        "--y-count", "1",
    ]);
    assert_eq!(shape(&doc).to_string(), golden("sweep_shape.json").trim());
}

#[test]
fn boundary_schema_and_content() {
    let text = stdout(&["boundary", "--format", "csv", "--x-min", "0", "--x-max", "0.9", "--resolution", "19"]);
    assert!(text.starts_with(&golden("boundary_header.csv")));
    let doc = json(&["boundary", "--x-min", "0", "--x-max", "0.9", "--resolution", "19"]);
    assert_eq!(shape(&doc).to_string(), golden("boundary_shape.json").trim());
    let data = doc["data"].as_array().unwrap();
    let tri: Vec<_> = data.iter().filter(|r| r["order"] == "tricritical").collect();
    assert_eq!(tri.len(), 1);
    assert!((tri[0]["x"].as_f64().unwrap() - 0.2_f64.sqrt()).abs() < 1e-15);
    assert!((tri[0]["y"].as_f64().unwrap() - 1.25).abs() < 1e-15);
    let mut last_x = -1.0;
    for r in data {
        let (x, y, jump) = (r["x"].as_f64().unwrap(), r["y"].as_f64().unwrap(), r["z_jump"].as_f64().unwrap());
        assert!(x > last_x);
        last_x = x;
        match r["order"].as_str().unwrap() {
            "second_order" => {
                assert!((y - 1.0 / (1.0 - x * x)).abs() < 1e-8);
                assert_eq!(jump, 0.0);
            }
            "first_order" => assert!(jump > 0.0),
            _ => assert_eq!(jump, 0.0),
        }
    }
}

#[test]
fn scaling_report_schema() {
    let doc = json(&["scaling", "--target", "0.3", "--side", "superradiant", "--n-count", "9"]);
    assert_eq!(shape(&doc).to_string(), golden("scaling_shape.json").trim());
    let normal = json(&["scaling", "--target", "0.3", "--side", "normal", "--n-count", "9"]);
    assert!(normal["summary"]["order_parameter"].is_null());
}

#[test]
fn ed_report_schema_and_decoupled_energy() {
    let text = stdout(&["ed", "--x", "0", "--y", "0", "--lambda", "1", "--atoms", "4,8", "--format", "csv"]);
    assert!(text.starts_with(&golden("ed_header.csv")));
    let doc = json(&["ed", "--x", "0.3", "--y", "0", "--lambda", "0.7", "--omega0", "2.0", "--atoms", "4,8"]);
    assert_eq!(shape(&doc).to_string(), golden("ed_shape.json").trim());
    for row in doc["data"].as_array().unwrap() {
        let n = row["atoms"].as_f64().unwrap();
        assert!((row["ground_energy"].as_f64().unwrap() + n / 2.0).abs() < 1e-12);
    }
}

#[test]
fn raw_parameters_reduce_to_the_same_run() {
    // omega = 0.7, delta = 0.8, epsilon = 0.6 gives omega0 = 1, x = 0.6, lambda = 0.7.
    let g = (1.6_f64 * 0.7).sqrt().to_string();
    let raw = json(&["ed", "--omega", "0.7", "--delta", "0.8", "--g", &g, "--epsilon", "0.6", "--atoms", "4"]);
    let dimless = json(&["ed", "--x", "0.6", "--y", "1.6", "--lambda", "0.7", "--atoms", "4"]);
    let e_raw = raw["data"][0]["ground_energy"].as_f64().unwrap();
    let e_dim = dimless["data"][0]["ground_energy"].as_f64().unwrap();
    assert!((e_raw - e_dim).abs() < 1e-10);
}

#[test]
fn exit_codes_are_distinct() {
    let code = |args: &[&str]| tricritical(args).status.code().unwrap();
    assert_eq!(code(&["sweep", "--x-min", "0", "--x-max", "0.5", "--x-count", "2"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["scaling", "--target", "0.6"]), 3);
    assert_eq!(code(&["ed", "--x", "0", "--y", "2", "--lambda", "1", "--atoms", "8", "--max-dim", "100"]), 2);
    assert_eq!(code(&["boundary", "--output", "/nonexistent-dir/trace.json"]), 5);
    assert_eq!(code(&["sweep", "--config", "/nonexistent-dir/c.toml"]), 5);
}

#[test]
fn usage_errors_name_the_field() {
    let out = tricritical(&["sweep", "--x-min", "0", "--x-max", "0.5", "--x-count", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`y`"));
    let out = tricritical(&[
        "sweep", "--x-min", "0", "--x-max", "0.5", "--x-count", "2", "--y-min", "1", "--y-max", "2", "--y-count", "0",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("y.count"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "x_min = 0.0\nx_max = 0.9\nresolution = 40\n").unwrap();
    let doc = json(&["boundary", "--config", cfg.to_str().unwrap(), "--resolution", "3"]);
    assert_eq!(doc["manifest"]["config"]["resolution"], 3);
    assert_eq!(doc["data"].as_array().unwrap().len(), 4);
}

#[test]
fn recipes_are_valid_configurations() {
    use tricritical_cli::config::load_table;
    let sweeps = ["phase_diagram.toml", "entropy_gap_lambda_0p1.toml", "entropy_gap_lambda_1.toml", "entropy_gap_lambda_10.toml"];
    for name in sweeps {
        resolve::<SweepConfig>(load_table(&recipe(name)).unwrap()).unwrap().validate().unwrap();
    }
    resolve::<BoundaryConfig>(load_table(&recipe("boundary.toml")).unwrap()).unwrap().validate().unwrap();
    resolve::<ScalingConfig>(load_table(&recipe("scaling_qtp.toml")).unwrap()).unwrap().validate().unwrap();
    resolve::<EdRunConfig>(load_table(&recipe("ed_superradiant.toml")).unwrap()).unwrap().validate().unwrap();
}
