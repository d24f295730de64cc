use std::process::{Command, Output};

use dengfan::reference::TABLE1;
use dengfan::BarrierParams;

fn dengfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dengfan")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a single-series CSV as numbers; empty fields become NaN.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[test]
fn table1_preset_reproduces_the_table() {
    let o = dengfan(&["scatter", "--table1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("E,E_over_Vmax,T,R,unitarity_residual"));
    let data = rows(&text);
    assert_eq!(data.len(), 20);
    for (row, want) in data.iter().zip(TABLE1) {
        assert!((row[0] - want.energy).abs() < 1e-12);
        assert!((row[2] - want.transmission).abs() < 1e-5, "{row:?}");
        assert!((row[3] - want.reflection).abs() < 1e-5, "{row:?}");
        assert!(row[4] <= 1e-9);
    }
}

#[test]
fn fig3_ends_near_full_transmission() {
    let o = dengfan(&["scatter", "--fig3"]);
    assert_eq!(o.status.code(), Some(0));
    let data = rows(&stdout(&o));
    assert_eq!(data.len(), 500);
    let last = data.last().unwrap();
    assert!((last[1] - 5.0).abs() < 1e-7);
    assert!(last[2] >= 0.99);
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["scatter", "--n", "0"][..],
        &["scatter", "--emin", "0.2", "--emax", "0.1"],
        &["scatter", "--mode", "sideways"],
        &["scatter", "--table1", "--fig3"],
        &["scatter", "--q", "1.5"],
        &["scatter", "--config", "/nonexistent/run.json"],
        &["frobnicate"],
    ] {
        let o = dengfan(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(dengfan(&["--help"]).status.code(), Some(0));
    assert_eq!(dengfan(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_passes_and_names_the_reproducing_mode() {
    let o = dengfan(&["verify", "--table1"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("table 1 reproduced by: corrected mode"), "{text}");
    assert!(text.contains("result: PASS"));
    let max_dt: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max |T - T_oracle|: "))
        .and_then(|l| l.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(max_dt <= 1e-6);
}

#[test]
fn verify_reports_coarse_oracle_step() {
    let o = dengfan(&["verify", "--oracle-step", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("offending energies:"));
    assert!(text.contains("reduce the step"), "{text}");
    assert!(text.contains("E = 5.00000000e-3"));
}

#[test]
fn verify_without_barrier_is_free_motion() {
    let o = dengfan(&["verify", "--v0", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&dengfan(&["scatter", "--v0", "0", "--oracle"]));
    for row in rows(&s) {
        assert!((row[2] - 1.0).abs() < 1e-12 && (row[5] - 1.0).abs() < 1e-9, "{row:?}");
    }
}

#[test]
fn paper_mode_failures_become_error_rows() {
    let o = dengfan(&["scatter", "--mode", "paper"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("E,E_over_Vmax,T,R,unitarity_residual,error"));
    assert_eq!(text.lines().count(), 21);
    assert!(text.lines().nth(1).unwrap().contains("singular"));
}

#[test]
fn oracle_columns() {
    let o = dengfan(&["scatter", "--oracle", "--emin", "0.05", "--emax", "0.1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().next(),
        Some("E,E_over_Vmax,T,R,unitarity_residual,T_oracle,R_oracle,delta_T")
    );
    for row in rows(&text) {
        assert!(row[7] <= 1e-6 && (row[2] - row[5]).abs() <= 1e-6);
    }
}

#[test]
fn output_is_identical_across_thread_counts() {
    let run = |threads: &str, extra: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_dengfan"))
            .args(["scatter", "--fig3"])
            .args(extra)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let one = run("1", &[]);
    assert_eq!(one, run("4", &[]));
    assert_eq!(one, run("3", &["--sequential"]));
    assert_eq!(one, run("2", &[]));
}

#[test]
fn json_output_round_trips_through_the_config_loader() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let json_arg = json.to_str().unwrap();
    let args = ["scatter", "--v0", "1.3", "--emin", "0.01", "--emax", "0.5", "--n", "7", "--spacing", "log"];
    let o = dengfan(&[&args[..], &["--format", "json", "--output", json_arg]].concat());
    assert_eq!(o.status.code(), Some(0));

    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["config"]["params"]["v0"], 1.3);
    assert_eq!(doc["series"][0]["rows"].as_array().unwrap().len(), 7);

    let direct = stdout(&dengfan(&args));
    let replay = dengfan(&["scatter", "--config", json_arg, "--format", "csv"]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(stdout(&replay), direct);
}

#[test]
fn flags_override_config_and_presets_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"params": {"v0": 1.3}, "n_points": 3}"#).unwrap();
    let c = cfg.to_str().unwrap();

    let base = rows(&stdout(&dengfan(&["scatter", "--config", c])));
    assert_eq!(base.len(), 3);
    let flag = rows(&stdout(&dengfan(&["scatter", "--config", c, "--v0", "1.25", "--n", "20"])));
    let preset = rows(&stdout(&dengfan(&["scatter", "--config", c, "--table1"])));
    assert_eq!(flag, preset);
    assert!((preset[0][2] - TABLE1[0].transmission).abs() < 1e-5);
}

#[test]
fn potential_curves() {
    // Peak heights grow with V0.
    let text = stdout(&dengfan(&["potential", "--v0", "1.15,1.25,1.35", "--n", "201"]));
    let peaks: Vec<f64> = text
        .split("# series: ")
        .skip(1)
        .map(|block| rows(block).iter().map(|r| r[1]).fold(f64::MIN, f64::max))
        .collect();
    assert_eq!(peaks.len(), 3);
    assert!(peaks.windows(2).all(|w| w[1] > w[0]), "{peaks:?}");

    // One file per q value; the origin maximum falls with q.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.csv");
    let o = dengfan(&["potential", "--q", "0.6,0.7,0.8", "--n", "201", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let at_origin = |q: &str| {
        let text = std::fs::read_to_string(dir.path().join(format!("v_q-{q}.csv"))).unwrap();
        let data = rows(&text);
        assert_eq!(data[100][0], 0.0);
        data[100][1]
    };
    assert!(at_origin("0.6") < at_origin("0.7") && at_origin("0.7") < at_origin("0.8"));
}

#[test]
fn potential_single_point_is_vmax() {
    let o = dengfan(&["potential", "--n", "1", "--xmin", "0", "--xmax", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let data = rows(&stdout(&o));
    assert_eq!(data.len(), 1);
    let vmax = BarrierParams::table1().v_max();
    assert!((data[0][1] - vmax).abs() < 1e-7 * vmax);
}

#[test]
fn default_potential_window_is_ten_ranges() {
    let data = rows(&stdout(&dengfan(&["potential", "--n", "5", "--a", "0.5"])));
    assert_eq!(data[0][0], -20.0);
    assert_eq!(data[4][0], 20.0);
}
