//! End-to-end checks of the command-line interface: schemas, exit codes,
//! determinism, and the JSON/CSV round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn chandet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chandet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("chandet-cli-test-{name}.json"));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn exponents_row_count_and_schema() {
    let cfg = write_config("rows", r#"{"bsc": {"w": 0.1, "v": 0.4}, "rate": 0.0}"#);
    let out = chandet(&[
        "exponents",
        "--config",
        cfg.to_str().unwrap(),
        "--methods",
        "te_rc,te_ex,lowrate_rc,highrate_rc,gf_rc,gf_ex",
        "--alpha=-0.1:0.1:0.05",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "method,R,alpha,value,branch,witness_q_tilde,witness_q_bar,grid_resolution"
    );
    // 6 methods x 5 alphas
    assert_eq!(lines.len(), 1 + 6 * 5);
}

#[test]
fn missing_channel_spec_is_a_config_error() {
    let cfg = write_config("missing", r#"{"Px": [0.5, 0.5]}"#);
    let out = chandet(&["exponents", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("missing channel spec"), "{err}");
}

#[test]
fn non_stochastic_channel_is_rejected() {
    let cfg = write_config(
        "badrow",
        r#"{"W": [[0.9, 0.2], [0.1, 0.9]], "V": [[0.6, 0.4], [0.4, 0.6]]}"#,
    );
    let out = chandet(&["verify", "--quick", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let cfg = write_config(
        "det",
        r#"{"bsc": {"w": 0.1, "v": 0.4},
            "ensemble": {"kind": "fixed_composition", "n": 8},
            "detector": {"rule": "asymptotic"}, "rate": 0.15}"#,
    );
    let args = [
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.0",
        "--trials",
        "20000",
        "--seed",
        "99",
    ];
    let a = chandet(&args);
    let b = chandet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // and a different seed changes the tallies
    let c = chandet(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--alpha",
        "0.0",
        "--trials",
        "20000",
        "--seed",
        "100",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn simulate_exact_matches_monte_carlo() {
    let cfg = write_config(
        "exact",
        r#"{"bsc": {"w": 0.1, "v": 0.4},
            "ensemble": {"kind": "fixed_composition", "n": 4, "mode": "exact",
                         "fresh_code": false},
            "detector": {"rule": "asymptotic"}, "rate": 0.2, "seed": 5}"#,
    );
    let exact = chandet(&["simulate", "--config", cfg.to_str().unwrap(), "--alpha", "0.0"]);
    assert!(exact.status.success());
    let cfg_mc = write_config(
        "exact-mc",
        r#"{"bsc": {"w": 0.1, "v": 0.4},
            "ensemble": {"kind": "fixed_composition", "n": 4,
                         "fresh_code": false},
            "detector": {"rule": "asymptotic"}, "rate": 0.2, "seed": 5}"#,
    );
    let mc = chandet(&[
        "simulate",
        "--config",
        cfg_mc.to_str().unwrap(),
        "--alpha",
        "0.0",
        "--trials",
        "100000",
    ]);
    assert!(mc.status.success());
    let parse = |out: &Output| -> Vec<f64> {
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        let row = text.lines().nth(1).unwrap();
        row.split(',').skip(3).take(6).map(|v| v.parse().unwrap()).collect()
    };
    let e = parse(&exact);
    let m = parse(&mc);
    for i in 0..3 {
        let sigma = m[i + 3].max(1e-6);
        assert!(
            (e[i] - m[i]).abs() <= 4.0 * sigma,
            "column {i}: exact {} vs mc {} (sigma {sigma})",
            e[i],
            m[i]
        );
    }
}

#[test]
fn json_round_trips_to_identical_csv() {
    let cfg = write_config("json", r#"{"bsc": {"w": 0.1, "v": 0.4}, "rate": 0.0}"#);
    let base = [
        "tradeoff",
        "--config",
        cfg.to_str().unwrap(),
        "--methods",
        "te_rc,gf_rc",
        "--alpha=-0.05:0.05:0.05",
    ];
    let csv = chandet(&[&base[..], &["--format", "csv"]].concat());
    let json = chandet(&[&base[..], &["--format", "json"]].concat());
    assert!(csv.status.success() && json.status.success());
    let csv_text = String::from_utf8(csv.stdout).unwrap();
    let rows: Vec<serde_json::Map<String, serde_json::Value>> =
        serde_json::from_slice(&json.stdout).unwrap();
    let header: Vec<&str> = csv_text.lines().next().unwrap().split(',').collect();
    let mut rebuilt = header.join(",");
    rebuilt.push('\n');
    for row in &rows {
        let cells: Vec<String> = header
            .iter()
            .map(|k| row.get(*k).and_then(|v| v.as_str()).unwrap().to_string())
            .collect();
        rebuilt.push_str(&cells.join(","));
        rebuilt.push('\n');
    }
    assert_eq!(csv_text, rebuilt);
}

#[test]
fn verify_quick_passes_and_tight_tolerance_fails() {
    let ok = chandet(&["verify", "--quick"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 6);
    // an absurdly tight tolerance reports measured slack and fails
    let tight = chandet(&["verify", "--quick", "--tolerance", "1e-9"]);
    assert_eq!(tight.status.code(), Some(1));
    let text = String::from_utf8(tight.stdout).unwrap();
    assert!(text.contains("FAIL"));
}

#[test]
fn figure_presets_emit_curves() {
    let out = chandet(&["tradeoff", "--preset", "figure-1", "--methods", "te_rc"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "method,R,alpha,e_fa,e_md");
    assert_eq!(text.lines().count(), 1 + 11);
    // rate resolves to zero for figure-1
    assert!(text.lines().nth(1).unwrap().starts_with("te_rc,0,"));
}

#[test]
fn known_instance_values_survive_the_pipeline() {
    // zero-rate exponents of the worked pair, through config parsing,
    // dispatch, and nine-significant-digit emission
    let cfg = write_config("known", r#"{"bsc": {"w": 0.1, "v": 0.4}, "rate": 0.0}"#);
    let out = chandet(&[
        "exponents",
        "--config",
        cfg.to_str().unwrap(),
        "--methods",
        "te_rc,gf_rc",
        "--alpha",
        "0.0",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value = |line: usize| -> f64 {
        text.lines().nth(line).unwrap().split(',').nth(3).unwrap().parse().unwrap()
    };
    let te = value(1);
    let gf = value(2);
    assert!((te - 0.0678208).abs() < 5e-4, "te_rc {te}");
    assert!((te - gf).abs() < 2e-3, "te {te} vs gf {gf}");
    // the A-branch witness is the likelihood crossover
    let wit: f64 = text.lines().nth(1).unwrap().split(',').nth(5).unwrap().parse().unwrap();
    assert!((wit - 0.2262946).abs() < 2e-3, "witness {wit}");
}

#[test]
fn universal_method_requires_sets() {
    let cfg = write_config("uni-missing", r#"{"bsc": {"w": 0.1, "v": 0.4}}"#);
    let out = chandet(&[
        "exponents",
        "--config",
        cfg.to_str().unwrap(),
        "--methods",
        "universal_rc",
        "--alpha",
        "0.0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = write_config(
        "uni",
        r#"{"bsc": {"w": 0.1, "v": 0.4},
            "w_set": {"bsc_interval": {"lo": 0.05, "hi": 0.15}},
            "v_set": {"bsc_interval": {"lo": 0.35, "hi": 0.45}}}"#,
    );
    let out = chandet(&[
        "exponents",
        "--config",
        cfg.to_str().unwrap(),
        "--methods",
        "universal_rc,te_rc",
        "--alpha",
        "0.0",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let uni: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    assert!(uni.is_finite() && uni > 0.0);
}
