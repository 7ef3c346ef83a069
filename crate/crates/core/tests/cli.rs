//! End-to-end checks of the batch binary: exit-code discipline and the
//! pinned CSV schemas.

use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_wqed")
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn g2_config(out: &Path) -> String {
    format!(
        r#"
[run]
command = "g2"
output_dir = "{}"
formats = ["csv", "json", "svg"]

[params]
omega_q = 50.0
gamma = 1.0
lambda_rabi = 0.25

[pulse]
kind = "plane_wave"
omega0 = 50.0

[detectors]
x1 = 0.5
x2 = 1.0

[grid]
delta_t = {{ min = 0.0, max = 6.0, n = 25 }}
"#,
        out.display()
    )
}

#[test]
fn success_run_writes_pinned_headers_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(tmp.path(), "g2.toml", &g2_config(&out));
    let output = Command::new(bin()).args(["g2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");

    let csv = std::fs::read_to_string(out.join("g2_pp.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "delta_t_gamma,path1,path2,interference,full");
    assert_eq!(csv.lines().count(), 26);

    // Resonant forward-forward: full column equals 4 exp(-2 Gamma dT).
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let expect = 4.0 * (-2.0 * cols[0]).exp();
        assert!((cols[4] - expect).abs() < 1e-12);
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "g2");
    let names: Vec<&str> = manifest["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"g2_pp.csv"));
    assert!(names.contains(&"g2_pp.svg"));
    assert!(out.join("g2_pp.svg").exists());
}

#[test]
fn spectrum_run_emits_one_table_per_shift() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(
        tmp.path(),
        "spectrum.toml",
        &format!(
            r#"
[run]
command = "spectrum"
output_dir = "{}"
formats = ["csv", "svg"]

[params]
omega_q = 50.0
gamma = 1.0

[grid]
omega0_detuning = {{ min = -50.0, max = 50.0, n = 501 }}
rabi_shifts = [1.0, 2.0, 5.0]
"#,
            out.display()
        ),
    );
    let output = Command::new(bin()).args(["spectrum", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    for tag in ["1", "2", "5"] {
        let csv =
            std::fs::read_to_string(out.join(format!("spectrum_shift_{tag}.csv"))).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "omega0_detuning_gamma,g1_av_forward,g1_av_backward"
        );
        assert_eq!(csv.lines().count(), 502);
    }
    assert!(out.join("spectrum.svg").exists());
}

#[test]
fn g1_two_exc_header_is_pinned() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(
        tmp.path(),
        "g1.toml",
        &format!(
            r#"
[run]
command = "g1-two-exc"
output_dir = "{}"

[params]
omega_q = 50.0
gamma = 1.0
lambda_rabi = 1.0

[pulse]
kind = "plane_wave"
omega0 = 50.0

[detectors]
x1 = 1.0
x2 = 2.0

[grid]
tau = {{ min = 0.0, max = 6.0, n = 20 }}
"#,
            out.display()
        ),
    );
    let output = Command::new(bin()).args(["g1-two-exc", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let csv = std::fs::read_to_string(out.join("g1_two_excitation.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "tau_gamma,g1_total,atom_channel,photon_channel");
    // Channel sum reproduces the total on every row.
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((cols[1] - (cols[2] + cols[3])).abs() < 1e-10);
        assert!(cols[1] >= 0.0);
    }
}

#[test]
fn parse_errors_exit_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    // Malformed TOML.
    let cfg = write_config(tmp.path(), "bad.toml", "[run\ncommand = g2");
    let output = Command::new(bin()).args(["g2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(2));

    // Well-formed but empty grid.
    let out = tmp.path().join("out");
    let body = g2_config(&out).replace("n = 25", "n = 0");
    let cfg = write_config(tmp.path(), "empty_grid.toml", &body);
    let output = Command::new(bin()).args(["g2", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("empty grid"), "{stderr}");

    // Command mismatch between CLI and config.
    let cfg = write_config(tmp.path(), "mismatch.toml", &g2_config(&out));
    let output = Command::new(bin()).args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bad_worker_count_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let body = format!(
        r#"
[run]
command = "sweep"
output_dir = "{}"

[params]
omega_q = 50.0
gamma = 1.0

[detectors]
x1 = 0.5
x2 = 1.0

[grid]
delta_t = {{ min = 0.0, max = 1.0, n = 5 }}

[sweep]
geometries = ["pp"]
omega0_factors = [1.0]
"#,
        out.display()
    );
    let cfg = write_config(tmp.path(), "sweep.toml", &body);
    let output = Command::new(bin())
        .env("WQED_WORKERS", "not-a-number")
        .args(["sweep", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");

    // And a valid explicit worker count succeeds.
    let output = Command::new(bin())
        .env("WQED_WORKERS", "2")
        .args(["sweep", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn oracle_guard_violation_exits_with_code_4() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    // A coarse grid whose recurrence guard is shorter than the settling
    // time of the transmission run.
    let cfg = write_config(
        tmp.path(),
        "oracle.toml",
        &format!(
            r#"
[run]
command = "oracle-compare"
output_dir = "{}"

[params]
omega_q = 50.0
gamma = 1.0

[oracle]
quantity = "transmission"
n_modes = 100
margin = 20.0
sigma = 0.1
detunings = [0.0]
"#,
            out.display()
        ),
    );
    let output =
        Command::new(bin()).args(["oracle-compare", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(4), "{output:?}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("oracle_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["recurrence_guard_flag"], true);
}

#[test]
fn oracle_transmission_compare_is_tight() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(
        tmp.path(),
        "oracle.toml",
        &format!(
            r#"
[run]
command = "oracle-compare"
output_dir = "{}"

[units]
frequency = "gamma"

[params]
omega_q = 100.0
gamma = 1.0

[oracle]
quantity = "transmission"
n_modes = 2000
margin = 50.0
sigma = 0.1
detunings = [-2.0, -1.0, 0.0, 1.0, 2.0]
"#,
            out.display()
        ),
    );
    let output =
        Command::new(bin()).args(["oracle-compare", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("oracle_summary.json")).unwrap())
            .unwrap();
    let max_rel = summary["max_rel_deviation"].as_f64().unwrap();
    assert!(max_rel < 0.02, "max relative deviation {max_rel}");
    let csv = std::fs::read_to_string(out.join("oracle_compare_transmission.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "coordinate,second_coordinate,analytic,oracle,abs_deviation,rel_deviation"
    );
}

#[test]
fn oracle_g2_compare_stays_within_band() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cfg = write_config(
        tmp.path(),
        "oracle_g2.toml",
        &format!(
            r#"
[run]
command = "oracle-compare"
output_dir = "{}"

[params]
omega_q = 50.0
gamma = 1.0

[oracle]
quantity = "g2-pp"
n_modes = 200
margin = 20.0
sigma = 0.05
"#,
            out.display()
        ),
    );
    let output =
        Command::new(bin()).args(["oracle-compare", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("oracle_summary.json")).unwrap())
            .unwrap();
    let max_rel = summary["max_rel_deviation"].as_f64().unwrap();
    assert!(max_rel < 0.05, "max normalized deviation {max_rel}");
    assert!(summary["fitted_scale"].as_f64().unwrap() > 0.0);
}

#[test]
fn zero_coupling_control_run_matches_free_field() {
    // Free propagation: the full forward probability stays exactly 1.
    use wqed::model::{PulseSpectrum, SystemParams};
    use wqed::oracle::{build_grid, directional_probabilities, evolve_one_exc, EvolutionPlan, OneExcState};

    let p = SystemParams::reduced(0.02, 1.0).unwrap();
    let grid = build_grid(&p, 600, 30.0 * p.gamma).unwrap();
    let pulse = PulseSpectrum::gaussian(p.omega_q, p.gamma / 10.0).unwrap();
    let init = OneExcState::photon_from_pulse(&pulse, &grid);
    let plan = EvolutionPlan::new(&grid, vec![10.0 / p.gamma]).unwrap().without_coupling();
    let traj = evolve_one_exc(&init, &grid, &plan).unwrap();
    let (fwd, bwd) = directional_probabilities(traj.last());
    assert!((fwd - 1.0).abs() < 1e-8, "forward {fwd}");
    assert!(bwd < 1e-12);
}
