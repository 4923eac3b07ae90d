use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hystlab_cli::ExperimentSpec;
use proptest::prelude::*;

fn hystlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hystlab"))
        .args(args)
        .env("HYSTLAB_PRESETS", concat!(env!("CARGO_MANIFEST_DIR"), "/presets"))
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

const SPRING: &str = r#"
name = "zero"
system = "linear-spring"
sweep = [1.0]

[params]
c = 15.0
k = 1.0

[input]
amplitude = 0.0
shape = "sine"

[initial]
y = 0.0
ydot = 0.0
"#;

#[test]
fn simulate_writes_trajectory_and_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = hystlab(&["simulate", "linear-spring-w1", "--out", out, "--plot"]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(first_line(&dir.path().join("linear-spring-w1.csv")), "t,u,y");
    assert!(dir.path().join("linear-spring-w1.svg").is_file());
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("linear-spring-w1.run.json")).unwrap()).unwrap();
    assert_eq!(record["command"], "simulate");
    assert_eq!(record["spec"]["params"]["c"], 15.0);
    assert_eq!(record["runs"][0]["omega"], 1.0);
}

#[test]
fn simulate_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(code(&hystlab(&["simulate", "cubic-spring-w1", "--out", d.path().to_str().unwrap()])), 0);
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("cubic-spring-w1.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn zero_input_from_rest_stays_at_rest() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("zero.toml");
    fs::write(&spec, SPRING).unwrap();
    let res = hystlab(&["simulate", spec.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&res), 0);
    let text = fs::read_to_string(dir.path().join("zero.csv")).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[1], 0.0);
        assert_eq!(cols[2], 0.0);
    }
}

#[test]
fn sweep_prints_verdict_and_writes_loops() {
    let dir = tempfile::tempdir().unwrap();
    let res = hystlab(&["sweep", "cubic-spring", "--out", dir.path().to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(code(&res), 0);
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.lines().any(|l| l == "verdict: loop-persists"), "{stdout}");
    let loops = dir.path().join("cubic-spring.loops.csv");
    assert_eq!(first_line(&loops), "omega,area,normalized_area,width,height,closure_gap");
    assert_eq!(fs::read_to_string(loops).unwrap().lines().count(), 5);
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cubic-spring.sweep.run.json")).unwrap()).unwrap();
    assert_eq!(record["verdict"], "loop-persists");
    assert_eq!(record["runs"].as_array().unwrap().len(), 4);
}

#[test]
fn spectrum_matches_analytic_mode_one() {
    let dir = tempfile::tempdir().unwrap();
    let res = hystlab(&["spectrum", "ll-linear", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&res), 0);
    let text = fs::read_to_string(dir.path().join("ll-linear.spectrum.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "mode,re_analytic,im_analytic,re_numeric,im_numeric,abs_error");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 18);
    let pi2 = std::f64::consts::PI.powi(2);
    let upper = rows.iter().find(|r| r[0] == 1.0 && r[2] > 0.0).unwrap();
    assert!((upper[1] + 0.02 * pi2).abs() < 1e-12);
    assert!((upper[2] - pi2).abs() < 1e-12);
    assert!(upper[5] < 1e-2);
}

#[test]
fn spectrum_of_a_spring_is_a_spec_error() {
    assert_eq!(code(&hystlab(&["spectrum", "linear-spring"])), 2);
}

#[test]
fn spec_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&hystlab(&["simulate", "no-such-preset", "--out", out])), 2);
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, format!("{SPRING}\nstiffness = 3.0\n")).unwrap();
    assert_eq!(code(&hystlab(&["simulate", bad.to_str().unwrap(), "--out", out])), 2);
    // a sweep needs at least three frequencies
    assert_eq!(code(&hystlab(&["sweep", "linear-spring-w1", "--out", out])), 2);
    assert_eq!(code(&hystlab(&["simulate", "linear-spring", "--out", out])), 2);
    assert_eq!(code(&hystlab(&["simulate", "linear-spring-w1", "--out", out, "--dt", "-1"])), 2);
}

#[test]
fn unstable_step_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let res = hystlab(&["simulate", "ll-nonlinear-w1", "--out", dir.path().to_str().unwrap(), "--dt", "0.1"]);
    assert_eq!(code(&res), 3, "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn verify_passes_and_detects_perturbation() {
    let ok = hystlab(&["verify"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 6);
    assert_eq!(code(&hystlab(&["verify", "--perturb-nu", "0.01"])), 1);
}

#[test]
fn every_preset_loads_and_shows() {
    let res = hystlab(&["preset", "list"]);
    assert_eq!(code(&res), 0);
    let names: Vec<String> =
        String::from_utf8(res.stdout).unwrap().lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert!(names.len() >= 20);
    for name in &names {
        let shown = hystlab(&["preset", "show", name]);
        assert_eq!(code(&shown), 0);
        let spec = ExperimentSpec::from_toml(&String::from_utf8(shown.stdout).unwrap()).unwrap();
        assert_eq!(&spec.name, name);
        assert_eq!(spec.resolved(), spec);
    }
    assert_eq!(code(&hystlab(&["preset", "show", "nope"])), 2);
}

fn spring_spec() -> impl Strategy<Value = ExperimentSpec> {
    (
        prop::collection::vec(1e-4f64..10.0, 1..5),
        0.0f64..50.0,
        -5.0f64..5.0,
        0.0f64..3.0,
        -1.0f64..1.0,
        prop::option::of(1usize..6),
    )
        .prop_map(|(mut sweep, c, k, amp, y, discard)| {
            sweep.sort_by(|a, b| b.total_cmp(a));
            let mut spec = ExperimentSpec::from_toml(SPRING).unwrap();
            spec.sweep = sweep;
            spec.params.c = Some(c);
            spec.params.k = Some(k);
            spec.input.amplitude = amp;
            spec.initial.y = Some(y);
            spec.integrator.discard_periods = discard;
            spec
        })
}

proptest! {
    #[test]
    fn spec_round_trips_through_toml(spec in spring_spec()) {
        let back = ExperimentSpec::from_toml(&spec.to_toml()).unwrap();
        prop_assert_eq!(&back, &spec);
        let resolved = spec.resolved();
        prop_assert_eq!(ExperimentSpec::from_toml(&resolved.to_toml()).unwrap(), resolved);
    }
}
