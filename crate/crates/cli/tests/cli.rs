use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use solyanik::formats::read_sweep_csv;
use solyanik::verify::comparable_artifacts;
use solyanik_core::rational::ratio;
use solyanik_core::tauberian::exhaustive_sweep;
use solyanik_core::{BasisFamily, Window, DEFAULT_ENUMERATION_CAP};

fn solyanik(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solyanik"))
        .args(args)
        .current_dir(dir)
        .env_remove("SOLYANIK_THREADS")
        .output()
        .expect("binary runs")
}

fn subcommand(config: &solyanik::ExperimentConfig) -> &'static str {
    match config.experiment.name() {
        "maximal-field" => "maximal",
        "tauberian-sweep" => "tauberian",
        "ergodic-check" => "ergodic",
        "transference" => "transfer",
        _ => "fit",
    }
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const SWEEP: &str = r#"{
    "experiment": "tauberian-sweep",
    "params": {
        "family": {"kind": "box", "dim": 1, "truncation": 8},
        "window": {"lo": [-3], "hi": [3]},
        "alphas": ["1/2", "2/3", "3/4"],
        "mode": "exhaustive"
    },
    "out": "sweep_out"
}"#;

#[test]
fn sweep_writes_exhaustive_values() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "sweep.json", SWEEP);
    let out = solyanik(&["tauberian", "--config", "sweep.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep_out/sweep.csv")).unwrap();
    let rows = read_sweep_csv("sweep.csv", &csv).unwrap();
    let window = Window::new(vec![-3], vec![3]).unwrap();
    let family = BasisFamily::boxes(1, 8, DEFAULT_ENUMERATION_CAP).unwrap();
    let grid = [ratio(1, 2), ratio(2, 3), ratio(3, 4)];
    let expected = exhaustive_sweep(&window, &family, &grid, 20).unwrap();
    assert_eq!(rows.len(), 3);
    for (row, e) in rows.iter().zip(&expected) {
        assert_eq!((&row.0, &row.1), (&e.alpha, &e.value));
    }
    assert!(dir.path().join("sweep_out/manifest.json").exists());
}

#[test]
fn transference_reports_identity_pass() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "t.json",
        r#"{"experiment": "transference", "params": {"system": {"cyclic": [2, 3]},
            "family": {"kind": "box", "dim": 2, "truncation": 2}, "horizon": 2}}"#,
    );
    let out = solyanik(&["transfer", "--config", "t.json", "--out", "res"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("res/report.json")).unwrap()).unwrap();
    assert_eq!(report["identity"], "pass");
    assert_eq!(report["sets"], 64);
}

#[test]
fn malformed_config_exits_2_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "bad.json", r#"{"experiment": "tauberian-sweep", "params": {"#);
    let out = solyanik(&["tauberian", "--config", "bad.json", "--out", "res"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("res").exists());

    write_config(dir.path(), "alpha.json", &SWEEP.replace("\"3/4\"", "\"0.75\""));
    assert_eq!(solyanik(&["tauberian", "--config", "alpha.json", "--out", "res"], dir.path()).status.code(), Some(2));
    assert!(!dir.path().join("res").exists());
}

#[test]
fn subcommand_must_match_experiment() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "sweep.json", SWEEP);
    let out = solyanik(&["ergodic", "--config", "sweep.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(solyanik(&["maximal", "--config", "absent.json"], dir.path()).status.code(), Some(1));
}

#[test]
fn window_over_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "big.json",
        r#"{"experiment": "tauberian-sweep", "params": {"family": {"kind": "box", "dim": 2, "truncation": 2},
            "window": {"lo": [0, 0], "hi": [4, 4]}, "alphas": ["1/2"], "mode": "exhaustive"}}"#,
    );
    assert_eq!(solyanik(&["tauberian", "--config", "big.json", "--out", "o"], dir.path()).status.code(), Some(3));
}

#[test]
fn violated_bound_exits_4_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    // An ergodic value of at least 1 cannot sit below the bound 1/2.
    write_config(
        dir.path(),
        "e.json",
        r#"{"experiment": "ergodic-check", "params": {"system": {"cyclic": [5]},
            "family": {"kind": "centered-ball", "dim": 1, "truncation": 11},
            "alphas": ["1/2"], "discrete_bound": ["1/2"]}}"#,
    );
    let out = solyanik(&["ergodic", "--config", "e.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    assert!(dir.path().join("o/counterexample.json").exists());
    assert!(dir.path().join("o/manifest.json").exists());
}

#[test]
fn seed_flag_overrides_config_and_enables_search() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "s.json",
        r#"{"experiment": "tauberian-sweep", "params": {"family": {"kind": "box", "dim": 2, "truncation": 2},
            "window": {"lo": [-2, -2], "hi": [2, 2]}, "alphas": ["1/2"], "mode": "search", "budget": 500}}"#,
    );
    assert_eq!(solyanik(&["tauberian", "--config", "s.json", "--out", "a"], dir.path()).status.code(), Some(2));
    for out in ["b", "c"] {
        let run = solyanik(&["tauberian", "--config", "s.json", "--out", out, "--seed", "9"], dir.path());
        assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    }
    let b = comparable_artifacts(&dir.path().join("b")).unwrap();
    assert_eq!(b, comparable_artifacts(&dir.path().join("c")).unwrap());
    let d = solyanik(&["tauberian", "--config", "s.json", "--out", "d", "--seed", "10"], dir.path());
    assert_eq!(d.status.code(), Some(0));
    let manifest = |o: &str| -> serde_json::Value {
        serde_json::from_slice(&std::fs::read(dir.path().join(o).join("manifest.json")).unwrap()).unwrap()
    };
    assert_ne!(manifest("b")["config_digest"], manifest("d")["config_digest"]);
}

#[test]
fn verify_reports_json_and_rejects_unknown_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = solyanik(&["verify", "lift", "--out", "v"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["suite"], "lift");
    assert_eq!(reports[0]["pass"], true);
    assert!(dir.path().join("v/verify.json").exists());
    let unknown = solyanik(&["verify", "nothing"], dir.path());
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown suite"));
}

#[test]
fn thread_count_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "sweep.json", SWEEP);
    let out = Command::new(env!("CARGO_BIN_EXE_solyanik"))
        .args(["tauberian", "--config", "sweep.json", "--out", "o"])
        .current_dir(dir.path())
        .env("SOLYANIK_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_solyanik"))
        .args(["tauberian", "--config", "sweep.json", "--out", "o"])
        .current_dir(dir.path())
        .env("SOLYANIK_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn binary_artifacts_match_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in solyanik::verify::determinism_configs().into_iter().enumerate() {
        let name = format!("c{i}.json");
        write_config(dir.path(), &name, text);
        let sub = subcommand(&solyanik::ExperimentConfig::parse(text).unwrap());
        let mut runs = Vec::new();
        for threads in ["1", "8"] {
            let out = format!("o{i}-{threads}");
            let run = solyanik(&[sub, "--config", &name, "--out", &out, "--threads", threads], dir.path());
            assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
            runs.push(comparable_artifacts(&dir.path().join(out)).unwrap());
        }
        assert_eq!(runs[0], runs[1], "{name}");
    }
}

#[test]
fn shipped_configs_run() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(&configs).unwrap() {
        let path = entry.unwrap().path();
        let config = solyanik::ExperimentConfig::load(&path).unwrap();
        let sub = subcommand(&config);
        let out = dir.path().join(path.file_stem().unwrap());
        let run = solyanik(&[sub, "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()], dir.path());
        assert_eq!(run.status.code(), Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&run.stderr));
        assert!(out.join("manifest.json").exists());
        seen += 1;
    }
    assert!(seen >= 5);
}
