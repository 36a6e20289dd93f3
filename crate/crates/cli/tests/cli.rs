//! End-to-end tests of the `selfsim` binary: exit codes, artifact layout,
//! stdout contract, config-file validation, and bit-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

use selfsim::Params;

fn selfsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_selfsim"))
}

fn run(args: &[&str], out_dir: &Path) -> Output {
    selfsim()
        .arg("--out-dir")
        .arg(out_dir)
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output
        .status
        .code()
        .expect("process should exit, not be killed")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name))
        .unwrap_or_else(|e| panic!("expected artifact {name}: {e}"))
}

fn manifest(dir: &Path, stem: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, &format!("{stem}_manifest.json")))
        .expect("manifest should be valid JSON")
}

/// Parses the data rows of a trajectory CSV into (r, value, slope) triples.
fn trajectory_rows(text: &str) -> Vec<(f64, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,value,slope"), "trajectory header");
    lines
        .map(|row| {
            let cols: Vec<f64> = row
                .split(',')
                .map(|c| c.parse().expect("numeric field"))
                .collect();
            assert_eq!(cols.len(), 3, "trajectory row arity");
            (cols[0], cols[1], cols[2])
        })
        .collect()
}

// ---------------------------------------------------------------------------
// exponents

#[test]
fn exponent_table_prints_and_saves_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["exponents", "--n", "11"], dir.path());
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));

    let text = stdout_of(&out);
    assert!(
        text.contains("critical exponents at n = 11"),
        "stdout: {text}"
    );
    assert!(text.contains("p_JL"), "stdout: {text}");

    let json = read(dir.path(), "exponents.json");
    assert!(
        json.contains("\"p_L\": 7"),
        "lepin exponent at n = 11 is exactly 7: {json}"
    );

    let man = manifest(dir.path(), "exponents");
    assert_eq!(man["command"], "exponents");
    assert_eq!(man["parameters"]["n"], 11.0);
    assert_eq!(man["outputs"], serde_json::json!(["exponents.json"]));
    assert!(man["error"].is_null());
}

#[test]
fn low_dimensions_mark_unbounded_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["exponents", "--n", "3"], dir.path());
    assert_eq!(exit_code(&out), 0);

    let json = read(dir.path(), "exponents.json");
    assert!(
        json.contains("\"p_JL\": \"inf\""),
        "p_JL is unbounded for n <= 10: {json}"
    );
    assert!(
        json.contains("\"p_L\": \"inf\""),
        "p_L is unbounded for n <= 10: {json}"
    );
}

#[test]
fn invalid_dimension_exits_2_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["exponents", "--n", "0"], dir.path());
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr_of(&out).contains("dimension"),
        "stderr: {}",
        stderr_of(&out)
    );

    // The manifest still records the failed run.
    let man = manifest(dir.path(), "exponents");
    assert!(man["error"].as_str().unwrap().contains("dimension"));
    assert_eq!(man["outputs"], serde_json::json!([]));
}

// ---------------------------------------------------------------------------
// shoot

#[test]
fn forward_shot_reports_tail_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "shoot", "--n", "3", "--p", "5", "--kind", "forward", "--a", "1", "--r-end", "50",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));

    let text = stdout_of(&out);
    assert!(
        text.contains("outcome: positive_decaying"),
        "stdout: {text}"
    );
    assert!(text.contains("tail limit ell = 0.82"), "stdout: {text}");
    assert!(text.contains("(converged)"), "stdout: {text}");

    let rows = trajectory_rows(&read(dir.path(), "shoot.csv"));
    assert!(
        rows.len() >= 500,
        "expected a dense trajectory, got {} rows",
        rows.len()
    );
    assert!(
        rows.iter().all(|&(_, w, _)| w > 0.0),
        "profile stays positive"
    );

    let man = manifest(dir.path(), "shoot");
    assert_eq!(man["termination"], "positive_decaying");
    assert_eq!(man["parameters"]["kind"], "forward");
    assert_eq!(man["parameters"]["a"], 1.0);
}

#[test]
fn zero_perturbation_singular_shot_is_the_constant_scaled_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "shoot",
            "--n",
            "11",
            "--p",
            "7",
            "--kind",
            "steady",
            "--singular",
            "0",
            "--r-start",
            "0.01",
            "--r-end",
            "100",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));

    // In the scaled frame the singular solution is the constant L.
    let ell = Params::new(11.0, 7.0).unwrap().singular_amplitude.unwrap();
    let rows = trajectory_rows(&read(dir.path(), "shoot.csv"));
    let worst = rows
        .iter()
        .map(|&(_, v, _)| (v - ell).abs())
        .fold(0.0f64, f64::max);
    assert!(worst < 1e-10, "max |v - L| = {worst:.3e}");
}

#[test]
fn center_value_kappa_shoots_the_constant_profile() {
    let dir = tempfile::tempdir().unwrap();
    let kappa = Params::new(11.0, 7.0).unwrap().kappa;
    let out = run(
        &[
            "shoot",
            "--n",
            "11",
            "--p",
            "7",
            "--kind",
            "backward",
            "--a",
            &format!("{kappa}"),
            "--r-end",
            "8",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(
        stdout_of(&out).contains("constant kappa state"),
        "stdout: {}",
        stdout_of(&out)
    );

    let rows = trajectory_rows(&read(dir.path(), "shoot.csv"));
    let worst = rows
        .iter()
        .map(|&(_, w, _)| (w - kappa).abs())
        .fold(0.0f64, f64::max);
    assert!(worst < 1e-12, "max |w - kappa| = {worst:.3e}");
}

#[test]
fn shoot_requires_exactly_one_start_condition() {
    let dir = tempfile::tempdir().unwrap();
    let neither = run(
        &["shoot", "--n", "3", "--p", "5", "--kind", "forward"],
        dir.path(),
    );
    assert_eq!(
        exit_code(&neither),
        2,
        "missing --a/--singular is a usage error"
    );

    let both = run(
        &[
            "shoot",
            "--n",
            "3",
            "--p",
            "5",
            "--kind",
            "forward",
            "--a",
            "1",
            "--singular",
            "0.1",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&both), 2, "--a and --singular conflict");
}

#[test]
fn exhausted_step_budget_exits_3_but_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "shoot",
            "--n",
            "3",
            "--p",
            "5",
            "--kind",
            "forward",
            "--a",
            "1",
            "--r-end",
            "1e8",
            "--rel-tol",
            "2e-12",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 3, "stderr: {}", stderr_of(&out));
    assert!(
        stdout_of(&out).contains("undetermined"),
        "stdout: {}",
        stdout_of(&out)
    );

    // The partial trajectory and the manifest are still written.
    assert!(!trajectory_rows(&read(dir.path(), "shoot.csv")).is_empty());
    let man = manifest(dir.path(), "shoot");
    assert!(man["termination"]
        .as_str()
        .unwrap()
        .contains("undetermined"));
    assert!(
        man["error"].is_null(),
        "an undetermined shot is an outcome, not an error"
    );
}

#[test]
fn gnuplot_flag_emits_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "shoot",
            "--n",
            "3",
            "--p",
            "5",
            "--kind",
            "forward",
            "--a",
            "1",
            "--gnuplot",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);

    let script = read(dir.path(), "shoot.plt");
    assert!(script.contains("plot \"shoot.csv\""), "script: {script}");
    let man = manifest(dir.path(), "shoot");
    assert_eq!(
        man["outputs"],
        serde_json::json!(["shoot.csv", "shoot.plt"])
    );
}

#[test]
fn out_dir_falls_back_to_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let out = selfsim()
        .env("SELFSIM_OUT", dir.path())
        .args(["exponents", "--n", "5"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(dir.path().join("exponents.json").exists());
}

// ---------------------------------------------------------------------------
// verify

#[test]
fn verify_exponents_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "exponents"], dir.path());
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));

    let text = stdout_of(&out);
    assert!(text.contains("[PASS]"), "stdout: {text}");
    assert!(!text.contains("[FAIL]"), "stdout: {text}");

    let report: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "verify_report.json")).unwrap();
    assert_eq!(report["suite"], "exponents");
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().len() >= 4);
}

#[test]
fn verify_unknown_suite_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "nonsense"], dir.path());
    assert_eq!(exit_code(&out), 2);
    let err = stderr_of(&out);
    assert!(err.contains("unknown verification suite"), "stderr: {err}");
    assert!(
        err.contains("uniqueness-probe"),
        "stderr lists the available suites: {err}"
    );
}

// ---------------------------------------------------------------------------
// sweep

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("sweep.cfg");
    std::fs::write(&path, body).unwrap();
    path
}

fn sweep_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("a,outcome,"), "header: {header}");
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn five_point_forward_sweep_classifies_every_shot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "# five-point forward sweep\nn = 3\np = 5\nkind = forward\n\
         a_grid = 0.5, 1.0, 1.5, 2.0, 2.5\nr_end = 50\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(
        stdout_of(&out).contains("5 positive_decaying"),
        "stdout: {}",
        stdout_of(&out)
    );

    let rows = sweep_rows(&read(dir.path(), "sweep.csv"));
    assert_eq!(rows.len(), 5);
    assert!(
        rows.iter().all(|r| r[1] == "positive_decaying"),
        "rows: {rows:?}"
    );

    let man = manifest(dir.path(), "sweep");
    assert_eq!(man["parameters"]["grid"].as_array().unwrap().len(), 5);
    let digest = man["config_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64, "sha-256 hex digest");
    let expected = {
        use sha2::{Digest, Sha256};
        format!("{:x}", Sha256::digest(std::fs::read(&cfg).unwrap()))
    };
    assert_eq!(digest, expected, "digest matches the config bytes");
}

#[test]
fn parallel_sweep_matches_sequential_output() {
    let seq_dir = tempfile::tempdir().unwrap();
    let par_dir = tempfile::tempdir().unwrap();
    let base = "n = 3\np = 5\nkind = forward\na_grid = 0.4, 0.9, 1.7, 2.6\nr_end = 30\n";

    let cfg_seq = write_config(seq_dir.path(), base);
    let out_seq = run(
        &["sweep", "--config", cfg_seq.to_str().unwrap()],
        seq_dir.path(),
    );
    assert_eq!(exit_code(&out_seq), 0);

    let cfg_par = write_config(par_dir.path(), &format!("{base}parallelism = 4\n"));
    let out_par = run(
        &["sweep", "--config", cfg_par.to_str().unwrap()],
        par_dir.path(),
    );
    assert_eq!(exit_code(&out_par), 0);

    assert_eq!(
        read(seq_dir.path(), "sweep.csv"),
        read(par_dir.path(), "sweep.csv"),
        "parallel execution must not change the results or their order"
    );
}

#[test]
fn duplicate_grid_values_warn_and_deduplicate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n = 3\np = 5\nkind = forward\na_grid = 1.0, 0.5, 1.0\nr_end = 30\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 0);
    assert!(
        stderr_of(&out).contains("duplicate grid value 1"),
        "stderr: {}",
        stderr_of(&out)
    );

    let rows = sweep_rows(&read(dir.path(), "sweep.csv"));
    let grid: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(grid, ["0.5", "1"], "sorted and deduplicated");
}

#[test]
fn empty_grid_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n = 3\np = 5\nkind = forward\na_grid =\n");
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 2);
    let err = stderr_of(&out);
    assert!(
        err.contains("line 4") && err.contains("a_grid"),
        "stderr: {err}"
    );
}

#[test]
fn config_schema_violations_carry_line_and_key_context() {
    let dir = tempfile::tempdir().unwrap();

    let unknown = write_config(
        dir.path(),
        "n = 3\np = 5\nkind = forward\na_grid = 1\nbogus = 7\n",
    );
    let out = run(
        &["sweep", "--config", unknown.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2);
    let err = stderr_of(&out);
    assert!(
        err.contains("line 5") && err.contains("bogus"),
        "stderr: {err}"
    );

    let bad_kind = write_config(dir.path(), "n = 3\np = 5\nkind = sideways\na_grid = 1\n");
    let out = run(
        &["sweep", "--config", bad_kind.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2);
    let err = stderr_of(&out);
    assert!(
        err.contains("line 3") && err.contains("kind"),
        "stderr: {err}"
    );

    let missing = write_config(dir.path(), "n = 3\nkind = forward\na_grid = 1\n");
    let out = run(
        &["sweep", "--config", missing.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr_of(&out).contains("\"p\""),
        "stderr: {}",
        stderr_of(&out)
    );

    // A failed sweep still gets a manifest with the error and the digest.
    let man = manifest(dir.path(), "sweep");
    assert!(man["error"]
        .as_str()
        .unwrap()
        .contains("missing required key"));
    assert!(man["config_digest"].is_string());
}

#[test]
fn singular_perturbation_sweep_writes_grid_ordered_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n = 11\np = 7\nkind = backward\ndelta_grid = -0.001, 0.001\n\
         r_start = 0.01\nr_end = 30\n",
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));

    let rows = sweep_rows(&read(dir.path(), "sweep.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "-0.001");
    assert_eq!(rows[1][0], "0.001");
    let man = manifest(dir.path(), "sweep");
    assert_eq!(man["parameters"]["grid_key"], "delta_grid");
}

// ---------------------------------------------------------------------------
// determinism

/// Manifests are compared with the wall-clock field cleared; it is the one
/// value that legitimately differs between identical reruns.
fn manifest_modulo_clock(dir: &Path, stem: &str) -> serde_json::Value {
    let mut man = manifest(dir, stem);
    man["wall_clock_seconds"] = serde_json::json!(0);
    man
}

#[test]
fn reruns_produce_bit_identical_artifacts() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();

    let shot = [
        "shoot", "--n", "11", "--p", "3", "--kind", "forward", "--a", "1.5",
    ];
    assert_eq!(exit_code(&run(&shot, first.path())), 0);
    assert_eq!(exit_code(&run(&shot, second.path())), 0);
    assert_eq!(
        read(first.path(), "shoot.csv"),
        read(second.path(), "shoot.csv")
    );
    assert_eq!(
        manifest_modulo_clock(first.path(), "shoot"),
        manifest_modulo_clock(second.path(), "shoot")
    );

    let ladder = ["exponents", "--n", "11"];
    assert_eq!(exit_code(&run(&ladder, first.path())), 0);
    assert_eq!(exit_code(&run(&ladder, second.path())), 0);
    assert_eq!(
        read(first.path(), "exponents.json"),
        read(second.path(), "exponents.json")
    );

    let verify = ["verify", "exponents"];
    assert_eq!(exit_code(&run(&verify, first.path())), 0);
    assert_eq!(exit_code(&run(&verify, second.path())), 0);
    assert_eq!(
        read(first.path(), "verify_report.json"),
        read(second.path(), "verify_report.json")
    );
}
