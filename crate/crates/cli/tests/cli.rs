//! End-to-end checks of the compiled binary: exit codes, file round trips,
//! and the simulate → reconstruct → analyze pipeline.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ghz_tomo::qlin::states;
use ghz_tomo::reconstruct::ReconstructionResult;
use ghz_tomo::tomo::{noiseless_set, TomographySet};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ghz-tomo")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ghz-tomo-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pipeline_round_trip_reports_high_fidelity() {
    let dir = tmp_dir("pipeline");
    let counts = dir.join("counts.txt");
    let rho = dir.join("rho.txt");
    let report = dir.join("report.txt");

    let out = run(&[
        "simulate",
        "--preset",
        "ghz",
        "--flux",
        "100000",
        "--seed",
        "1",
        "--restarts",
        "4",
        "--out",
        path_str(&counts),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    // The {H,V}³ block total tracks the requested flux.
    let table = std::fs::read_to_string(&counts).unwrap();
    let set = TomographySet::from_table(&table).unwrap();
    assert!((set.hv_block_total() - 1e5).abs() < 5.0 * 1e5f64.sqrt());

    let out = run(&[
        "reconstruct",
        "--input",
        path_str(&counts),
        "--out",
        path_str(&rho),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    let result = ReconstructionResult::from_text(&std::fs::read_to_string(&rho).unwrap()).unwrap();
    let fidelity = result.rho.fidelity_pure(&states::ghz3()).unwrap();
    assert!(fidelity >= 0.99, "fidelity {fidelity}");

    let out = run(&[
        "analyze",
        "--input",
        path_str(&rho),
        "--restarts",
        "4",
        "--out",
        path_str(&report),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report_text = std::fs::read_to_string(&report).unwrap();
    assert!(report_text.contains("fidelity 9."), "{report_text}");
}

#[test]
fn simulate_echoes_true_quantities_for_the_depolarized_preset() {
    let dir = tmp_dir("werner-echo");
    let counts = dir.join("counts.txt");
    let out = run(&[
        "simulate",
        "--preset",
        "werner:0.735",
        "--seed",
        "2",
        "--restarts",
        "4",
        "--out",
        path_str(&counts),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    let header = std::fs::read_to_string(&counts).unwrap();
    let fid_line = header
        .lines()
        .find(|l| l.starts_with("# true_fidelity"))
        .expect("echoed fidelity");
    let value: f64 = fid_line.split_whitespace().last().unwrap().parse().unwrap();
    assert!((value - 0.768125).abs() < 0.001, "echoed {value}");
}

#[test]
fn invalid_preset_is_a_usage_error() {
    let dir = tmp_dir("bad-preset");
    let out = run(&[
        "simulate",
        "--preset",
        "bell",
        "--out",
        path_str(&dir.join("x.txt")),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn missing_preset_file_is_a_data_error() {
    let dir = tmp_dir("missing-file");
    let out = run(&[
        "simulate",
        "--preset",
        "file:/nonexistent/rho.txt",
        "--out",
        path_str(&dir.join("x.txt")),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn duplicate_setting_is_a_data_error_naming_the_setting() {
    let dir = tmp_dir("duplicate");
    let counts = dir.join("counts.txt");
    let out = run(&[
        "simulate", "--flux", "1000", "--seed", "3", "--restarts", "2",
        "--out", path_str(&counts),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let mut table = std::fs::read_to_string(&counts).unwrap();
    let row = table
        .lines()
        .find(|l| l.starts_with("HVD"))
        .unwrap()
        .to_string();
    table.push_str(&row);
    table.push('\n');
    let dup = dir.join("dup.txt");
    std::fs::write(&dup, table).unwrap();

    let out = run(&[
        "reconstruct",
        "--input",
        path_str(&dup),
        "--out",
        path_str(&dir.join("rho.txt")),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("HVD"), "stderr: {stderr}");
}

#[test]
fn linear_method_flags_physicality_on_noiseless_counts() {
    let dir = tmp_dir("linear");
    let counts = dir.join("noiseless.txt");
    let set = noiseless_set(&states::ghz3().to_density(), 1e6).unwrap();
    std::fs::write(&counts, set.to_table()).unwrap();

    let rho = dir.join("rho.txt");
    let out = run(&[
        "reconstruct",
        "--input",
        path_str(&counts),
        "--method",
        "linear",
        "--out",
        path_str(&rho),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&rho).unwrap();
    assert!(text.contains("method linear"));
    assert!(text.contains("physical true"));
}

#[test]
fn corrupt_state_file_is_a_data_error() {
    let dir = tmp_dir("corrupt");
    let bad = dir.join("rho.txt");
    std::fs::write(&bad, "method mle\nqubits 3\nrho\nnot numbers\n").unwrap();
    let out = run(&[
        "analyze",
        "--input",
        path_str(&bad),
        "--out",
        path_str(&dir.join("report.txt")),
    ]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn dip_needs_at_least_five_positions() {
    let dir = tmp_dir("dip-short");
    let out = run(&[
        "dip",
        "--positions",
        "-50:50:3",
        "--out",
        path_str(&dir.join("dip.txt")),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn dip_writes_fit_and_curve() {
    let dir = tmp_dir("dip");
    let out_path = dir.join("dip.txt");
    let out = run(&[
        "dip",
        "--epsilon0",
        "0.69",
        "--seed",
        "4",
        "--out",
        path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("fitted_visibility"));
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("fitted_"))
        .count();
    assert_eq!(rows, 41);
}

#[test]
fn analyze_attaches_error_bars_from_counts() {
    let dir = tmp_dir("mc");
    let counts = dir.join("counts.txt");
    let rho = dir.join("rho.txt");
    let report = dir.join("report.txt");

    assert_eq!(
        run(&[
            "simulate", "--flux", "2000", "--seed", "5", "--restarts", "2",
            "--out", path_str(&counts),
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        run(&[
            "reconstruct", "--input", path_str(&counts), "--out", path_str(&rho),
        ])
        .status
        .code(),
        Some(0)
    );
    let out = run(&[
        "analyze",
        "--input",
        path_str(&rho),
        "--counts",
        path_str(&counts),
        "--trials",
        "10",
        "--restarts",
        "4",
        "--mc-restarts",
        "2",
        "--out",
        path_str(&report),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("mc_trials 10"), "{text}");
    let fid_mc = text
        .lines()
        .find(|l| l.starts_with("mc fidelity"))
        .expect("fidelity error bar");
    let std_dev: f64 = fid_mc.split_whitespace().last().unwrap().parse().unwrap();
    assert!(std_dev > 0.0);

    // trials without counts is a config error
    let out = run(&[
        "analyze",
        "--input",
        path_str(&rho),
        "--trials",
        "10",
        "--out",
        path_str(&report),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tmp_dir("config");
    let counts_flag = dir.join("from-flag.txt");
    let cfg = dir.join("sim.toml");
    std::fs::write(
        &cfg,
        format!(
            "flux = 5000.0\nseed = 9\nrestarts = 2\nout = \"{}\"\n",
            dir.join("from-file.txt").display()
        ),
    )
    .unwrap();

    // The --out flag overrides the file's out; flux comes from the file.
    let out = run(&[
        "simulate",
        "--config",
        path_str(&cfg),
        "--out",
        path_str(&counts_flag),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(counts_flag.exists());
    let text = std::fs::read_to_string(&counts_flag).unwrap();
    assert!(text.contains("flux=5000"), "{text}");

    // Unknown keys are rejected.
    std::fs::write(&cfg, "fluks = 100.0\n").unwrap();
    let out = run(&[
        "simulate",
        "--config",
        path_str(&cfg),
        "--out",
        path_str(&counts_flag),
    ]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tmp_dir("determinism");
    let out_path = dir.join("counts.txt");
    let args = [
        "simulate", "--flux", "3000", "--seed", "11", "--restarts", "2",
        "--out", path_str(&out_path),
    ];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = std::fs::read(&out_path).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    let second = std::fs::read(&out_path).unwrap();
    assert_eq!(first, second);
}
