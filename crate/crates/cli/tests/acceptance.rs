//! End-to-end checks of the CLI: reproducible artifacts, exit-code
//! conventions, seed resolution and config-file precedence.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lattice-mc"));
    cmd.env_remove("LATTICE_MC_SEED");
    cmd
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .args(["--out-dir", dir.to_str().unwrap()])
        .output()
        .expect("spawn lattice-mc")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("[criterion {id}] {verdict}: {name} ({detail})");
    assert!(ok, "criterion {id} failed: {name} ({detail})");
}

#[test]
fn criterion_9_artifacts_reproduce_byte_identically() {
    let base = tempfile::tempdir().unwrap();
    let dirs: Vec<_> = (0..3).map(|i| base.path().join(format!("run{i}"))).collect();

    // Same parameters, same seed, scalar twice then data-parallel once.
    for (dir, backend) in dirs.iter().zip(["scalar", "scalar", "data-parallel"]) {
        let out = run(
            &[
                "ising", "--dims", "16x16", "--kt", "2.0", "--sweeps", "40",
                "--burn-in", "10", "--seed", "99", "--snapshot-every", "20",
                "--backend", backend,
            ],
            dir,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut ok = true;
    let mut detail = String::from("ising csv + 3 ppm");
    for name in [
        "ising_99_observables.csv",
        "ising_99_000020.ppm",
        "ising_99_000040.ppm",
    ] {
        let a = read(&dirs[0], name);
        if a != read(&dirs[1], name) {
            ok = false;
            detail = format!("{name} differs between identical runs");
            break;
        }
        if a != read(&dirs[2], name) {
            ok = false;
            detail = format!("{name} differs across backends");
            break;
        }
    }

    // Threshold sweep: repeated runs and jobs=1 vs jobs=4 agree.
    let tdirs: Vec<_> = (0..3).map(|i| base.path().join(format!("thr{i}"))).collect();
    for (dir, jobs) in tdirs.iter().zip(["1", "1", "4"]) {
        let out = run(
            &[
                "percolation", "threshold", "--dims", "32x32", "--p-min", "0.5",
                "--p-max", "0.7", "--p-step", "0.05", "--trials", "20",
                "--seed", "5", "--jobs", jobs,
            ],
            dir,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let t = read(&tdirs[0], "percolation_5_threshold.csv");
    if ok && (t != read(&tdirs[1], "percolation_5_threshold.csv")
        || t != read(&tdirs[2], "percolation_5_threshold.csv"))
    {
        ok = false;
        detail = "threshold csv not reproducible".into();
    }

    // RNG report.
    let rdirs: Vec<_> = (0..2).map(|i| base.path().join(format!("rng{i}"))).collect();
    for dir in &rdirs {
        let out = run(
            &["rng-test", "--seed", "7", "--samples", "10000", "--scatter-pairs", "100"],
            dir,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["rng-test_7.csv", "rng-test_7_scatter.txt"] {
        if ok && read(&rdirs[0], name) != read(&rdirs[1], name) {
            ok = false;
            detail = format!("{name} not reproducible");
        }
    }

    report(
        9,
        "identical seed and parameters reproduce every artifact byte-for-byte",
        ok,
        &detail,
    );
}

#[test]
fn invalid_parameters_exit_1_and_name_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["ising", "--dims", "8x8", "--kt", "-1.0", "--sweeps", "10", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("kt"), "stderr should name the bad parameter: {err}");

    let out = run(
        &["percolation", "visual", "--dims", "8x8", "--porosity", "1.5", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["bench", "--ops", "frobnicate", "--reps", "3"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn runtime_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Porosity 0 guarantees the invasion source is solid.
    let out = run(
        &["percolation", "visual", "--dims", "8x8", "--porosity", "0.0", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn missing_seed_is_an_error_and_env_var_fills_it() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["ising", "--dims", "8x8", "--kt", "2.0", "--sweeps", "5"];
    let out = run(&args, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("LATTICE_MC_SEED"));

    let out = bin()
        .env("LATTICE_MC_SEED", "123")
        .args(args)
        .args(["--out-dir", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest = String::from_utf8(read(dir.path(), "ising_123_manifest.txt")).unwrap();
    assert!(manifest.contains("seed=123"));
}

#[test]
fn config_file_supplies_values_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "dims=8x8\nkt=2.0\nsweeps=5\nseed=42\n").unwrap();

    let out = run(&["ising", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("ising_42_observables.csv").exists());

    // Flag beats the config value for the seed.
    let out = run(
        &["ising", "--config", cfg.to_str().unwrap(), "--seed", "43"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("ising_43_observables.csv").exists());

    // Unknown keys are rejected up front.
    std::fs::write(&cfg, "ktt=2.0\n").unwrap();
    let out = run(&["ising", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ktt"));
}
