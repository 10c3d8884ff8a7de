use std::path::PathBuf;
use std::process::{Command, Output};

use odl::{run, Experiment, ExperimentConfig};

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("odl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn odl(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_odl"));
    cmd.args(args).env_remove("ODL_BUDGET_MB");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn csv(exp: Experiment, seed: u64, params: &[(&str, &str)]) -> String {
    let cfg = ExperimentConfig::with_params(exp, seed, params).unwrap();
    run(&cfg).unwrap().to_csv()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: [(Experiment, &[(&str, &str)]); 4] = [
        (Experiment::GlasnerDilation, &[("sets", "4"), ("n_max", "500"), ("density_n_max", "200")]),
        (Experiment::IetQd, &[("trials", "3"), ("n_max", "2000")]),
        (Experiment::WalkEqui, &[("steps", "5000"), ("trials", "3")]),
        (Experiment::SlSearch, &[("sets", "3"), ("radius", "3")]),
    ];
    for (exp, params) in cases {
        assert_eq!(csv(exp, 7, params), csv(exp, 7, params), "{exp}");
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let base = [("sets", "5"), ("n_max", "500"), ("density_n_max", "200")];
    let one = csv(Experiment::GlasnerDilation, 3, &[base.as_slice(), &[("workers", "1")]].concat());
    let three = csv(Experiment::GlasnerDilation, 3, &[base.as_slice(), &[("workers", "3")]].concat());
    // the header echoes the worker count; everything else must agree
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# workers")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&one), strip(&three));
}

#[test]
fn seeds_change_random_experiments() {
    let params = [("trials", "2"), ("n_max", "500")];
    assert_ne!(csv(Experiment::IetQd, 1, &params), csv(Experiment::IetQd, 2, &params));
}

#[test]
fn gap_run_writes_csv_with_header() {
    let cfg = scratch("gap.ini", "seed = 1\n[gap]\nspace = circle\npoints = 0 1/4 1/2 3/4\n");
    let out = odl(&["gap", "--config", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# experiment: gap"));
    assert!(text.contains("# seed: 1"));
    assert!(text.lines().any(|l| l == "circle,4,0.125,1/8,0.125"), "{text}");
}

#[test]
fn out_flag_and_seed_override() {
    let cfg = scratch("walk.ini", "seed = 1\n[walk-equi]\nsteps = 1000\n");
    let target = cfg.with_file_name("walk.csv");
    let out = odl(
        &["walk-equi", "--config", cfg.to_str().unwrap(), "--seed", "9", "--out", target.to_str().unwrap()],
        &[],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&target).unwrap().contains("# seed: 9"));
}

#[test]
fn bad_configs_exit_with_two() {
    let cases = [
        ("unknown.ini", "[gap]\npoints = 0\ncolour = red\n"),
        ("value.ini", "[gap]\npoints = 0\nresolution = many\n"),
        ("missing.ini", "[gap]\nspace = circle\n"),
        ("section.ini", "[gaps]\npoints = 0\n"),
    ];
    for (name, text) in cases {
        let cfg = scratch(name, text);
        let out = odl(&["gap", "--config", cfg.to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let cfg = scratch("ok.ini", "[gap]\npoints = 0\n");
    let out = odl(&["no-such-experiment", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn calibrate_refuses_other_experiments() {
    let cfg = scratch("cal.ini", "[gap]\npoints = 0\n");
    let out = odl(&["calibrate", "gap", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let cfg = scratch("budget.ini", "[rotation-qd]\nalphas = 1\nn_max = 100000\n");
    let out = odl(&["rotation-qd", "--config", cfg.to_str().unwrap()], &[("ODL_BUDGET_MB", "1")]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
