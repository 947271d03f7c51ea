//! Acceptance criteria, one test per criterion. Each sub-check prints a
//! `PASS` or `FAIL` line with the measured value and its pinned tolerance.

use std::path::Path;
use std::process::Command;

use strichartz::experiments::fit_loglog;
use strichartz::weyl::quartic_moment_plain;
use strichartz_cli::commands::{self, Check, Report};
use strichartz_cli::config::Config;
use strichartz_cli::output::Cell;
use strichartz_cli::presets::{self, Preset};

fn report_line(criterion: u32, check: &Check) -> bool {
    let tag = if check.passed { "PASS" } else { "FAIL" };
    println!(
        "{tag} criterion {criterion}: {}: {}",
        check.name, check.detail
    );
    check.passed
}

/// Prints every check and fails the test if any did.
fn conclude(criterion: u32, checks: &[Check]) {
    let mut all = true;
    for c in checks {
        all &= report_line(criterion, c);
    }
    assert!(all, "criterion {criterion} failed");
}

fn labelled(label: &str, report: Report) -> Vec<Check> {
    for line in &report.lines {
        println!("    [{label}] {line}");
    }
    report
        .checks
        .into_iter()
        .map(|c| Check::new(format!("{label} {}", c.name), c.passed, c.detail))
        .collect()
}

fn scaling_alpha(preset: Preset) -> (f64, Report) {
    let mut cfg = Config::parse(&preset.config_text(false)).unwrap();
    let report = commands::scaling(&mut cfg).unwrap();
    let samples = &report.tables[0].rows;
    let pairs: Vec<(f64, f64)> = samples
        .iter()
        .map(|r| match (&r[0], &r[1]) {
            (Cell::Float(n), Cell::Float(c)) => (*n, *c),
            _ => unreachable!(),
        })
        .collect();
    (fit_loglog(&pairs).unwrap().slope, report)
}

#[test]
fn criterion_1_mixed_geometry_scaling() {
    let mut checks = Vec::new();
    let mut alphas = Vec::new();
    for preset in [Preset::R2t, Preset::Rt2, Preset::T3] {
        let (alpha, report) = scaling_alpha(preset);
        checks.extend(labelled(preset.name(), report));
        alphas.push(alpha);
    }
    let (r2t, rt2, t3) = (alphas[0], alphas[1], alphas[2]);
    checks.push(Check::new(
        "ordering alpha(t3) > alpha(rt2) > alpha(r2t)",
        t3 > rt2 && rt2 > r2t,
        format!("{t3:.4} > {rt2:.4} > {r2t:.4}"),
    ));
    conclude(1, &checks);
}

#[test]
fn criterion_2_euclidean_shell_scaling() {
    let mut checks = Vec::new();
    for preset in [Preset::Euclid2, Preset::Euclid3] {
        let (_, report) = scaling_alpha(preset);
        checks.extend(labelled(preset.name(), report));
    }
    assert_eq!(checks.len(), 2, "both Euclidean presets carry a band");
    conclude(2, &checks);
}

#[test]
fn criterion_3_weyl_log_divergence() {
    let mut cfg = Config::parse(presets::WEYL_DEFAULT).unwrap();
    let report = commands::weyl(&mut cfg).unwrap();
    assert_eq!(
        cfg.get_list::<usize>("weyl", "K_list").unwrap(),
        vec![8, 16, 32, 64, 128]
    );
    let mut checks = labelled("d=2", report);
    let mut worst = 0.0f64;
    for k in 1..=64usize {
        let exact = (2 * k * k - k) as f64;
        worst = worst.max((quartic_moment_plain::<f64>(k).unwrap() - exact).abs() / exact);
    }
    checks.push(Check::new(
        "quartic 2K^2-K for every K <= 64",
        worst <= 1e-8,
        format!("max relative error {worst:.3e} (tol 1e-8)"),
    ));
    conclude(3, &checks);
}

#[test]
fn criterion_4_measure_bounds() {
    let mut cfg = Config::parse(presets::MEASURE_DEFAULT).unwrap();
    let report = commands::measure(&mut cfg).unwrap();
    let rows = report.tables[0].rows.len();
    let t_count = cfg.get_list::<f64>("measure", "T_list").unwrap().len();
    let mut checks = labelled("measure", report);
    checks.push(Check::new(
        "instance count",
        rows / t_count >= 20,
        format!("{} instances (need >= 20)", rows / t_count),
    ));
    conclude(4, &checks);
}

const DECAY_3D: &str = "[geometry]
m = 3
n = 0
period = 48
grid = 64, 256, 256

[data]
kind = strip
strip_dir = 1, 0, 0
strip_halfwidth = 0.05
envelope_sigma = 0.4
distribution = coherent
seed = 1

[time]
t0 = 1
t1 = 8
nt = 4
";

#[test]
fn criterion_5_dispersive_decay() {
    let mut checks = Vec::new();
    for (label, text) in [("d=2", presets::DECAY_DEFAULT), ("d=3", DECAY_3D)] {
        let mut cfg = Config::parse(text).unwrap();
        // A wrap-around would surface here as an error.
        let report = commands::decay(&mut cfg).unwrap();
        checks.extend(labelled(label, report));
    }
    conclude(5, &checks);
}

#[test]
fn criterion_6_strip_mixed_norm() {
    let mut cfg = Config::parse(presets::MIXED_DEFAULT).unwrap();
    let report = commands::mixed(&mut cfg).unwrap();
    assert_eq!(
        (
            cfg.get::<f64>("experiment", "q").unwrap(),
            cfg.get::<f64>("experiment", "r").unwrap()
        ),
        (8.0, 4.0)
    );
    conclude(6, &labelled("d=2 (8,4)", report));
}

fn run_binary(args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_strichartz"))
        .args(args)
        .output()
        .unwrap();
    status.status.code().unwrap()
}

fn same_bytes(a: &Path, b: &Path, file: &str) -> bool {
    std::fs::read(a.join(file)).unwrap() == std::fs::read(b.join(file)).unwrap()
}

#[test]
fn criterion_7_identities_and_reproducibility() {
    let mut checks = labelled("selftest", commands::selftest());

    let mut worst = 0.0f64;
    for slope in [-1.5, -0.5, 0.3, 2.0] {
        let pts: Vec<(f64, f64)> = [4.0f64, 8.0, 16.0, 32.0]
            .iter()
            .map(|&n| (n, 0.7 * n.powf(slope)))
            .collect();
        worst = worst.max((fit_loglog(&pts).unwrap().slope - slope).abs());
    }
    checks.push(Check::new(
        "fit_loglog exact on power laws",
        worst <= 1e-12,
        format!("max slope error {worst:.3e} (tol 1e-12)"),
    ));

    let dir = tempfile::tempdir().unwrap();
    let scaling_cfg = dir.path().join("scaling.ini");
    std::fs::write(
        &scaling_cfg,
        "[geometry]\nm = 1\nn = 1\nperiod = 2\ngrid = 32, 16\n[data]\ndistribution = complex-gaussian\nseed = 4\n\
         [time]\nnt = 16\n[experiment]\nN_list = 2, 4\ntrials = 3\n",
    )
    .unwrap();
    for (sub, csv, extra) in [
        (
            "scaling",
            "scaling.csv",
            vec!["--config", scaling_cfg.to_str().unwrap()],
        ),
        ("measure", "measure.csv", vec!["--seed", "17"]),
    ] {
        let first = dir.path().join(format!("{sub}-a"));
        let second = dir.path().join(format!("{sub}-b"));
        let mut args = vec![sub, "--out", first.to_str().unwrap()];
        args.extend(extra);
        let code_a = run_binary(&args);
        let manifest = first.join("manifest.ini");
        let code_b = run_binary(&[
            sub,
            "--config",
            manifest.to_str().unwrap(),
            "--out",
            second.to_str().unwrap(),
        ]);
        let ok = code_a == code_b
            && code_a != 2
            && same_bytes(&first, &second, csv)
            && same_bytes(&first, &second, "summary.txt");
        checks.push(Check::new(
            format!("{sub} rerun from manifest"),
            ok,
            format!("exit codes {code_a}/{code_b}, {csv} and summary.txt byte-identical: {ok}"),
        ));
    }
    conclude(7, &checks);
}
