//! Subcommand drivers: resolve a [`Config`] into core types, run, and
//! collect tables, summary lines and acceptance checks.

use strichartz::datagen::{counterexample_data, torus_mode_limit, CoefficientLaw};
use strichartz::experiments::{
    decay_experiment, fit_samples, mixed_norm_experiment, scaling_experiment, ExperimentConfig,
    NormKind, RecipeTemplate, ScalingSample, Statistic,
};
use strichartz::geometry::{GeometrySpec, StripSpec};
use strichartz::measure::{
    mc_volume, monotonicity_changes, random_admissible_pair, slice_control, slice_profile, Ball,
    QuadricShellSet, Region,
};
use strichartz::norms::{l2_norm, TimeGrid};
use strichartz::rng::derive_seed;
use strichartz::weyl::{
    critical_exponent, euclid_factor, nested_moment, quadrature_floors, quartic_moment_plain,
    EuclidQuadrature, MomentSeries,
};
use strichartz::{selftest, GeometrySpec64};

use crate::config::{Config, ConfigError};
use crate::output::{Cell, Table};
use crate::RunError;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
}

/// Closed interval an exponent must fall in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

impl std::fmt::Display for Band {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Scaling-exponent band for the geometries with a known answer.
pub fn scaling_band(m: usize, n: usize, p: f64) -> Option<Band> {
    let d = m + n;
    match (m, n) {
        (2, 1) if p == 4.0 => Some(Band {
            lo: -0.10,
            hi: 0.10,
        }),
        (1, 2) if p == 4.0 => Some(Band { lo: 0.08, hi: 0.30 }),
        (0, 3) if p == 4.0 => Some(Band { lo: 0.18, hi: 0.45 }),
        (_, 0) if d >= 2 && critical_exponent(d).is_ok_and(|c| c == p) => Some(Band {
            lo: -0.10,
            hi: 0.10,
        }),
        _ => None,
    }
}

/// Expected sup-norm decay slope `−(d−1)/2` with its tolerance.
pub fn decay_band(d: usize) -> Band {
    let centre = -((d as f64) - 1.0) / 2.0;
    let tol = if d == 2 { 0.15 } else { 0.2 };
    Band {
        lo: centre - tol,
        hi: centre + tol,
    }
}

pub const MIXED_MAX_SPREAD: f64 = 1.5;
pub const SLICE_RATIO_MAX: f64 = 10.0;
pub const T_DECAY_FACTOR: f64 = 3.0;
pub const MONOTONICITY_MAX: usize = 8;
pub const WEYL_MIN_R2: f64 = 0.9;
pub const QUARTIC_TOL: f64 = 1e-8;
pub const MC_CALIBRATION_SEEDS: u64 = 100;
pub const MC_CALIBRATION_MIN_PASS: usize = 99;

fn bad(section: &str, key: &str, reason: impl Into<String>) -> RunError {
    ConfigError::BadValue {
        section: section.into(),
        key: key.into(),
        reason: reason.into(),
    }
    .into()
}

fn resolve_geometry(cfg: &mut Config) -> Result<GeometrySpec64, RunError> {
    cfg.require_section("geometry")?;
    cfg.set_default("geometry", "period", "1");
    let m: usize = cfg.get("geometry", "m")?;
    let n: usize = cfg.get("geometry", "n")?;
    let period: f64 = cfg.get("geometry", "period")?;
    let grid: Vec<usize> = cfg.get_list("geometry", "grid")?;
    Ok(GeometrySpec::new(m, n, period, grid)?)
}

fn resolve_law(cfg: &mut Config) -> Result<CoefficientLaw, RunError> {
    cfg.set_default("data", "distribution", CoefficientLaw::UnitModulus.name());
    let raw: String = cfg.get("data", "distribution")?;
    CoefficientLaw::parse(&raw).ok_or_else(|| {
        bad(
            "data",
            "distribution",
            format!("`{raw}` is not one of unit-modulus, complex-gaussian, coherent"),
        )
    })
}

fn resolve_kind(cfg: &mut Config, expected: &str) -> Result<(), RunError> {
    cfg.set_default("data", "kind", expected);
    let kind: String = cfg.get("data", "kind")?;
    if kind != expected {
        return Err(bad(
            "data",
            "kind",
            format!("this subcommand needs kind = {expected}, got `{kind}`"),
        ));
    }
    Ok(())
}

fn resolve_time(
    cfg: &mut Config,
    t0: &str,
    t1: &str,
    nt: &str,
) -> Result<(f64, f64, usize), RunError> {
    cfg.set_default("time", "t0", t0);
    cfg.set_default("time", "t1", t1);
    cfg.set_default("time", "nt", nt);
    Ok((
        cfg.get("time", "t0")?,
        cfg.get("time", "t1")?,
        cfg.get("time", "nt")?,
    ))
}

fn resolve_statistic(cfg: &mut Config) -> Result<Statistic, RunError> {
    cfg.set_default("experiment", "statistic", "max");
    let raw: String = cfg.get("experiment", "statistic")?;
    Statistic::parse(&raw).ok_or_else(|| bad("experiment", "statistic", "expected max or mean"))
}

/// `inf` (or absent) disables the envelope.
fn resolve_envelope(cfg: &mut Config) -> Result<Option<f64>, RunError> {
    cfg.set_default("data", "envelope_sigma", "inf");
    let s: f64 = cfg.get("data", "envelope_sigma")?;
    Ok(s.is_finite().then_some(s))
}

fn resolve_strip(cfg: &mut Config, dim: usize) -> Result<(Vec<f64>, f64, Option<f64>), RunError> {
    resolve_kind(cfg, "strip")?;
    let dir: Vec<f64> = cfg.get_list("data", "strip_dir")?;
    if dir.len() != dim {
        return Err(bad(
            "data",
            "strip_dir",
            format!("needs {dim} components, got {}", dir.len()),
        ));
    }
    let half: f64 = cfg.get("data", "strip_halfwidth")?;
    let sigma = resolve_envelope(cfg)?;
    Ok((dir, half, sigma))
}

fn resolve_seed(cfg: &mut Config, section: &str) -> Result<u64, RunError> {
    cfg.set_default(section, "seed", "0");
    Ok(cfg.get(section, "seed")?)
}

fn resolve_frequencies(cfg: &mut Config) -> Result<(Vec<f64>, usize, Statistic), RunError> {
    cfg.set_default("experiment", "N_list", "4, 8, 16, 32");
    cfg.set_default("experiment", "trials", "5");
    let ns = cfg.get_list("experiment", "N_list")?;
    let trials = cfg.get("experiment", "trials")?;
    Ok((ns, trials, resolve_statistic(cfg)?))
}

fn samples_table(name: &'static str, samples: &[ScalingSample<f64>]) -> Table {
    let mut t = Table::new(name, &["N", "ratio_max", "ratio_mean", "trials"]);
    for s in samples {
        t.push(vec![
            s.n.into(),
            s.max.into(),
            s.mean.into(),
            s.trials.into(),
        ]);
    }
    t
}

pub fn resolve_scaling(cfg: &mut Config) -> Result<ExperimentConfig<f64>, RunError> {
    let geometry = resolve_geometry(cfg)?;
    resolve_kind(cfg, "shell")?;
    cfg.set_default("data", "width", "1");
    cfg.set_default("data", "ball_radius", "inf");
    let half_width: f64 = cfg.get("data", "width")?;
    let radius: f64 = cfg.get("data", "ball_radius")?;
    let ball = if radius.is_finite() {
        cfg.set_default("data", "ball_center", vec!["0"; geometry.dim()].join(", "));
        let center: Vec<f64> = cfg.get_list("data", "ball_center")?;
        if center.len() != geometry.dim() {
            return Err(bad("data", "ball_center", "dimension mismatch"));
        }
        Some((center, radius))
    } else {
        None
    };
    let law = resolve_law(cfg)?;
    let seed = resolve_seed(cfg, "data")?;
    let (t0, t1, nt) = resolve_time(cfg, "0", "1", "64")?;
    cfg.set_default("experiment", "p", "4");
    let p: f64 = cfg.get("experiment", "p")?;
    let (frequencies, trials, statistic) = resolve_frequencies(cfg)?;
    Ok(ExperimentConfig {
        geometry,
        template: RecipeTemplate::Shell { half_width, ball },
        law,
        norm: NormKind::SpaceTime { p },
        time: TimeGrid::new(t0, t1, nt)?,
        frequencies,
        trials,
        statistic,
        seed,
    })
}

pub fn scaling(cfg: &mut Config) -> Result<Report, RunError> {
    let exp = resolve_scaling(cfg)?;
    let samples = scaling_experiment(&exp)?;
    let fit = fit_samples(&samples, exp.statistic)?;
    let other = match exp.statistic {
        Statistic::Max => Statistic::Mean,
        Statistic::Mean => Statistic::Max,
    };
    let fit_other = fit_samples(&samples, other)?;
    let g = &exp.geometry;
    let NormKind::SpaceTime { p } = exp.norm else {
        unreachable!()
    };
    let mut report = Report {
        tables: vec![samples_table("scaling.csv", &samples)],
        ..Default::default()
    };
    report.lines.push(format!(
        "geometry m={} n={} grid={:?}, p={p}",
        g.euclidean_dims(),
        g.torus_dims(),
        g.grid()
    ));
    for s in &samples {
        report.lines.push(format!(
            "  N={:<4} C_max={:.6} C_mean={:.6}",
            s.n, s.max, s.mean
        ));
    }
    report.lines.push(format!(
        "alpha ({}) = {:.4} (R^2 {:.4}, stderr {:.4}); alpha ({}) = {:.4}",
        exp.statistic.name(),
        fit.slope,
        fit.r_squared,
        fit.slope_stderr,
        other.name(),
        fit_other.slope
    ));
    if let Some(band) = scaling_band(g.euclidean_dims(), g.torus_dims(), p) {
        report.checks.push(Check::new(
            "scaling exponent",
            band.contains(fit.slope),
            format!("alpha = {:.4}, band {band}", fit.slope),
        ));
    }
    Ok(report)
}

/// Geometric time ladder `t0·(t1/t0)^{i/(nt−1)}`.
pub fn decay_times(t0: f64, t1: f64, nt: usize) -> Vec<f64> {
    if nt == 1 {
        return vec![t0];
    }
    (0..nt)
        .map(|i| {
            if i + 1 == nt {
                t1
            } else {
                t0 * (t1 / t0).powf(i as f64 / (nt - 1) as f64)
            }
        })
        .collect()
}

pub fn decay(cfg: &mut Config) -> Result<Report, RunError> {
    let geometry = resolve_geometry(cfg)?;
    let (dir, half, sigma) = resolve_strip(cfg, geometry.dim())?;
    let law = resolve_law(cfg)?;
    let seed = resolve_seed(cfg, "data")?;
    let (t0, t1, nt) = resolve_time(cfg, "1", "8", "4")?;
    if !(t0 > 0.0 && t1 > t0) || nt < 2 {
        return Err(bad("time", "t0", "decay needs 0 < t0 < t1 and nt >= 2"));
    }
    let times = decay_times(t0, t1, nt);
    let strip = StripSpec::new(dir, half)?;
    let res = decay_experiment(&geometry, &strip, sigma, law, seed, &times)?;
    let mut table = Table::new("decay.csv", &["t", "sup_norm"]);
    for &(t, s) in &res.samples {
        table.push(vec![t.into(), s.into()]);
    }
    let band = decay_band(geometry.dim());
    let mut report = Report {
        tables: vec![table],
        ..Default::default()
    };
    report.lines.push(format!(
        "d={} decay slope {:.4} (R^2 {:.4}); packet excursion {:.3}",
        geometry.dim(),
        res.fit.slope,
        res.fit.r_squared,
        res.excursion
    ));
    report.checks.push(Check::new(
        "decay slope",
        band.contains(res.fit.slope),
        format!("slope = {:.4}, band {band}", res.fit.slope),
    ));
    Ok(report)
}

pub fn resolve_mixed(cfg: &mut Config) -> Result<ExperimentConfig<f64>, RunError> {
    let geometry = resolve_geometry(cfg)?;
    let (direction, half_width, envelope_sigma) = resolve_strip(cfg, geometry.dim())?;
    let law = resolve_law(cfg)?;
    let seed = resolve_seed(cfg, "data")?;
    let (t0, t1, nt) = resolve_time(cfg, "0", "1", "64")?;
    cfg.set_default("experiment", "q", "8");
    cfg.set_default("experiment", "r", "4");
    let q: f64 = cfg.get("experiment", "q")?;
    let r: f64 = cfg.get("experiment", "r")?;
    let (frequencies, trials, statistic) = resolve_frequencies(cfg)?;
    Ok(ExperimentConfig {
        geometry,
        template: RecipeTemplate::Strip {
            direction,
            half_width,
            envelope_sigma,
        },
        law,
        norm: NormKind::Mixed { q, r },
        time: TimeGrid::new(t0, t1, nt)?,
        frequencies,
        trials,
        statistic,
        seed,
    })
}

/// `max / min` of the configured statistic over `N`.
pub fn spread(samples: &[ScalingSample<f64>], statistic: Statistic) -> f64 {
    let vals: Vec<f64> = samples.iter().map(|s| s.value(statistic)).collect();
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

pub fn mixed(cfg: &mut Config) -> Result<Report, RunError> {
    let exp = resolve_mixed(cfg)?;
    let samples = mixed_norm_experiment(&exp)?;
    let s = spread(&samples, exp.statistic);
    let mut report = Report {
        tables: vec![samples_table("mixed.csv", &samples)],
        ..Default::default()
    };
    for x in &samples {
        report.lines.push(format!(
            "  N={:<4} ratio_max={:.8} ratio_mean={:.8}",
            x.n, x.max, x.mean
        ));
    }
    report.checks.push(Check::new(
        "mixed-norm spread",
        s <= MIXED_MAX_SPREAD,
        format!("max/min = {s:.6} (limit {MIXED_MAX_SPREAD})"),
    ));
    Ok(report)
}

pub struct MeasurePlan {
    pub c_stars: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub instances: usize,
    pub mc_samples: usize,
    pub resolution: f64,
    pub seed: u64,
}

pub fn resolve_measure(cfg: &mut Config) -> Result<MeasurePlan, RunError> {
    cfg.require_section("measure")?;
    let defaults = Config::parse(crate::presets::MEASURE_DEFAULT).expect("built-in config");
    for key in [
        "c_star",
        "T_list",
        "trials",
        "mc_samples",
        "slice_resolution",
        "seed",
    ] {
        cfg.set_default("measure", key, defaults.raw("measure", key).unwrap());
    }
    let plan = MeasurePlan {
        c_stars: cfg.get_list("measure", "c_star")?,
        tolerances: cfg.get_list("measure", "T_list")?,
        instances: cfg.get("measure", "trials")?,
        mc_samples: cfg.get("measure", "mc_samples")?,
        resolution: cfg.get("measure", "slice_resolution")?,
        seed: cfg.get("measure", "seed")?,
    };
    if plan.tolerances.is_empty() || plan.instances == 0 || plan.mc_samples == 0 {
        return Err(bad(
            "measure",
            "T_list",
            "need at least one T, instance and sample",
        ));
    }
    Ok(plan)
}

pub fn measure(cfg: &mut Config) -> Result<Report, RunError> {
    let plan = resolve_measure(cfg)?;
    let mut table = Table::new(
        "measure.csv",
        &[
            "a1",
            "a2",
            "a3",
            "b1",
            "b2",
            "b3",
            "c_star",
            "T",
            "vol",
            "vol_stderr",
            "slice_sum",
            "slice_sup",
            "ratio",
        ],
    );
    let mut worst_ratio = 0.0f64;
    let mut worst_factor = 1.0f64;
    let mut worst_changes = 0usize;
    let mut count = 0usize;
    for &c in &plan.c_stars {
        for i in 0..plan.instances {
            let inst_seed = derive_seed(plan.seed, &[c.to_bits(), i as u64]);
            let (a, b) = random_admissible_pair(c, inst_seed);
            let mut reference = None;
            for &t in &plan.tolerances {
                let set = QuadricShellSet::new(a, b, c, t)?;
                let sc = slice_control(
                    &set,
                    plan.resolution,
                    plan.mc_samples,
                    derive_seed(inst_seed, &[t.to_bits()]),
                )?;
                worst_ratio = worst_ratio.max(sc.ratio);
                let scaled = t * sc.slice_sum;
                match reference {
                    None => reference = Some(scaled),
                    Some(r) => worst_factor = worst_factor.max((scaled / r).max(r / scaled)),
                }
                let changes = monotonicity_changes(&slice_profile(&set, plan.resolution)?)?;
                worst_changes = worst_changes.max(changes);
                let mut row: Vec<Cell> = a.iter().chain(&b).map(|&x| x.into()).collect();
                row.extend([
                    c.into(),
                    t.into(),
                    sc.volume.value.into(),
                    sc.volume.stderr.into(),
                    sc.slice_sum.into(),
                    sc.slice_sup.into(),
                    sc.ratio.into(),
                ]);
                table.push(row);
            }
            count += 1;
        }
    }

    let ball = Ball {
        center: [0.0; 3],
        radius: 1.0,
    };
    let exact = 4.0 * std::f64::consts::PI / 3.0;
    let mut within = 0usize;
    for s in 0..MC_CALIBRATION_SEEDS {
        let est = mc_volume(
            &ball,
            &ball.bounding(),
            plan.mc_samples,
            derive_seed(plan.seed, &[0xba11, s]),
        )?;
        if (est.value - exact).abs() <= 3.0 * est.stderr {
            within += 1;
        }
    }

    let mut report = Report {
        tables: vec![table],
        ..Default::default()
    };
    report.lines.push(format!(
        "{count} instances x {} tolerances, slice cell {}",
        plan.tolerances.len(),
        plan.resolution
    ));
    report.checks.push(Check::new(
        "slice-control ratio",
        worst_ratio <= SLICE_RATIO_MAX,
        format!("worst ratio {worst_ratio:.4} (limit {SLICE_RATIO_MAX})"),
    ));
    report.checks.push(Check::new(
        "T-decay of the slice sum",
        worst_factor <= T_DECAY_FACTOR,
        format!(
            "worst T*slice_sum factor vs T={} is {worst_factor:.4} (limit {T_DECAY_FACTOR})",
            plan.tolerances[0]
        ),
    ));
    report.checks.push(Check::new(
        "slice-area monotonicity changes",
        worst_changes <= MONOTONICITY_MAX,
        format!("worst {worst_changes} (limit {MONOTONICITY_MAX})"),
    ));
    report.checks.push(Check::new(
        "unit-ball Monte Carlo calibration",
        within >= MC_CALIBRATION_MIN_PASS,
        format!("{within}/{MC_CALIBRATION_SEEDS} seeds within 3 standard errors"),
    ));
    Ok(report)
}

pub fn resolve_weyl(cfg: &mut Config) -> Result<(usize, Vec<usize>), RunError> {
    cfg.require_section("weyl")?;
    cfg.set_default("weyl", "d", "2");
    cfg.set_default("weyl", "K_list", "8, 16, 32, 64, 128");
    Ok((cfg.get("weyl", "d")?, cfg.get_list("weyl", "K_list")?))
}

pub fn weyl(cfg: &mut Config) -> Result<Report, RunError> {
    let (d, ks) = resolve_weyl(cfg)?;
    let series = MomentSeries::<f64>::compute(d, &ks)?;
    let mut table = Table::new("weyl.csv", &["d", "p", "K", "moment", "normalized"]);
    let mut report = Report::default();
    for ((&k, &m), &nm) in ks.iter().zip(&series.moments).zip(&series.normalized) {
        table.push(vec![
            d.into(),
            series.p.into(),
            k.into(),
            m.into(),
            nm.into(),
        ]);
        report
            .lines
            .push(format!("  K={k:<4} moment={m:.6e} normalized={nm:.6}"));
    }
    report.tables.push(table);
    report.checks.push(Check::new(
        "normalized moment nondecreasing",
        series.is_nondecreasing(),
        format!("{:?}", series.normalized),
    ));
    if ks.len() >= 3 {
        let fit = series.log_growth_fit()?;
        report.checks.push(Check::new(
            "affine growth in log K",
            fit.r_squared >= WEYL_MIN_R2,
            format!("R^2 = {:.6}, slope {:.4}", fit.r_squared, fit.slope),
        ));
    }
    let mut worst = 0.0f64;
    for &k in ks.iter().filter(|&&k| k <= 64) {
        let exact = (2 * k * k - k) as f64;
        worst = worst.max((quartic_moment_plain::<f64>(k)? - exact).abs() / exact);
    }
    report.checks.push(Check::new(
        "quartic calibration 2K^2-K",
        worst <= QUARTIC_TOL,
        format!("max relative error {worst:.3e}"),
    ));
    Ok(report)
}

/// Integers strictly inside `(c − w, c + w)`.
fn open_interval_integers(c: f64, w: f64) -> usize {
    let lo = (c - w).floor() as i64;
    let hi = (c + w).ceil() as i64;
    (hi - lo - 1).max(0) as usize
}

pub fn counterexample(cfg: &mut Config) -> Result<Report, RunError> {
    let geometry = resolve_geometry(cfg)?;
    cfg.require_section("data")?;
    resolve_kind(cfg, "counterexample")?;
    let n1: f64 = cfg.get("data", "c_star")?;
    let n2: f64 = cfg.get("data", "ball_radius")?;
    let d = geometry.dim();
    let field = counterexample_data(&geometry, n1, n2, d)?;
    let k = torus_mode_limit(n2, d);
    let period = geometry.period();
    let coefficients = field.support().len();
    let window = open_interval_integers(n1 * period, period / 100.0);
    let expected_count = window * k.pow(d as u32 - 1);
    let l2 = l2_norm(&field);
    let l2_expected = (period * expected_count as f64).sqrt();

    let p = critical_exponent(d)?;
    let quad = EuclidQuadrature::default();
    let e0: f64 = euclid_factor(p, 0.0, &quad)?;
    let mut emin = e0;
    for i in 1..=10 {
        emin = emin.min(euclid_factor(p, i as f64 / 10.0, &quad)?);
    }
    let (ny, nt) = quadrature_floors(k, p);
    let moment: f64 = nested_moment(k, p, d, ny, nt)?;
    let normalized = moment / (k as f64).powi(d as i32 + 1);

    let mut table = Table::new(
        "counterexample.csv",
        &[
            "d",
            "N1",
            "N2",
            "K",
            "coefficients",
            "l2",
            "l2_expected",
            "euclid_factor_t0",
            "euclid_factor_min",
            "nested_moment",
            "normalized",
        ],
    );
    table.push(vec![
        d.into(),
        n1.into(),
        n2.into(),
        k.into(),
        coefficients.into(),
        l2.into(),
        l2_expected.into(),
        e0.into(),
        emin.into(),
        moment.into(),
        normalized.into(),
    ]);
    let mut report = Report {
        tables: vec![table],
        ..Default::default()
    };
    report.lines.push(format!(
        "d={d} N1={n1} N2={n2}: K={k}, {coefficients} coefficients ({window} window points), p={p}"
    ));
    report.lines.push(format!(
        "euclid factor {e0:.6e} at t=0, min over t in [0,1] {emin:.6e}; nested moment {moment:.6e} (normalized {normalized:.6})"
    ));
    report.checks.push(Check::new(
        "coefficient count",
        coefficients == expected_count,
        format!("{coefficients} vs {expected_count}"),
    ));
    report.checks.push(Check::new(
        "plancherel norm",
        (l2 - l2_expected).abs() <= 1e-10 * l2_expected,
        format!("{l2:.12e} vs {l2_expected:.12e}"),
    ));
    report.checks.push(Check::new(
        "euclid factor uniform in t",
        emin >= 0.9 * e0,
        format!("min/t0 = {:.6}", emin / e0),
    ));
    Ok(report)
}

pub fn selftest() -> Report {
    let mut report = Report::default();
    for c in selftest::run_all() {
        report.checks.push(Check::new(c.name, c.passed, c.detail));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bands() {
        assert!(scaling_band(2, 1, 4.0).unwrap().contains(0.05));
        assert!(!scaling_band(1, 2, 4.0).unwrap().contains(0.0));
        assert!(scaling_band(2, 0, 6.0).is_some());
        assert!(scaling_band(3, 0, 4.0).is_some());
        assert!(scaling_band(3, 0, 6.0).is_none());
        assert!(decay_band(2).contains(-0.5) && !decay_band(2).contains(-0.7));
        assert!(decay_band(3).contains(-1.15));
    }

    #[test]
    fn geometric_times() {
        let t = decay_times(1.0, 8.0, 4);
        for (a, b) in t.iter().zip([1.0, 2.0, 4.0, 8.0]) {
            assert!((a - b).abs() < 1e-12, "{t:?}");
        }
        assert_eq!(decay_times(2.0, 2.5, 1), vec![2.0]);
    }

    #[test]
    fn window_count() {
        assert_eq!(open_interval_integers(4096.0, 5.12), 11);
        assert_eq!(open_interval_integers(3200.0, 4.0), 7);
        assert_eq!(open_interval_integers(0.5, 0.25), 0);
    }

    #[test]
    fn scaling_resolution_fills_defaults() {
        let mut cfg = Config::parse("[geometry]\nm = 0\nn = 1\ngrid = 32\n").unwrap();
        let exp = resolve_scaling(&mut cfg).unwrap();
        assert_eq!(exp.trials, 5);
        assert_eq!(exp.frequencies, vec![4.0, 8.0, 16.0, 32.0]);
        for (s, k) in [
            ("data", "distribution"),
            ("data", "seed"),
            ("time", "nt"),
            ("experiment", "p"),
            ("experiment", "statistic"),
            ("geometry", "period"),
        ] {
            assert!(cfg.raw(s, k).is_some(), "{s}.{k}");
        }
        let mut again = Config::parse(&cfg.render()).unwrap();
        assert_eq!(resolve_scaling(&mut again).unwrap(), exp);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let mut cfg =
            Config::parse("[geometry]\nm = 0\nn = 1\ngrid = 32\n[data]\nkind = strip\n").unwrap();
        assert!(matches!(
            resolve_scaling(&mut cfg),
            Err(RunError::Config(ConfigError::BadValue { .. }))
        ));
    }
}
