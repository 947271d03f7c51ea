//! Fast identity and oracle checks bundled for the `selftest` subcommand.

use crate::datagen::{random_shell_data, CoefficientLaw};
use crate::experiments::{check_admissible, fit_loglog};
use crate::geometry::{GeometrySpec, ShellSpec};
use crate::measure::{mc_volume, monotonicity_changes, Ball, Region};
use crate::norms::{l2_norm, lp_space_norm};
use crate::spectral::{propagate, to_physical, to_spectral, SpectralField};
use crate::weyl::{
    critical_exponent, nested_moment, quadrature_floors, quartic_moment_plain, weyl_sum,
};
use crate::{Complex, Result};

/// Relative tolerance for the unitary/Fourier identities.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn max_rel_diff(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1e-300);
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
        / scale
}

fn sample_field() -> Result<SpectralField<f64>> {
    let g = GeometrySpec::new(1, 2, 4.0, vec![32, 16, 16])?;
    let shell = ShellSpec::new(3.0, 1.0)?;
    random_shell_data(&g, &shell, CoefficientLaw::ComplexGaussian, 11)
}

fn fourier_checks(out: &mut Vec<Check>) -> Result<()> {
    let f = sample_field()?;
    let l2 = l2_norm(&f);

    let mut worst = 0.0f64;
    for t in [0.1, 0.37, 2.5] {
        worst = worst.max((l2_norm(&propagate(&f, t)) - l2).abs() / l2);
    }
    out.push(check(
        "unitarity",
        worst <= IDENTITY_TOL,
        format!("max rel err {worst:.3e}"),
    ));

    let (s, t) = (0.23, 0.61);
    let lhs = propagate(&propagate(&f, s), t);
    let rhs = propagate(&f, s + t);
    let e = max_rel_diff(rhs.coeffs(), lhs.coeffs());
    out.push(check(
        "group law",
        e <= IDENTITY_TOL,
        format!("max rel err {e:.3e}"),
    ));

    let back = to_spectral(&to_physical(&f));
    let e = max_rel_diff(f.coeffs(), back.coeffs());
    out.push(check(
        "transform roundtrip",
        e <= IDENTITY_TOL,
        format!("max rel err {e:.3e}"),
    ));

    let phys = lp_space_norm(&to_physical(&propagate(&f, 0.4)), 2.0)?;
    let e = (phys - l2).abs() / l2;
    out.push(check(
        "plancherel",
        e <= IDENTITY_TOL,
        format!("rel err {e:.3e}"),
    ));
    Ok(())
}

fn fit_checks(out: &mut Vec<Check>) -> Result<()> {
    let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0]
        .iter()
        .map(|&n| (n, 3.0 * n.sqrt()))
        .collect();
    let fit = fit_loglog(&pts)?;
    let e = (fit.slope - 0.5).abs().max((fit.r_squared - 1.0).abs());
    out.push(check(
        "exact power-law fit",
        e <= 1e-12,
        format!("slope {}", fit.slope),
    ));

    let ok = check_admissible(8.0, 4.0, 0.5).is_ok()
        && check_admissible(2.0, f64::INFINITY, 1.0).is_err();
    out.push(check(
        "admissibility",
        ok,
        "(8,4) accepted; (2,inf,1) rejected".into(),
    ));
    Ok(())
}

fn weyl_checks(out: &mut Vec<Check>) -> Result<()> {
    let z = weyl_sum(3, 1.0f64 / 3.0, 0.0).norm();
    let k0 = (weyl_sum(5, 0.0f64, 0.0).re - 5.0).abs();
    out.push(check(
        "weyl sum identities",
        z < 1e-12 && k0 < 1e-12,
        format!("|S_3(1/3,0)| = {z:.1e}"),
    ));

    let mut worst = 0.0f64;
    for k in 1..=12usize {
        let exact = (2 * k * k - k) as f64;
        worst = worst.max((quartic_moment_plain::<f64>(k)? - exact).abs() / exact);
    }
    out.push(check(
        "quartic moment 2K^2-K",
        worst <= 1e-8,
        format!("max rel err {worst:.3e}"),
    ));

    let p = critical_exponent(2)?;
    let (ny, nt) = quadrature_floors(1, p);
    let m = nested_moment(1, p, 2, ny, nt)?;
    out.push(check(
        "nested moment K=1",
        (m - 1.0).abs() < 1e-12,
        format!("{m}"),
    ));
    Ok(())
}

fn measure_checks(out: &mut Vec<Check>) -> Result<()> {
    let ball = Ball {
        center: [0.0; 3],
        radius: 1.0,
    };
    let est = mc_volume(&ball, &ball.bounding(), 100_000, 0)?;
    let exact = 4.0 * std::f64::consts::PI / 3.0;
    out.push(check(
        "unit ball monte carlo",
        (est.value - exact).abs() <= 3.0 * est.stderr,
        format!("{:.5} +- {:.5}", est.value, est.stderr),
    ));
    let ok = monotonicity_changes(&[1.0, 2.0, 2.0, 3.0])? == 0
        && monotonicity_changes(&[1.0, 3.0, 2.0])? == 1;
    out.push(check(
        "monotonicity changes",
        ok,
        "[1,2,2,3] -> 0, [1,3,2] -> 1".into(),
    ));
    Ok(())
}

/// Runs every check. Errors inside a group are reported as a failed check.
pub fn run_all() -> Vec<Check> {
    type Group = fn(&mut Vec<Check>) -> Result<()>;
    let mut out = Vec::new();
    let groups: [(&'static str, Group); 4] = [
        ("fourier", fourier_checks),
        ("fit", fit_checks),
        ("weyl", weyl_checks),
        ("measure", measure_checks),
    ];
    for (name, group) in groups {
        if let Err(e) = group(&mut out) {
            out.push(check(name, false, e.to_string()));
        }
    }
    out
}
