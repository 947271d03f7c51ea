use proptest::prelude::*;

use strichartz::datagen::{random_shell_data, random_strip_data, CoefficientLaw};
use strichartz::experiments::{fit_loglog, linear_fit};
use strichartz::geometry::{
    build_lattice, mode_at, shell_indices, strip_indices, GeometrySpec, ShellSpec, StripSpec,
};
use strichartz::norms::{l2_norm, lp_space_norm, spacetime_lp_norm, strichartz_ratio, TimeGrid};
use strichartz::spectral::{propagate, to_physical, to_spectral, SpectralField};
use strichartz::{Complex64, GeometrySpec64, SpectralField64};

const TOL: f64 = 1e-10;

fn geometry() -> impl Strategy<Value = GeometrySpec64> {
    (0usize..=2, 0usize..=2, 1.0f64..4.0)
        .prop_filter("nonempty", |(m, n, _)| m + n > 0)
        .prop_flat_map(|(m, n, period)| {
            prop::collection::vec(prop::sample::select(vec![4usize, 5, 6, 8, 9]), m + n)
                .prop_map(move |grid| GeometrySpec::new(m, n, period, grid).unwrap())
        })
}

fn field() -> impl Strategy<Value = SpectralField64> {
    geometry().prop_flat_map(|g| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), g.len()).prop_map(move |c| {
            let coeffs = c
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect();
            SpectralField::new(g.clone(), coeffs).unwrap()
        })
    })
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn scale(f: &SpectralField64) -> f64 {
    f.coeffs().iter().map(|z| z.norm()).fold(1e-300, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_is_unitary(f in field(), t in -3.0f64..3.0) {
        let a = l2_norm(&f);
        let b = l2_norm(&propagate(&f, t));
        prop_assert!((a - b).abs() <= TOL * a.max(1e-300));
    }

    #[test]
    fn group_law(f in field(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let lhs = propagate(&propagate(&f, s), t);
        let rhs = propagate(&f, s + t);
        prop_assert!(max_diff(lhs.coeffs(), rhs.coeffs()) <= 1e-9 * scale(&f));
    }

    #[test]
    fn transform_roundtrip(f in field()) {
        let back = to_spectral(&to_physical(&f));
        prop_assert!(max_diff(back.coeffs(), f.coeffs()) <= TOL * scale(&f));
    }

    #[test]
    fn propagation_is_linear(f in field(), t in -2.0f64..2.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let g = propagate(&f, 0.37);
        let coeffs: Vec<Complex64> = f.coeffs().iter().zip(g.coeffs()).map(|(x, y)| x * a + y * b).collect();
        let combo = SpectralField::new(f.geometry().clone(), coeffs).unwrap();
        let lhs = propagate(&combo, t);
        let (pf, pg) = (propagate(&f, t), propagate(&g, t));
        let rhs: Vec<Complex64> = pf.coeffs().iter().zip(pg.coeffs()).map(|(x, y)| x * a + y * b).collect();
        prop_assert!(max_diff(lhs.coeffs(), &rhs) <= 1e-9 * scale(&f) * (1.0 + a.abs() + b.abs()));
    }

    #[test]
    fn plancherel(f in field()) {
        let spectral = l2_norm(&f);
        let physical = lp_space_norm(&to_physical(&f), 2.0).unwrap();
        prop_assert!((spectral - physical).abs() <= TOL * spectral.max(1e-300));
    }

    #[test]
    fn strichartz_ratio_is_homogeneous(f in field(), lambda in 0.1f64..10.0) {
        prop_assume!(l2_norm(&f) > 1e-6);
        let grid = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let a = strichartz_ratio(&f, 4.0, &grid).unwrap();
        let b = strichartz_ratio(&f.scaled(Complex64::new(lambda, 0.0)), 4.0, &grid).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a);
        let na = spacetime_lp_norm(&f, 4.0, &grid).unwrap();
        let nb = spacetime_lp_norm(&f.scaled(Complex64::new(0.0, lambda)), 4.0, &grid).unwrap();
        prop_assert!((nb - lambda * na).abs() <= 1e-9 * nb);
    }

    #[test]
    fn shell_selection_matches_brute_force(g in geometry(), c in 0.0f64..4.0, w in 0.1f64..2.0) {
        let shell = ShellSpec::new(c, w).unwrap();
        let lattice = build_lattice(&g);
        let selected = shell_indices(&lattice, &shell);
        let expected: Vec<usize> = (0..g.len())
            .filter(|&flat| {
                let r2: f64 = brute_frequency(&g, flat).iter().map(|x| x * x).sum();
                let r = r2.sqrt();
                r <= c + w + 1e-12 && r >= c - w - 1e-12
            })
            .collect();
        prop_assert_eq!(selected, expected);
    }

    #[test]
    fn strip_selection_matches_brute_force(g in geometry(), angle in 0.0f64..6.3, m in 0.2f64..2.0) {
        let dim = g.dim();
        let mut dir = vec![0.0; dim];
        dir[0] = angle.cos();
        if dim > 1 {
            dir[1] = angle.sin();
        } else {
            dir[0] = 1.0;
        }
        let strip = StripSpec::new(dir.clone(), m).unwrap();
        let selected = strip_indices(&build_lattice(&g), &strip);
        let expected: Vec<usize> = (0..g.len())
            .filter(|&flat| {
                let v = brute_frequency(&g, flat);
                v.iter().zip(&dir).map(|(x, a)| x * a).sum::<f64>().abs() <= m
            })
            .collect();
        prop_assert_eq!(selected, expected);
    }

    #[test]
    fn ball_larger_than_shell_does_not_bind(g in geometry(), c in 0.5f64..3.0, seed in any::<u64>()) {
        let shell = ShellSpec::new(c, 1.0).unwrap();
        let wide = shell.clone().with_ball(vec![0.0; g.dim()], 10.0 * (c + 1.0)).unwrap();
        let a = random_shell_data(&g, &shell, CoefficientLaw::UnitModulus, seed);
        let b = random_shell_data(&g, &wide, CoefficientLaw::UnitModulus, seed);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "ball changed emptiness"),
        }
    }

    #[test]
    fn unit_modulus_data_has_unit_coefficients(g in geometry(), seed in any::<u64>()) {
        let strip = StripSpec::new(unit_first(g.dim()), 1.0).unwrap();
        if let Ok(f) = random_strip_data(&g, &strip, None, CoefficientLaw::UnitModulus, seed) {
            for i in f.support() {
                prop_assert!((f.coeffs()[i].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn loglog_fit_is_scale_invariant(
        slope in -2.0f64..2.0,
        amp in 0.01f64..100.0,
        noise in prop::collection::vec(-0.05f64..0.05, 5),
        lambda in 0.01f64..100.0,
    ) {
        let samples: Vec<(f64, f64)> = [4.0f64, 8.0, 16.0, 32.0, 64.0]
            .iter()
            .zip(&noise)
            .map(|(&n, e)| (n, amp * n.powf(slope) * e.exp()))
            .collect();
        let scaled: Vec<(f64, f64)> = samples.iter().map(|&(n, y)| (n, lambda * y)).collect();
        let a = fit_loglog(&samples).unwrap();
        let b = fit_loglog(&scaled).unwrap();
        prop_assert!((a.slope - b.slope).abs() < 1e-9);
        prop_assert!((a.r_squared - b.r_squared).abs() < 1e-9);
        prop_assert!((b.intercept - a.intercept - lambda.ln()).abs() < 1e-9);
    }

    #[test]
    fn linear_fit_recovers_exact_lines(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let xs = [0.0, 1.0, 2.5, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-10);
        prop_assert!((fit.intercept - b).abs() < 1e-10);
    }
}

fn unit_first(dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[0] = 1.0;
    v
}

/// Frequency of a flat index, recomputed from the DFT mode convention.
fn brute_frequency(g: &GeometrySpec64, flat: usize) -> Vec<f64> {
    let grid = g.grid();
    let mut rem = flat;
    let mut idx = vec![0; grid.len()];
    for d in (0..grid.len()).rev() {
        idx[d] = rem % grid[d];
        rem /= grid[d];
    }
    idx.iter()
        .enumerate()
        .map(|(d, &i)| {
            let k = mode_at(i, grid[d]) as f64;
            if d < g.euclidean_dims() {
                k / g.period()
            } else {
                k
            }
        })
        .collect()
}

#[test]
fn mode_convention_matches_fftfreq() {
    let even: Vec<i64> = (0..6).map(|i| mode_at(i, 6)).collect();
    assert_eq!(even, vec![0, 1, 2, -3, -2, -1]);
    let odd: Vec<i64> = (0..5).map(|i| mode_at(i, 5)).collect();
    assert_eq!(odd, vec![0, 1, 2, -2, -1]);
}

#[test]
fn data_is_grid_independent() {
    let shell = ShellSpec::new(3.0, 1.0).unwrap();
    let small = GeometrySpec::new(1, 1, 2.0, vec![32, 16]).unwrap();
    let large = GeometrySpec::new(1, 1, 2.0, vec![64, 32]).unwrap();
    let a = random_shell_data(&small, &shell, CoefficientLaw::ComplexGaussian, 7).unwrap();
    let b = random_shell_data(&large, &shell, CoefficientLaw::ComplexGaussian, 7).unwrap();
    let (la, lb) = (build_lattice(&small), build_lattice(&large));
    assert_eq!(a.support().len(), b.support().len());
    for i in a.support() {
        let j = lb.index_of_modes(&la.modes(i)).unwrap();
        assert_eq!(a.coeffs()[i], b.coeffs()[j]);
    }
}

#[test]
fn f32_pipeline_agrees_with_f64() {
    let g64 = GeometrySpec::new(1, 1, 2.0, vec![16, 16]).unwrap();
    let g32 = GeometrySpec::<f32>::new(1, 1, 2.0, vec![16, 16]).unwrap();
    let f64_ = random_shell_data(
        &g64,
        &ShellSpec::new(3.0, 1.0).unwrap(),
        CoefficientLaw::UnitModulus,
        3,
    )
    .unwrap();
    let f32_ = random_shell_data(
        &g32,
        &ShellSpec::new(3.0f32, 1.0).unwrap(),
        CoefficientLaw::UnitModulus,
        3,
    )
    .unwrap();
    let r64 = strichartz_ratio(&f64_, 4.0, &TimeGrid::new(0.0, 1.0, 8).unwrap()).unwrap();
    let r32 = strichartz_ratio(&f32_, 4.0f32, &TimeGrid::new(0.0f32, 1.0, 8).unwrap()).unwrap();
    assert!((r64 - r32 as f64).abs() < 1e-4 * r64, "{r64} vs {r32}");
}
