//! Plancherel, spatial, space-time and mixed Lebesgue norms of free waves.
//!
//! Spatial integrals are grid Riemann sums (`cell volume × Σ`); time integrals
//! use the midpoint rule of a [`TimeGrid`]. Sums over time samples are reduced
//! in increasing time order.

use std::sync::Mutex;

use crate::geometry::build_lattice;
use crate::spectral::{Evolver, PhysicalField, SpectralField};
use crate::{Complex, Error, Real, Result};

/// Midpoint rule on `[t0, t1]` with `samples` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t0: T,
    t1: T,
    samples: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t0: T, t1: T, samples: usize) -> Result<Self> {
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidSpec {
                what: "time grid",
                reason: format!("need t1 > t0, got [{t0}, {t1}]"),
            });
        }
        if samples == 0 {
            return Err(Error::InvalidSpec {
                what: "time grid",
                reason: "need at least one sample".into(),
            });
        }
        Ok(Self { t0, t1, samples })
    }

    /// `[0, 1]` with 64 midpoints.
    pub fn unit_default() -> Self {
        Self {
            t0: T::zero(),
            t1: T::one(),
            samples: 64,
        }
    }

    pub fn start(&self) -> T {
        self.t0
    }

    pub fn end(&self) -> T {
        self.t1
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn span(&self) -> T {
        self.t1 - self.t0
    }

    pub fn step(&self) -> T {
        self.span() / T::from_usize_(self.samples)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        let dt = self.step();
        (0..self.samples).map(move |i| self.t0 + (T::from_usize_(i) + T::lit(0.5)) * dt)
    }

    /// Same rule with `factor` times as many nodes.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            samples: self.samples * factor.max(1),
            ..*self
        }
    }

    pub fn shifted(&self, s: T) -> Self {
        Self {
            t0: self.t0 + s,
            t1: self.t1 + s,
            ..*self
        }
    }
}

fn check_exponent<T: Real>(name: &'static str, p: T) -> Result<()> {
    if p >= T::one() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec {
            what: name,
            reason: format!("exponent must lie in [1, inf), got {p}"),
        })
    }
}

/// `Σ |z|^p` with exact integer powers when `p` is an even integer.
fn sum_abs_pow<T: Real>(values: &[Complex<T>], p: T) -> T {
    let half = p / T::lit(2.0);
    if half == half.floor() && half <= T::lit(16.0) {
        let k = half.to_f64_() as i32;
        values
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr().powi(k))
    } else {
        values
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr().powf(half))
    }
}

/// Plancherel norm `(Pᵐ Σ |f(ξ)|²)^{1/2}`.
pub fn l2_norm<T: Real>(field: &SpectralField<T>) -> T {
    (field.geometry().volume() * field.coefficient_energy()).sqrt()
}

pub fn lp_space_norm<T: Real>(field: &PhysicalField<T>, p: T) -> Result<T> {
    check_exponent("L^p norm", p)?;
    let cell = field.geometry().cell_volume();
    Ok((sum_abs_pow(field.samples(), p) * cell).powf(p.recip()))
}

pub fn sup_norm<T: Real>(field: &PhysicalField<T>) -> T {
    field
        .samples()
        .iter()
        .fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// Coefficients below this fraction of the largest modulus are ignored when
/// estimating the bandwidth (Gaussian envelopes never vanish exactly).
pub const BANDWIDTH_CUTOFF: f64 = 1e-8;

/// Whether the grid Riemann sum of `|u|^p` may alias for this support,
/// i.e. `⌈p/2⌉·(k_max − k_min) ≥ G` along some direction.
pub fn exceeds_nyquist_budget<T: Real>(field: &SpectralField<T>, p: T) -> bool {
    let peak = field
        .coeffs()
        .iter()
        .fold(T::zero(), |m, z| m.max(z.norm()));
    if peak == T::zero() {
        return false;
    }
    let floor = peak * T::lit(BANDWIDTH_CUTOFF);
    let support: Vec<usize> = field
        .support()
        .into_iter()
        .filter(|&i| field.coeffs()[i].norm() > floor)
        .collect();
    let lattice = build_lattice(field.geometry());
    let dim = lattice.dim();
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for &i in &support {
        for (d, k) in lattice.modes(i).into_iter().enumerate() {
            lo[d] = lo[d].min(k);
            hi[d] = hi[d].max(k);
        }
    }
    let half = (p / T::lit(2.0)).ceil().to_f64_();
    (0..dim).any(|d| half * (hi[d] - lo[d]) as f64 >= field.geometry().grid()[d] as f64)
}

/// Warns once per distinct `(grid, p)` for the lifetime of the process.
fn warn_aliasing<T: Real>(field: &SpectralField<T>, p: T) {
    static SEEN: Mutex<Vec<(Vec<usize>, u64)>> = Mutex::new(Vec::new());
    if !exceeds_nyquist_budget(field, p) {
        return;
    }
    let key = (field.geometry().grid().to_vec(), p.to_f64_().to_bits());
    let mut seen = SEEN.lock().unwrap_or_else(|e| e.into_inner());
    if !seen.contains(&key) {
        log::warn!(
            "grid {:?} under-resolves |u|^{p}: the spatial Riemann sum aliases",
            key.0
        );
        seen.push(key);
    }
}

/// Per-time `Σ_x |e^{itΔ}f(x)|^r` (no cell factor), in time order.
fn power_sums<T: Real>(field: &SpectralField<T>, r: T, grid: &TimeGrid<T>) -> Vec<T> {
    let mut evolver = Evolver::new(field.geometry());
    let mut buf = Vec::new();
    grid.times()
        .map(|t| {
            evolver.evolve_into(field, t, &mut buf);
            sum_abs_pow(&buf, r)
        })
        .collect()
}

/// `‖e^{itΔ}f‖_{L^p_{t,x}}` over the time grid.
pub fn spacetime_lp_norm<T: Real>(field: &SpectralField<T>, p: T, grid: &TimeGrid<T>) -> Result<T> {
    check_exponent("space-time norm", p)?;
    warn_aliasing(field, p);
    let cell = field.geometry().cell_volume();
    let total = power_sums(field, p, grid)
        .into_iter()
        .fold(T::zero(), |acc, s| acc + s);
    Ok((total * cell * grid.step()).powf(p.recip()))
}

/// `‖e^{itΔ}f‖_{L^q_t L^r_x}` over the time grid.
pub fn mixed_norm<T: Real>(field: &SpectralField<T>, q: T, r: T, grid: &TimeGrid<T>) -> Result<T> {
    check_exponent("mixed norm (q)", q)?;
    check_exponent("mixed norm (r)", r)?;
    warn_aliasing(field, r);
    let cell = field.geometry().cell_volume();
    let total = power_sums(field, r, grid)
        .into_iter()
        .fold(T::zero(), |acc, s| acc + (s * cell).powf(q / r));
    Ok((total * grid.step()).powf(q.recip()))
}

/// `‖e^{itΔ}f‖_{L^p_{t,x}} / ‖f‖_{L²}`.
pub fn strichartz_ratio<T: Real>(field: &SpectralField<T>, p: T, grid: &TimeGrid<T>) -> Result<T> {
    let l2 = l2_norm(field);
    if l2 == T::zero() {
        return Err(Error::ZeroData);
    }
    Ok(spacetime_lp_norm(field, p, grid)? / l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometrySpec;
    use crate::spectral::to_physical;
    use approx::assert_relative_eq;

    fn single_mode(coef: Complex<f64>) -> SpectralField<f64> {
        let g = GeometrySpec::new(2, 1, 4.0, vec![8, 8, 4]).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.coeffs_mut()[8 * 4 + 3] = coef;
        f
    }

    #[test]
    fn zero_field_norms_vanish() {
        let g = GeometrySpec::new(1, 1, 4.0, vec![8, 4]).unwrap();
        let f = SpectralField::<f64>::zeros(&g);
        assert_eq!(l2_norm(&f), 0.0);
        let u = to_physical(&f);
        assert_eq!(lp_space_norm(&u, 3.0).unwrap(), 0.0);
        assert_eq!(sup_norm(&u), 0.0);
        assert_eq!(
            strichartz_ratio(&f, 4.0, &TimeGrid::unit_default()),
            Err(Error::ZeroData)
        );
    }

    #[test]
    fn plancherel_single_coefficient() {
        let g = GeometrySpec::new(2, 0, 16.0, vec![8, 8]).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.coeffs_mut()[5] = Complex::new(0.6, 0.8);
        assert_relative_eq!(l2_norm(&f), 16.0, max_relative = 1e-15);
    }

    #[test]
    fn constant_field_lp() {
        let g = GeometrySpec::new(1, 1, 3.0, vec![6, 4]).unwrap();
        let u = PhysicalField::new(g, vec![Complex::new(0.0, 2.5); 24]).unwrap();
        for p in [1.0, 2.0, 3.5, 4.0] {
            assert_relative_eq!(
                lp_space_norm(&u, p).unwrap(),
                2.5 * 3.0f64.powf(1.0 / p),
                max_relative = 1e-14
            );
        }
        assert!(lp_space_norm(&u, 0.5).is_err());
        assert_eq!(sup_norm(&u), 2.5);
    }

    #[test]
    fn single_mode_spacetime_and_mixed() {
        let coef = Complex::new(0.3, -0.4);
        let f = single_mode(coef);
        let tg = TimeGrid::new(0.0, 2.0, 8).unwrap();
        let vol: f64 = 16.0;
        for p in [2.0, 4.0, 5.0] {
            let expect = 0.5 * (2.0 * vol).powf(1.0 / p);
            assert_relative_eq!(
                spacetime_lp_norm(&f, p, &tg).unwrap(),
                expect,
                max_relative = 1e-12
            );
        }
        let expect = 0.5 * 2.0f64.powf(1.0 / 8.0) * vol.powf(0.25);
        assert_relative_eq!(
            mixed_norm(&f, 8.0, 4.0, &tg).unwrap(),
            expect,
            max_relative = 1e-12
        );
        let ratio = strichartz_ratio(&f, 4.0, &tg).unwrap();
        assert_relative_eq!(
            ratio,
            (2.0 * vol).powf(0.25) / vol.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn time_grid_nodes() {
        let tg = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let t: Vec<f64> = tg.times().collect();
        assert_eq!(t, vec![0.125, 0.375, 0.625, 0.875]);
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert_eq!(tg.refined(2).samples(), 8);
    }

    #[test]
    fn nyquist_budget() {
        let g = GeometrySpec::new(0, 1, 1.0, vec![16]).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.coeffs_mut()[1] = Complex::new(1.0, 0.0);
        f.coeffs_mut()[4] = Complex::new(1.0, 0.0);
        assert!(!exceeds_nyquist_budget(&f, 4.0));
        f.coeffs_mut()[12] = Complex::new(1.0, 0.0); // mode −4
        assert!(exceeds_nyquist_budget(&f, 4.0));
    }
}
