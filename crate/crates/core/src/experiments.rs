//! Experiment drivers: shell-scaling sweeps `C(N)`, log-log regression,
//! dispersive decay of strip data and mixed-norm boundedness.
//!
//! Per-trial seeds are derived from `(base seed, N, trial)` before any work
//! is done, and trials are reduced in a fixed order, so every driver is a
//! pure function of its config.

use crate::datagen::{random_shell_data, random_strip_data, CoefficientLaw};
use crate::geometry::{build_lattice, GeometrySpec, ShellSpec, StripSpec};
use crate::norms::{l2_norm, mixed_norm, strichartz_ratio, sup_norm, TimeGrid};
use crate::rng::derive_seed;
use crate::spectral::{propagate, to_physical, SpectralField};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Max,
    Mean,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Max => "max",
            Statistic::Mean => "mean",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "max" => Some(Statistic::Max),
            "mean" => Some(Statistic::Mean),
            _ => None,
        }
    }
}

/// Frequency restriction attached to each `N` of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum RecipeTemplate<T> {
    /// Shell centred at `c_* = N` with the given half width.
    Shell {
        half_width: T,
        ball: Option<(Vec<T>, T)>,
    },
    /// Strip through the origin, translated to `N·a⊥`.
    Strip {
        direction: Vec<T>,
        half_width: T,
        envelope_sigma: Option<T>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind<T> {
    SpaceTime { p: T },
    Mixed { q: T, r: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    pub geometry: GeometrySpec<T>,
    pub template: RecipeTemplate<T>,
    pub law: CoefficientLaw,
    pub norm: NormKind<T>,
    pub time: TimeGrid<T>,
    pub frequencies: Vec<T>,
    pub trials: usize,
    pub statistic: Statistic,
    pub seed: u64,
}

impl<T: Real> ExperimentConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.frequencies.len() < 2 {
            return Err(Error::InvalidConfig(
                "the N list needs at least two entries".into(),
            ));
        }
        if !self.frequencies.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "the N list must be strictly increasing".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Aggregated ratios at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSample<T> {
    pub n: T,
    pub max: T,
    pub mean: T,
    pub trials: usize,
}

impl<T: Real> ScalingSample<T> {
    pub fn value(&self, statistic: Statistic) -> T {
        match statistic {
            Statistic::Max => self.max,
            Statistic::Mean => self.mean,
        }
    }

    fn from_trials(n: T, values: &[T]) -> Self {
        let max = values.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
        let sum = values.iter().fold(T::zero(), |a, &b| a + b);
        Self {
            n,
            max,
            mean: sum / T::from_usize_(values.len()),
            trials: values.len(),
        }
    }
}

/// Least-squares fit of `log C = slope·log N + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit<T> {
    pub samples: Vec<(T, T)>,
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    /// Standard error of the slope (zero for two samples or exact fits).
    pub slope_stderr: T,
}

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Coefficient of determination, clamped to `[0, 1]`; 1 for constant `y`.
    pub r_squared: T,
    /// Standard error of the slope (zero for two points).
    pub slope_stderr: T,
}

pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    if xs.len() != ys.len() {
        return Err(Error::ShapeMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewSamples {
            got: xs.len(),
            required: 2,
        });
    }
    let len = T::from_usize_(xs.len());
    let mx = xs.iter().fold(T::zero(), |a, &b| a + b) / len;
    let my = ys.iter().fold(T::zero(), |a, &b| a + b) / len;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == T::zero() {
        return Err(Error::InvalidConfig(
            "all abscissae coincide; slope undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = xs.iter().zip(ys).fold(T::zero(), |a, (&x, &y)| {
        let e = y - (slope * x + intercept);
        a + e * e
    });
    let r_squared = if syy == T::zero() {
        T::one()
    } else {
        (T::one() - ss_res / syy).max(T::zero()).min(T::one())
    };
    let slope_stderr = if xs.len() > 2 {
        (ss_res / (len - T::lit(2.0)) / sxx).sqrt()
    } else {
        T::zero()
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
    })
}

pub fn fit_loglog<T: Real>(samples: &[(T, T)]) -> Result<ScalingFit<T>> {
    for (i, &(n, c)) in samples.iter().enumerate() {
        for v in [n, c] {
            if !(v > T::zero()) {
                return Err(Error::NonpositiveSample {
                    index: i,
                    value: v.to_f64_(),
                });
            }
        }
    }
    let xs: Vec<T> = samples.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<T> = samples.iter().map(|&(_, c)| c.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(ScalingFit {
        samples: samples.to_vec(),
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        slope_stderr: fit.slope_stderr,
    })
}

fn trial_seed<T: Real>(base: u64, n: T, trial: usize) -> u64 {
    derive_seed(base, &[n.to_f64_().to_bits(), trial as u64])
}

fn space_time_p<T: Real>(cfg: &ExperimentConfig<T>) -> Result<T> {
    match cfg.norm {
        NormKind::SpaceTime { p } => Ok(p),
        NormKind::Mixed { .. } => Err(Error::InvalidConfig(
            "scaling sweeps use a space-time exponent p, not (q, r)".into(),
        )),
    }
}

/// `C(N)` for each configured `N`: `trials` independent draws of shell data
/// centred at `N`, each scored by [`strichartz_ratio`].
pub fn scaling_experiment<T: Real>(cfg: &ExperimentConfig<T>) -> Result<Vec<ScalingSample<T>>> {
    cfg.validate()?;
    let p = space_time_p(cfg)?;
    let RecipeTemplate::Shell { half_width, ball } = &cfg.template else {
        return Err(Error::InvalidConfig(
            "scaling sweeps need shell data".into(),
        ));
    };
    let mut out = Vec::with_capacity(cfg.frequencies.len());
    for &n in &cfg.frequencies {
        let mut shell = ShellSpec::new(n, *half_width)?;
        if let Some((center, radius)) = ball {
            shell = shell.with_ball(center.clone(), *radius)?;
        }
        let mut ratios = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = trial_seed(cfg.seed, n, trial);
            let field = random_shell_data(&cfg.geometry, &shell, cfg.law, seed)
                .map_err(|e| Error::at_frequency(n.to_f64_(), e))?;
            ratios.push(strichartz_ratio(&field, p, &cfg.time)?);
        }
        out.push(ScalingSample::from_trials(n, &ratios));
    }
    Ok(out)
}

/// Fit of the sweep under the configured statistic.
pub fn fit_samples<T: Real>(
    samples: &[ScalingSample<T>],
    statistic: Statistic,
) -> Result<ScalingFit<T>> {
    let pts: Vec<(T, T)> = samples.iter().map(|s| (s.n, s.value(statistic))).collect();
    fit_loglog(&pts)
}

/// Sharp σ-admissibility: `2 ≤ q, r ≤ ∞`, `1/q = σ(1/2 − 1/r)`,
/// `(q, r, σ) ≠ (2, ∞, 1)`. `r` may be `+∞`.
pub fn check_admissible<T: Real>(q: T, r: T, sigma: T) -> Result<()> {
    let two = T::lit(2.0);
    let err = || Error::Admissibility {
        q: q.to_f64_(),
        r: r.to_f64_(),
        sigma: sigma.to_f64_(),
    };
    if !(q >= two) || !(r >= two) {
        return Err(err());
    }
    let lhs = q.recip();
    let rhs = sigma * (T::lit(0.5) - r.recip());
    if (lhs - rhs).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
        return Err(err());
    }
    if q == two && r.is_infinite() && sigma == T::one() {
        return Err(err());
    }
    Ok(())
}

/// A unit vector orthogonal to `a` (Gram-Schmidt against the coordinate axis
/// least aligned with `a`).
pub fn orthogonal_unit<T: Real>(a: &[T]) -> Vec<T> {
    let axis = (0..a.len())
        .min_by(|&i, &j| a[i].abs().partial_cmp(&a[j].abs()).unwrap())
        .unwrap_or(0);
    let mut v: Vec<T> = (0..a.len())
        .map(|i| if i == axis { T::one() } else { T::zero() })
        .collect();
    let dot = a[axis];
    for (vi, &ai) in v.iter_mut().zip(a) {
        *vi -= dot * ai;
    }
    let norm = v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    v.iter().map(|&x| x / norm).collect()
}

/// Ratio `‖e^{itΔ}φ_N‖_{L^q L^r} / ‖φ_N‖_{L²}` where `φ_N` is the same strip
/// data translated in frequency by `N·a⊥`.
pub fn mixed_norm_experiment<T: Real>(cfg: &ExperimentConfig<T>) -> Result<Vec<ScalingSample<T>>> {
    cfg.validate()?;
    let NormKind::Mixed { q, r } = cfg.norm else {
        return Err(Error::InvalidConfig(
            "the mixed-norm experiment needs (q, r)".into(),
        ));
    };
    let d = cfg.geometry.dim();
    if d < 2 {
        return Err(Error::InvalidConfig(
            "strip estimates need at least two dimensions".into(),
        ));
    }
    let sigma = T::from_usize_(d - 1) / T::lit(2.0);
    check_admissible(q, r, sigma)?;
    let RecipeTemplate::Strip {
        direction,
        half_width,
        envelope_sigma,
    } = &cfg.template
    else {
        return Err(Error::InvalidConfig(
            "the mixed-norm experiment needs strip data".into(),
        ));
    };
    let perp = orthogonal_unit(direction);
    let mut out = Vec::with_capacity(cfg.frequencies.len());
    for &n in &cfg.frequencies {
        let offset: Vec<T> = perp.iter().map(|&x| x * n).collect();
        let strip = StripSpec::new(direction.clone(), *half_width)?.with_offset(offset);
        let mut ratios = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = derive_seed(cfg.seed, &[trial as u64]);
            let field = random_strip_data(&cfg.geometry, &strip, *envelope_sigma, cfg.law, seed)
                .map_err(|e| Error::at_frequency(n.to_f64_(), e))?;
            let l2 = l2_norm(&field);
            if l2 == T::zero() {
                return Err(Error::ZeroData);
            }
            ratios.push(mixed_norm(&field, q, r, &cfg.time)? / l2);
        }
        out.push(ScalingSample::from_trials(n, &ratios));
    }
    Ok(out)
}

/// Sup-norm decay of evolved strip data.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit<T> {
    /// `(t, ‖e^{itΔ}φ‖_∞)` pairs.
    pub samples: Vec<(T, T)>,
    pub fit: ScalingFit<T>,
    /// Estimated packet excursion `2·|ξ|_max·t_max`.
    pub excursion: T,
}

/// Envelope level below which a coefficient is ignored when estimating the
/// group velocity (three standard deviations).
const ENVELOPE_RADIUS_SIGMAS: f64 = 3.0;

fn effective_speed_bound<T: Real>(
    field: &SpectralField<T>,
    strip: &StripSpec<T>,
    sigma: Option<T>,
) -> T {
    let lattice = build_lattice(field.geometry());
    let mut vmax = T::zero();
    for i in field.support() {
        let v = lattice.frequency(i);
        if let Some(s) = sigma {
            let rel = strip.relative(&v);
            let r = rel.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
            if r > T::lit(ENVELOPE_RADIUS_SIGMAS) * s {
                continue;
            }
        }
        let norm = v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        vmax = vmax.max(norm);
    }
    vmax
}

/// Evolves strip data to each time, records the sup norm and fits the
/// log-log decay slope.
pub fn decay_experiment<T: Real>(
    geometry: &GeometrySpec<T>,
    strip: &StripSpec<T>,
    envelope_sigma: Option<T>,
    law: CoefficientLaw,
    seed: u64,
    times: &[T],
) -> Result<DecayFit<T>> {
    if times.len() < 2 {
        return Err(Error::TooFewSamples {
            got: times.len(),
            required: 2,
        });
    }
    if !(times[0] > T::zero()) || !times.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidConfig(
            "decay times must be positive and strictly increasing".into(),
        ));
    }
    let field = random_strip_data(geometry, strip, envelope_sigma, law, seed)?;
    let t_max = *times.last().unwrap();
    let excursion = T::lit(2.0) * effective_speed_bound(&field, strip, envelope_sigma) * t_max;
    let limit = (0..geometry.dim())
        .map(|d| geometry.extent(d))
        .fold(T::infinity(), |a, b| a.min(b))
        / T::lit(2.0);
    if excursion > limit {
        return Err(Error::WrapAround {
            excursion: excursion.to_f64_(),
            limit: limit.to_f64_(),
        });
    }
    let samples: Vec<(T, T)> = times
        .iter()
        .map(|&t| (t, sup_norm(&to_physical(&propagate(&field, t)))))
        .collect();
    let fit = fit_loglog(&samples)?;
    Ok(DecayFit {
        samples,
        fit,
        excursion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n.sqrt()))
            .collect();
        let fit = fit_loglog(&pts).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_relative_eq!(fit.intercept, 3.0f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn constant_series_has_zero_slope() {
        let pts = vec![(4.0, 2.0), (8.0, 2.0), (16.0, 2.0)];
        let fit = fit_loglog(&pts).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn fit_rejects_nonpositive() {
        assert!(matches!(
            fit_loglog(&[(1.0, 1.0), (2.0, 0.0)]),
            Err(Error::NonpositiveSample { index: 1, .. })
        ));
        assert!(fit_loglog(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(check_admissible(8.0, 4.0, 0.5).is_ok());
        assert!(check_admissible(2.0, f64::INFINITY, 1.0).is_err());
        assert!(check_admissible(4.0, 4.0, 0.5).is_err());
        assert!(check_admissible(f64::INFINITY, 2.0, 0.5).is_ok());
    }

    #[test]
    fn orthogonal_vector() {
        for a in [
            vec![1.0, 0.0],
            vec![0.6, 0.8],
            vec![0.0, 0.0, 1.0],
            vec![0.48, 0.6, 0.64],
        ] {
            let v = orthogonal_unit(&a);
            let dot: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(dot.abs() < 1e-14);
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn config_validation() {
        let g = GeometrySpec::new(0, 1, 1.0, vec![16]).unwrap();
        let mut cfg = ExperimentConfig {
            geometry: g,
            template: RecipeTemplate::Shell {
                half_width: 1.0,
                ball: None,
            },
            law: CoefficientLaw::UnitModulus,
            norm: NormKind::SpaceTime { p: 4.0 },
            time: TimeGrid::new(0.0, 1.0, 4).unwrap(),
            frequencies: vec![2.0, 4.0],
            trials: 1,
            statistic: Statistic::Max,
            seed: 0,
        };
        assert!(cfg.validate().is_ok());
        cfg.frequencies = vec![4.0, 2.0];
        assert!(cfg.validate().is_err());
        cfg.frequencies = vec![4.0];
        assert!(cfg.validate().is_err());
        cfg.frequencies = vec![2.0, 4.0];
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_shell_reports_frequency() {
        let g = GeometrySpec::new(0, 1, 1.0, vec![8]).unwrap();
        let cfg = ExperimentConfig {
            geometry: g,
            template: RecipeTemplate::Shell {
                half_width: 0.5,
                ball: None,
            },
            law: CoefficientLaw::UnitModulus,
            norm: NormKind::SpaceTime { p: 4.0 },
            time: TimeGrid::new(0.0, 1.0, 4).unwrap(),
            frequencies: vec![2.0, 40.0],
            trials: 1,
            statistic: Statistic::Max,
            seed: 0,
        };
        match scaling_experiment(&cfg) {
            Err(Error::AtFrequency { n, source }) => {
                assert_eq!(n, 40.0);
                assert!(matches!(*source, Error::EmptyShell { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_mode_decay_is_flat() {
        // The strip holds the whole ξ₁ = 0 column, but the narrow envelope
        // leaves only ξ = 0 with non-negligible weight, so |u| is constant.
        let g = GeometrySpec::<f64>::new(2, 0, 8.0, vec![8, 8]).unwrap();
        let strip = StripSpec::new(vec![1.0, 0.0], 0.01).unwrap();
        let fit = decay_experiment(
            &g,
            &strip,
            Some(0.01),
            CoefficientLaw::Coherent,
            0,
            &[1.0, 2.0, 4.0, 8.0],
        );
        let fit = fit.unwrap();
        assert!(fit.fit.slope.abs() < 1e-6, "slope {}", fit.fit.slope);
    }

    #[test]
    fn wraparound_is_flagged() {
        let g = GeometrySpec::new(2, 0, 4.0, vec![32, 32]).unwrap();
        let strip = StripSpec::new(vec![1.0, 0.0], 0.3).unwrap();
        let err = decay_experiment(
            &g,
            &strip,
            Some(1.0),
            CoefficientLaw::Coherent,
            0,
            &[1.0, 2.0, 4.0, 8.0],
        )
        .unwrap_err();
        assert!(matches!(err, Error::WrapAround { .. }));
    }
}
