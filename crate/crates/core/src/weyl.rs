//! Quadratic Weyl sums `S_K(y, t) = Σ_{k=1}^{K} e^{2πi(yk + tk²)}` and the
//! moments that certify the counter-example on `ℝ×𝕋^{d−1}`.
//!
//! Nested moments use a tensor midpoint rule. For each time node the `y`
//! samples come from one inverse FFT of the coefficients `e^{2πi tk²}`, so a
//! moment costs `n_t · O(n_y log n_y)`.

use gauss_quad::GaussLegendre;
use rustfft::FftPlanner;

use crate::experiments::{linear_fit, LinearFit};
use crate::spectral::unit_phase;
use crate::{Complex, Error, Real, Result};

/// Direct summation of `S_K(y, t)`.
pub fn weyl_sum<T: Real>(k_max: usize, y: T, t: T) -> Complex<T> {
    (1..=k_max).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
        let kf = T::from_usize_(k);
        // Reduce each phase separately to keep large `tk²` accurate.
        let ty = (y * kf).fract() + (t * kf * kf).fract();
        acc + unit_phase(ty)
    })
}

/// The exponent `2(d+1)/(d−1)` paired with `d` in the nested moment.
pub fn critical_exponent(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidSpec {
            what: "nested moment",
            reason: format!("need d >= 2, got {d}"),
        });
    }
    Ok(2.0 * (d as f64 + 1.0) / (d as f64 - 1.0))
}

/// Minimal `(n_y, n_t)`: `⌈p⌉·K + 1` and `⌈p⌉·K² + 1`.
pub fn quadrature_floors(k_max: usize, p: f64) -> (usize, usize) {
    let c = p.ceil() as usize;
    (c * k_max + 1, c * k_max * k_max + 1)
}

/// `Σ_t (mean_y |S|^p)^{d−1} / n_t` with `y` nodes shifted by `y_shift`.
fn tensor_midpoint<T: Real>(
    k_max: usize,
    p: T,
    outer_power: usize,
    n_y: usize,
    n_t: usize,
    y_shift: T,
) -> T {
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft_inverse(n_y);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n_y];
    let half = T::lit(0.5);
    let ny = T::from_usize_(n_y);
    let nt = T::from_usize_(n_t);
    // y_j = (j + 1/2)/n_y + shift, so the k-th coefficient picks up
    // e^{2πi k(1/2n_y + shift)} on top of the FFT kernel e^{2πi jk/n_y}.
    let y_phase: Vec<Complex<T>> = (0..=k_max)
        .map(|k| {
            let kf = T::from_usize_(k);
            unit_phase((kf * half / ny).fract() + (kf * y_shift).fract())
        })
        .collect();
    let even_half = {
        let h = p / T::lit(2.0);
        (h == h.floor() && h <= T::lit(16.0)).then(|| h.to_f64_() as i32)
    };
    let mut total = T::zero();
    for i in 0..n_t {
        buf.iter_mut()
            .for_each(|z| *z = Complex::new(T::zero(), T::zero()));
        for k in 1..=k_max {
            // t·k² reduced modulo 1 exactly: t = (2i+1)/(2n_t).
            let num = ((2 * i as u64 + 1) * (k * k) as u64) % (2 * n_t as u64);
            let phase = T::from_usize_(num as usize) / (T::lit(2.0) * nt);
            buf[k] = unit_phase(phase) * y_phase[k];
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        let inner = match even_half {
            Some(e) => buf.iter().fold(T::zero(), |a, z| a + z.norm_sqr().powi(e)),
            None => buf
                .iter()
                .fold(T::zero(), |a, z| a + z.norm_sqr().powf(p * half)),
        } / ny;
        total += inner.powi(outer_power as i32);
    }
    total / nt
}

/// `∫₀¹∫₀¹ |S_K(y, t)|⁴ dy dt` on the `(4K+1) × (4K²+1)` midpoint grid,
/// which integrates this trigonometric polynomial exactly.
pub fn quartic_moment_plain<T: Real>(k_max: usize) -> Result<T> {
    if k_max == 0 {
        return Err(Error::InvalidSpec {
            what: "quartic moment",
            reason: "need K >= 1".into(),
        });
    }
    let (n_y, n_t) = quadrature_floors(k_max, 4.0);
    Ok(tensor_midpoint(k_max, T::lit(4.0), 1, n_y, n_t, T::zero()))
}

/// `∫₀¹ (∫₀¹ |S_K(y, t)|^p dy)^{d−1} dt` with `p = 2(d+1)/(d−1)`.
pub fn nested_moment<T: Real>(k_max: usize, p: T, d: usize, n_y: usize, n_t: usize) -> Result<T> {
    nested_moment_shifted(k_max, p, d, n_y, n_t, T::zero())
}

/// [`nested_moment`] with the `y` nodes translated by `y_shift`.
pub fn nested_moment_shifted<T: Real>(
    k_max: usize,
    p: T,
    d: usize,
    n_y: usize,
    n_t: usize,
    y_shift: T,
) -> Result<T> {
    if k_max == 0 {
        return Err(Error::InvalidSpec {
            what: "nested moment",
            reason: "need K >= 1".into(),
        });
    }
    let expected = critical_exponent(d)?;
    if (p.to_f64_() - expected).abs() > 1e-12 {
        return Err(Error::InvalidSpec {
            what: "nested moment",
            reason: format!("p must equal 2(d+1)/(d-1) = {expected} for d = {d}, got {p}"),
        });
    }
    let (fy, ft) = quadrature_floors(k_max, p.to_f64_());
    if n_y < fy {
        return Err(Error::QuadratureUnderResolved {
            what: "n_y",
            got: n_y,
            required: fy,
        });
    }
    if n_t < ft {
        return Err(Error::QuadratureUnderResolved {
            what: "n_t",
            got: n_t,
            required: ft,
        });
    }
    Ok(tensor_midpoint(k_max, p, d - 1, n_y, n_t, y_shift))
}

/// Nested moments over a `K` sweep, normalised by `K^{d+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeries<T> {
    pub d: usize,
    pub p: T,
    pub ks: Vec<usize>,
    pub moments: Vec<T>,
    pub normalized: Vec<T>,
}

impl<T: Real> MomentSeries<T> {
    /// Runs [`nested_moment`] at the quadrature floors for each `K`.
    pub fn compute(d: usize, ks: &[usize]) -> Result<Self> {
        if ks.is_empty() || !ks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "the K list must be nonempty and strictly increasing".into(),
            ));
        }
        let p = critical_exponent(d)?;
        let mut moments = Vec::with_capacity(ks.len());
        let mut normalized = Vec::with_capacity(ks.len());
        for &k in ks {
            let (n_y, n_t) = quadrature_floors(k, p);
            let m = nested_moment(k, T::lit(p), d, n_y, n_t)?;
            log::debug!("nested moment d={d} K={k}: {m}");
            moments.push(m);
            normalized.push(m / T::from_usize_(k).powi(d as i32 + 1));
        }
        Ok(Self {
            d,
            p: T::lit(p),
            ks: ks.to_vec(),
            moments,
            normalized,
        })
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.normalized.windows(2).all(|w| w[1] >= w[0])
    }

    /// Fit of the normalised moment against `log K`.
    pub fn log_growth_fit(&self) -> Result<LinearFit<T>> {
        let xs: Vec<T> = self.ks.iter().map(|&k| T::from_usize_(k).ln()).collect();
        linear_fit(&xs, &self.normalized)
    }
}

/// Half-width of the Euclidean frequency window.
pub const EUCLID_HALF_WIDTH: f64 = 0.01;

/// Composite Gauss-Legendre settings for [`euclid_factor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclidQuadrature {
    /// Truncation `[−S, S]` of the outer integral.
    pub s_max: f64,
    /// Outer panel width in `s`.
    pub panel: f64,
    /// Gauss-Legendre nodes per panel (inner and outer).
    pub order: usize,
}

impl Default for EuclidQuadrature {
    fn default() -> Self {
        Self {
            s_max: 400.0,
            panel: 2.5,
            order: 16,
        }
    }
}

impl EuclidQuadrature {
    /// Same truncation with panels `factor` times narrower.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            panel: self.panel / factor.max(1) as f64,
            ..*self
        }
    }
}

/// `∫_{−S}^{S} |∫_{−1/100}^{1/100} e^{2πi(sη + tη²)} dη|^p ds`.
pub fn euclid_factor<T: Real>(p: T, t: T, quad: &EuclidQuadrature) -> Result<T> {
    if !(p >= T::lit(2.0)) || !p.is_finite() {
        return Err(Error::InvalidSpec {
            what: "euclid factor",
            reason: format!("need p >= 2, got {p}"),
        });
    }
    if !(quad.s_max >= 400.0) || !(quad.panel > 0.0) || quad.order < 2 {
        return Err(Error::InvalidSpec {
            what: "euclid factor",
            reason: format!("need S >= 400, panel > 0, order >= 2; got {quad:?}"),
        });
    }
    let rule = GaussLegendre::new(quad.order).map_err(|e| Error::InvalidSpec {
        what: "euclid factor",
        reason: e.to_string(),
    })?;
    let nodes = rule.as_node_weight_pairs();
    let w = EUCLID_HALF_WIDTH;
    let t = t.to_f64_();
    let p = p.to_f64_();
    let inner = |s: f64| -> f64 {
        // At most a quarter oscillation per panel.
        let panels = ((2.0 * w * (s.abs() + 2.0 * t.abs() * w)) * 4.0)
            .ceil()
            .max(1.0) as usize;
        let h = 2.0 * w / panels as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..panels {
            let c = -w + (j as f64 + 0.5) * h;
            for &(x, wt) in nodes {
                let eta = c + 0.5 * h * x;
                let ph = 2.0 * std::f64::consts::PI * (s * eta + t * eta * eta);
                re += wt * ph.cos();
                im += wt * ph.sin();
            }
        }
        let scale = 0.5 * h;
        ((re * scale).powi(2) + (im * scale).powi(2)).powf(0.5 * p)
    };
    let panels = (2.0 * quad.s_max / quad.panel).ceil() as usize;
    let h = 2.0 * quad.s_max / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let c = -quad.s_max + (j as f64 + 0.5) * h;
        total += nodes
            .iter()
            .map(|&(x, wt)| wt * inner(c + 0.5 * h * x))
            .sum::<f64>()
            * 0.5
            * h;
    }
    Ok(T::lit(total))
}
