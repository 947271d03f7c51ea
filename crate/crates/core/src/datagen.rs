//! Frequency-restricted initial data.
//!
//! Random coefficients are drawn per lattice mode: the stream for a mode is
//! keyed by `(seed, integer modes)`, so a given frequency receives the same
//! value regardless of grid size or of which other frequencies are active.
//! Strip data is keyed by the mode relative to the strip offset, which makes
//! translating the strip translate the data.

use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::geometry::{
    build_lattice, position_of, shell_indices, strip_indices, GeometrySpec, ShellSpec, StripSpec,
};
use crate::rng::{mode_seed, stream};
use crate::spectral::{unit_phase, SpectralField};
use crate::{Complex, Error, Real, Result};

/// Coefficient law on the active index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientLaw {
    /// `e^{2πiθ}` with `θ` uniform on `[0, 1)`.
    UnitModulus,
    /// Circular complex Gaussian with `E|z|² = 1`.
    ComplexGaussian,
    /// Every coefficient equal to 1 (no randomness).
    Coherent,
}

impl CoefficientLaw {
    pub fn name(self) -> &'static str {
        match self {
            CoefficientLaw::UnitModulus => "unit-modulus",
            CoefficientLaw::ComplexGaussian => "complex-gaussian",
            CoefficientLaw::Coherent => "coherent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "unit-modulus" | "unit-modulus-random-phase" => Some(CoefficientLaw::UnitModulus),
            "complex-gaussian" => Some(CoefficientLaw::ComplexGaussian),
            "coherent" => Some(CoefficientLaw::Coherent),
            _ => None,
        }
    }

    fn draw<T: Real>(self, seed: u64, modes: &[i64]) -> Complex<T> {
        match self {
            CoefficientLaw::Coherent => Complex::new(T::one(), T::zero()),
            CoefficientLaw::UnitModulus => {
                let theta: f64 = stream(mode_seed(seed, modes)).random();
                unit_phase(T::lit(theta))
            }
            CoefficientLaw::ComplexGaussian => {
                let mut rng = stream(mode_seed(seed, modes));
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Complex::new(T::lit(re * s), T::lit(im * s))
            }
        }
    }
}

/// What to generate, independent of the grid it is generated on.
#[derive(Debug, Clone, PartialEq)]
pub enum RecipeKind<T> {
    Shell(ShellSpec<T>),
    /// `envelope_sigma = None` means no envelope (σ = ∞).
    Strip {
        strip: StripSpec<T>,
        envelope_sigma: Option<T>,
    },
    Counterexample {
        n1: T,
        n2: T,
        d: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataRecipe<T> {
    pub kind: RecipeKind<T>,
    pub law: CoefficientLaw,
    pub seed: u64,
}

impl<T: Real> DataRecipe<T> {
    pub fn generate(&self, geometry: &GeometrySpec<T>) -> Result<SpectralField<T>> {
        match &self.kind {
            RecipeKind::Shell(shell) => random_shell_data(geometry, shell, self.law, self.seed),
            RecipeKind::Strip {
                strip,
                envelope_sigma,
            } => random_strip_data(geometry, strip, *envelope_sigma, self.law, self.seed),
            RecipeKind::Counterexample { n1, n2, d } => counterexample_data(geometry, *n1, *n2, *d),
        }
    }
}

pub fn random_shell_data<T: Real>(
    geometry: &GeometrySpec<T>,
    shell: &ShellSpec<T>,
    law: CoefficientLaw,
    seed: u64,
) -> Result<SpectralField<T>> {
    let lattice = build_lattice(geometry);
    let active = shell_indices(&lattice, shell);
    if active.is_empty() {
        return Err(Error::EmptyShell {
            c_star: shell.c_star().to_f64_(),
            width: shell.half_width().to_f64_(),
            spacings: lattice.spacings().iter().map(|s| s.to_f64_()).collect(),
        });
    }
    let mut field = SpectralField::zeros(geometry);
    let coeffs = field.coeffs_mut();
    for i in active {
        coeffs[i] = law.draw(seed, &lattice.modes(i));
    }
    Ok(field)
}

/// Strip-supported data with optional Gaussian envelope
/// `e^{−|v − offset|²/(2σ²)}` around the strip offset.
pub fn random_strip_data<T: Real>(
    geometry: &GeometrySpec<T>,
    strip: &StripSpec<T>,
    envelope_sigma: Option<T>,
    law: CoefficientLaw,
    seed: u64,
) -> Result<SpectralField<T>> {
    if let Some(s) = envelope_sigma {
        if !(s > T::zero()) {
            return Err(Error::InvalidSpec {
                what: "strip envelope",
                reason: format!("sigma must be > 0, got {s}"),
            });
        }
    }
    let lattice = build_lattice(geometry);
    let active = strip_indices(&lattice, strip);
    if active.is_empty() {
        return Err(Error::EmptyStrip {
            half_width: strip.half_width().to_f64_(),
            spacings: lattice.spacings().iter().map(|s| s.to_f64_()).collect(),
        });
    }
    // Offset in integer modes, rounded to the nearest lattice point.
    let offset_modes: Vec<i64> = match strip.offset() {
        Some(o) => o
            .iter()
            .enumerate()
            .map(|(d, &x)| (x * geometry.extent(d)).round().to_f64_() as i64)
            .collect(),
        None => vec![0; geometry.dim()],
    };
    let mut field = SpectralField::zeros(geometry);
    let coeffs = field.coeffs_mut();
    for i in active {
        let rel_modes: Vec<i64> = lattice
            .modes(i)
            .iter()
            .zip(&offset_modes)
            .map(|(k, o)| k - o)
            .collect();
        let mut z = law.draw::<T>(seed, &rel_modes);
        if let Some(sigma) = envelope_sigma {
            let rel = strip.relative(&lattice.frequency(i));
            let r2 = rel.iter().fold(T::zero(), |a, &x| a + x * x);
            z *= (-(r2 / (T::lit(2.0) * sigma * sigma))).exp();
        }
        coeffs[i] = z;
    }
    Ok(field)
}

/// Euclidean lattice points required inside the width-1/50 window.
pub const MIN_WINDOW_POINTS: usize = 8;

/// Largest `K` with `d·K² ≤ N₂`, i.e. `⌊d^{−1/2} N₂^{1/2}⌋`.
pub fn torus_mode_limit<T: Real>(n2: T, d: usize) -> usize {
    let dd = T::from_usize_(d);
    let mut k = (n2 / dd).sqrt().floor().to_f64_().max(0.0) as usize;
    while dd * T::from_usize_((k + 1) * (k + 1)) <= n2 {
        k += 1;
    }
    while k > 0 && dd * T::from_usize_(k * k) > n2 {
        k -= 1;
    }
    k
}

/// Indicator data equal to 1 on `{ξ₁ ∈ (N₁ − 1/100, N₁ + 1/100)} ×
/// {1 ≤ n_j ≤ ⌊d^{−1/2}N₂^{1/2}⌋}` on `ℝ×𝕋^{d−1}`.
pub fn counterexample_data<T: Real>(
    geometry: &GeometrySpec<T>,
    n1: T,
    n2: T,
    d: usize,
) -> Result<SpectralField<T>> {
    if d < 2 || geometry.euclidean_dims() != 1 || geometry.torus_dims() != d - 1 {
        return Err(Error::InvalidGeometry {
            field: "m, n",
            reason: format!(
                "counter-example data needs m = 1 and n = d - 1 = {}, got m = {}, n = {}",
                d.saturating_sub(1),
                geometry.euclidean_dims(),
                geometry.torus_dims()
            ),
        });
    }
    let lattice = build_lattice(geometry);
    let period = geometry.period();
    let g1 = geometry.grid()[0];
    if n1 + T::lit(0.01) > lattice.max_abs_frequency(0) {
        return Err(Error::RangeExceeded {
            mode: (n1 * period).ceil().to_f64_() as i64,
            max: (g1 / 2) as i64 - 1,
        });
    }
    let hundred = T::lit(100.0);
    let window: Vec<usize> = (0..g1)
        .filter(|&i| hundred * (lattice.frequencies(0)[i] * period - n1 * period).abs() < period)
        .collect();
    if window.len() < MIN_WINDOW_POINTS {
        return Err(Error::ResolutionTooCoarse {
            points: window.len(),
            required: MIN_WINDOW_POINTS,
            spacing: period.recip().to_f64_(),
        });
    }
    let k_max = torus_mode_limit(n2, d);
    if k_max == 0 {
        return Err(Error::InvalidSpec {
            what: "counter-example",
            reason: format!("N2 = {n2} leaves no torus mode 1 <= n_j <= (N2/d)^(1/2)"),
        });
    }
    for &g in &geometry.grid()[1..] {
        if position_of(k_max as i64, g).is_none() {
            return Err(Error::RangeExceeded {
                mode: k_max as i64,
                max: (g / 2) as i64 - 1,
            });
        }
    }

    let mut field = SpectralField::zeros(geometry);
    let one = Complex::new(T::one(), T::zero());
    let tdims = d - 1;
    let combos = k_max.pow(tdims as u32);
    let mut modes = vec![0i64; d];
    for &i in &window {
        modes[0] = crate::geometry::mode_at(i, g1);
        for c in 0..combos {
            let mut rest = c;
            for slot in modes[1..].iter_mut() {
                *slot = (rest % k_max) as i64 + 1;
                rest /= k_max;
            }
            let flat = lattice.index_of_modes(&modes).expect("checked range");
            field.coeffs_mut()[flat] = one;
        }
    }
    Ok(field)
}
