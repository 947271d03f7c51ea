//! Grid Fourier analysis and the exact free Schrödinger propagator.
//!
//! Synthesis is the plain sum `u(x) = Σ_ξ f(ξ) e^{2πi x·ξ}` over the lattice
//! evaluated at `x_j = j·(cell width)`; analysis divides by the number of grid
//! points, so the two are exact inverses.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::geometry::{build_lattice, GeometrySpec};
use crate::{Complex, Error, Real, Result};

/// Fourier coefficients over the full frequency lattice, flat row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    geometry: GeometrySpec<T>,
    coeffs: Vec<Complex<T>>,
}

/// Samples over the spatial grid, flat row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField<T> {
    geometry: GeometrySpec<T>,
    samples: Vec<Complex<T>>,
}

fn check_values<T: Real>(geometry: &GeometrySpec<T>, values: &[Complex<T>]) -> Result<()> {
    if values.len() != geometry.len() {
        return Err(Error::ShapeMismatch {
            expected: geometry.len(),
            got: values.len(),
        });
    }
    if values
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::InvalidSpec {
            what: "field",
            reason: "entries must be finite".into(),
        });
    }
    Ok(())
}

impl<T: Real> SpectralField<T> {
    pub fn new(geometry: GeometrySpec<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_values(&geometry, &coeffs)?;
        Ok(Self { geometry, coeffs })
    }

    pub fn zeros(geometry: &GeometrySpec<T>) -> Self {
        Self {
            coeffs: vec![Complex::default(); geometry.len()],
            geometry: geometry.clone(),
        }
    }

    pub fn geometry(&self) -> &GeometrySpec<T> {
        &self.geometry
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// `Σ |f(ξ)|²` (no volume factor).
    pub fn coefficient_energy(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            geometry: self.geometry.clone(),
            coeffs: self.coeffs.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Flat indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != T::zero() || z.im != T::zero())
            .map(|(i, _)| i)
            .collect()
    }
}

impl<T: Real> PhysicalField<T> {
    pub fn new(geometry: GeometrySpec<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        check_values(&geometry, &samples)?;
        Ok(Self { geometry, samples })
    }

    pub fn geometry(&self) -> &GeometrySpec<T> {
        &self.geometry
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }
}

/// Multi-dimensional FFT over a row-major grid, built from per-axis plans.
pub struct GridFft<T: Real> {
    grid: Vec<usize>,
    forward: Vec<Arc<dyn Fft<T>>>,
    inverse: Vec<Arc<dyn Fft<T>>>,
    work: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> GridFft<T> {
    pub fn new(grid: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward: Vec<_> = grid.iter().map(|&g| planner.plan_fft_forward(g)).collect();
        let inverse: Vec<_> = grid.iter().map(|&g| planner.plan_fft_inverse(g)).collect();
        let scratch_len = forward
            .iter()
            .chain(&inverse)
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Self {
            grid: grid.to_vec(),
            forward,
            inverse,
            work: Vec::new(),
            scratch: vec![Complex::default(); scratch_len],
        }
    }

    fn len(&self) -> usize {
        self.grid.iter().product()
    }

    fn run(&mut self, data: &mut [Complex<T>], inverse: bool) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let dim = self.grid.len();
        for axis in 0..dim {
            let plan = if inverse {
                Arc::clone(&self.inverse[axis])
            } else {
                Arc::clone(&self.forward[axis])
            };
            let len = self.grid[axis];
            let inner: usize = self.grid[axis + 1..].iter().product();
            if inner == 1 {
                plan.process_with_scratch(data, &mut self.scratch);
                continue;
            }
            // Each outer block is a len × inner matrix; transpose so the axis
            // is contiguous, transform, transpose back.
            let block = len * inner;
            self.work.resize(block, Complex::default());
            for chunk in data.chunks_exact_mut(block) {
                for r in 0..len {
                    for c in 0..inner {
                        self.work[c * len + r] = chunk[r * inner + c];
                    }
                }
                plan.process_with_scratch(&mut self.work, &mut self.scratch);
                for r in 0..len {
                    for c in 0..inner {
                        chunk[r * inner + c] = self.work[c * len + r];
                    }
                }
            }
        }
    }

    /// In place `u(x_j) = Σ_k f_k e^{+2πi j·k/G}` (unnormalised synthesis).
    pub fn synthesize(&mut self, data: &mut [Complex<T>]) {
        self.run(data, true);
    }

    /// In place `f_k = (1/#grid) Σ_j u_j e^{−2πi j·k/G}`.
    pub fn analyze(&mut self, data: &mut [Complex<T>]) {
        self.run(data, false);
        let scale = T::from_usize_(self.len()).recip();
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

/// `e^{2πi θ}` with `θ` reduced mod 1 first, which keeps large phases accurate.
#[inline]
pub fn unit_phase<T: Real>(theta: T) -> Complex<T> {
    let frac = theta - theta.floor();
    let angle = T::TAU() * frac;
    Complex::new(angle.cos(), angle.sin())
}

pub fn to_physical<T: Real>(field: &SpectralField<T>) -> PhysicalField<T> {
    let mut samples = field.coeffs.clone();
    GridFft::new(field.geometry.grid()).synthesize(&mut samples);
    PhysicalField {
        geometry: field.geometry.clone(),
        samples,
    }
}

pub fn to_spectral<T: Real>(field: &PhysicalField<T>) -> SpectralField<T> {
    let mut coeffs = field.samples.clone();
    GridFft::new(field.geometry.grid()).analyze(&mut coeffs);
    SpectralField {
        geometry: field.geometry.clone(),
        coeffs,
    }
}

/// Exact free evolution: multiplies the coefficient at `ξ` by `e^{2πi t|ξ|²}`.
pub fn propagate<T: Real>(field: &SpectralField<T>, t: T) -> SpectralField<T> {
    let norms = build_lattice(&field.geometry).norm_sq_table();
    let coeffs = field
        .coeffs
        .iter()
        .zip(&norms)
        .map(|(&z, &r2)| z * unit_phase(t * r2))
        .collect();
    SpectralField {
        geometry: field.geometry.clone(),
        coeffs,
    }
}

/// Repeated evaluation of `e^{itΔ} f` in physical space with cached plans.
pub struct Evolver<T: Real> {
    geometry: GeometrySpec<T>,
    norm_sq: Vec<T>,
    fft: GridFft<T>,
    active: Vec<usize>,
}

impl<T: Real> Evolver<T> {
    pub fn new(geometry: &GeometrySpec<T>) -> Self {
        Self {
            norm_sq: build_lattice(geometry).norm_sq_table(),
            fft: GridFft::new(geometry.grid()),
            geometry: geometry.clone(),
            active: Vec::new(),
        }
    }

    pub fn geometry(&self) -> &GeometrySpec<T> {
        &self.geometry
    }

    /// Writes the physical samples of `e^{itΔ} f` into `out`.
    pub fn evolve_into(&mut self, field: &SpectralField<T>, t: T, out: &mut Vec<Complex<T>>) {
        assert_eq!(field.geometry, self.geometry, "field geometry mismatch");
        self.active.clear();
        self.active.extend(field.support());
        out.clear();
        out.resize(field.coeffs.len(), Complex::default());
        for &i in &self.active {
            out[i] = field.coeffs[i] * unit_phase(t * self.norm_sq[i]);
        }
        self.fft.synthesize(out);
    }
}
