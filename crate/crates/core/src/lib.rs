//! Spectral verification of restricted-type Strichartz estimates for the free
//! Schrödinger flow on mixed Euclidean/periodic domains `ℝᵐ×𝕋ⁿ`.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: discretised domains, frequency lattices, shell and strip
//!   frequency restrictions.
//! - [`spectral`]: grid Fourier transforms and the exact free propagator
//!   `e^{2πi t|ξ|²}`.
//! - [`datagen`]: seeded shell/strip initial data and the explicit
//!   counter-example data on `ℝ×𝕋^{d−1}`.
//! - [`norms`]: Plancherel, spatial, space-time and mixed Lebesgue norms.
//! - [`experiments`]: scaling sweeps, log-log fits, dispersive decay and
//!   mixed-norm boundedness drivers.
//! - [`measure`]: volumes and lattice slice sums of the quadric-shell set.
//! - [`weyl`]: quadratic Weyl sums and their nested moments.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The `*64`
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! experiments and the command-line driver use.
//!
//! ```
//! use strichartz::datagen::{random_shell_data, CoefficientLaw};
//! use strichartz::geometry::ShellSpec;
//! use strichartz::norms::{strichartz_ratio, TimeGrid};
//! use strichartz::GeometrySpec64;
//!
//! let geom = GeometrySpec64::new(1, 1, 2.0, vec![64, 32])?;
//! let shell = ShellSpec::new(8.0, 1.0)?;
//! let f = random_shell_data(&geom, &shell, CoefficientLaw::UnitModulus, 42)?;
//! let ratio = strichartz_ratio(&f, 4.0, &TimeGrid::new(0.0, 1.0, 64)?)?;
//! assert!(ratio > 0.0);
//! # Ok::<(), strichartz::Error>(())
//! ```

// Validation is written as `!(x > 0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::len_without_is_empty)]

pub mod datagen;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod measure;
pub mod norms;
pub mod rng;
pub mod selftest;
pub mod spectral;
pub mod weyl;

use std::fmt::{Debug, Display};

pub use error::{Error, Result};

/// Floating point scalar the numerical core is written against.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssignOps
    + rustfft::FftNum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` literals and config values.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn from_usize_(n: usize) -> Self {
        <Self as num_traits::FromPrimitive>::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn from_i64_(n: i64) -> Self {
        <Self as num_traits::FromPrimitive>::from_i64(n).expect("i64 is representable")
    }

    #[inline]
    fn to_f64_(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Complex<T> = num_complex::Complex<T>;
pub type Complex64 = num_complex::Complex<f64>;

pub type GeometrySpec64 = geometry::GeometrySpec<f64>;
pub type FrequencyLattice64 = geometry::FrequencyLattice<f64>;
pub type ShellSpec64 = geometry::ShellSpec<f64>;
pub type StripSpec64 = geometry::StripSpec<f64>;
pub type SpectralField64 = spectral::SpectralField<f64>;
pub type PhysicalField64 = spectral::PhysicalField<f64>;
pub type TimeGrid64 = norms::TimeGrid<f64>;
pub type DataRecipe64 = datagen::DataRecipe<f64>;
pub type ExperimentConfig64 = experiments::ExperimentConfig<f64>;
pub type ScalingFit64 = experiments::ScalingFit<f64>;
pub type QuadricShellSet64 = measure::QuadricShellSet<f64>;
pub type VolumeEstimate64 = measure::VolumeEstimate<f64>;
pub type MomentSeries64 = weyl::MomentSeries<f64>;
