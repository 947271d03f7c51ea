//! Discretisations of `ℝᵐ×𝕋ⁿ` and their frequency lattices.
//!
//! Euclidean directions are periodised to length `P`, so their frequencies
//! live on `(1/P)ℤ`; torus directions have period 1 and integer frequencies.
//! The Fourier kernel is `e^{2πi x·ξ}` throughout.
//!
//! Flat indices are row-major over directions (the last direction varies
//! fastest). Along each direction, position `i` holds the integer mode
//! `k = i` for `i < G/2` and `k = i − G` otherwise, i.e. the usual DFT order;
//! the Nyquist mode `−G/2` is kept.

use crate::{Error, Real, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySpec<T> {
    euclidean_dims: usize,
    torus_dims: usize,
    period: T,
    grid: Vec<usize>,
}

impl<T: Real> GeometrySpec<T> {
    /// `m` Euclidean directions of period `period`, then `n` unit-period
    /// torus directions; `grid` holds one sample count per direction.
    pub fn new(m: usize, n: usize, period: T, grid: Vec<usize>) -> Result<Self> {
        if m + n == 0 {
            return Err(Error::InvalidGeometry {
                field: "m, n",
                reason: "at least one direction is required".into(),
            });
        }
        if !(period > T::zero()) || !period.is_finite() {
            return Err(Error::InvalidGeometry {
                field: "period",
                reason: format!("must be positive and finite, got {period}"),
            });
        }
        if grid.len() != m + n {
            return Err(Error::InvalidGeometry {
                field: "grid",
                reason: format!("expected {} sizes, got {}", m + n, grid.len()),
            });
        }
        if let Some(g) = grid.iter().find(|&&g| g < 2) {
            return Err(Error::InvalidGeometry {
                field: "grid",
                reason: format!("every grid size must be at least 2, got {g}"),
            });
        }
        Ok(Self {
            euclidean_dims: m,
            torus_dims: n,
            period,
            grid,
        })
    }

    pub fn euclidean_dims(&self) -> usize {
        self.euclidean_dims
    }

    pub fn torus_dims(&self) -> usize {
        self.torus_dims
    }

    pub fn dim(&self) -> usize {
        self.euclidean_dims + self.torus_dims
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn grid(&self) -> &[usize] {
        &self.grid
    }

    /// Total number of grid points (and of lattice frequencies).
    pub fn len(&self) -> usize {
        self.grid.iter().product()
    }

    pub fn is_euclidean(&self, dir: usize) -> bool {
        dir < self.euclidean_dims
    }

    /// Length of direction `dir`: `P` for Euclidean, 1 for torus.
    pub fn extent(&self, dir: usize) -> T {
        if self.is_euclidean(dir) {
            self.period
        } else {
            T::one()
        }
    }

    /// Spatial sample spacing along `dir`.
    pub fn cell_width(&self, dir: usize) -> T {
        self.extent(dir) / T::from_usize_(self.grid[dir])
    }

    pub fn cell_volume(&self) -> T {
        (0..self.dim())
            .map(|d| self.cell_width(d))
            .fold(T::one(), |a, b| a * b)
    }

    /// Domain volume `Pᵐ`.
    pub fn volume(&self) -> T {
        self.period.powi(self.euclidean_dims as i32)
    }

    /// Frequency spacing along `dir`: `1/P` or 1.
    pub fn frequency_spacing(&self, dir: usize) -> T {
        self.extent(dir).recip()
    }
}

/// The frequency set of a [`GeometrySpec`], one value array per direction.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyLattice<T> {
    geometry: GeometrySpec<T>,
    frequencies: Vec<Vec<T>>,
    strides: Vec<usize>,
}

/// Integer mode at DFT position `i` of a length-`g` axis.
#[inline]
pub fn mode_at(i: usize, g: usize) -> i64 {
    if i < g.div_ceil(2) {
        i as i64
    } else {
        i as i64 - g as i64
    }
}

/// DFT position of integer mode `k` on a length-`g` axis, if representable.
#[inline]
pub fn position_of(k: i64, g: usize) -> Option<usize> {
    let half = (g / 2) as i64;
    let lo = -half;
    let hi = g as i64 - half;
    if k < lo || k >= hi {
        None
    } else if k >= 0 {
        Some(k as usize)
    } else {
        Some((k + g as i64) as usize)
    }
}

pub fn build_lattice<T: Real>(geometry: &GeometrySpec<T>) -> FrequencyLattice<T> {
    let dim = geometry.dim();
    let frequencies = (0..dim)
        .map(|d| {
            let g = geometry.grid[d];
            let spacing = geometry.frequency_spacing(d);
            (0..g)
                .map(|i| T::from_i64_(mode_at(i, g)) * spacing)
                .collect()
        })
        .collect();
    let mut strides = vec![1; dim];
    for d in (0..dim.saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * geometry.grid[d + 1];
    }
    FrequencyLattice {
        geometry: geometry.clone(),
        frequencies,
        strides,
    }
}

impl<T: Real> FrequencyLattice<T> {
    pub fn geometry(&self) -> &GeometrySpec<T> {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn len(&self) -> usize {
        self.geometry.len()
    }

    /// Frequency values along `dir` in DFT order.
    pub fn frequencies(&self, dir: usize) -> &[T] {
        &self.frequencies[dir]
    }

    pub fn spacings(&self) -> Vec<T> {
        (0..self.dim())
            .map(|d| self.geometry.frequency_spacing(d))
            .collect()
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.geometry.grid)
            .map(|(&s, &g)| (flat / s) % g)
            .collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    /// Integer modes `k` of the frequency at `flat` (the frequency is `k/P`
    /// along Euclidean directions and `k` along torus directions).
    pub fn modes(&self, flat: usize) -> Vec<i64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.geometry.grid)
            .map(|(&i, &g)| mode_at(i, g))
            .collect()
    }

    /// Flat index of the frequency with integer modes `modes`, if it lies in
    /// the lattice.
    pub fn index_of_modes(&self, modes: &[i64]) -> Option<usize> {
        let mut flat = 0;
        for ((&k, &g), &s) in modes.iter().zip(&self.geometry.grid).zip(&self.strides) {
            flat += position_of(k, g)? * s;
        }
        Some(flat)
    }

    pub fn frequency(&self, flat: usize) -> Vec<T> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(d, &i)| self.frequencies[d][i])
            .collect()
    }

    /// `|ξ|²` for every lattice point, in flat order.
    pub fn norm_sq_table(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.len()];
        self.for_each_frequency(|flat, v| {
            out[flat] = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
        });
        out
    }

    /// Largest representable `|ξ_j|` along `dir`.
    pub fn max_abs_frequency(&self, dir: usize) -> T {
        self.frequencies[dir]
            .iter()
            .fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Visits every lattice point in flat order with its frequency vector.
    pub fn for_each_frequency<F: FnMut(usize, &[T])>(&self, mut f: F) {
        let dim = self.dim();
        let grid = &self.geometry.grid;
        let mut pos = vec![0usize; dim];
        let mut v: Vec<T> = (0..dim).map(|d| self.frequencies[d][0]).collect();
        for flat in 0..self.len() {
            f(flat, &v);
            for d in (0..dim).rev() {
                pos[d] += 1;
                if pos[d] < grid[d] {
                    v[d] = self.frequencies[d][pos[d]];
                    break;
                }
                pos[d] = 0;
                v[d] = self.frequencies[d][0];
            }
        }
    }
}

/// Optional ball `|v − center| ≤ radius` intersected with a shell.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRestriction<T> {
    pub center: Vec<T>,
    pub radius: T,
}

/// The annulus `c_* − w ≤ |v| ≤ c_* + w`, optionally cut by a ball.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSpec<T> {
    c_star: T,
    half_width: T,
    ball: Option<BallRestriction<T>>,
}

impl<T: Real> ShellSpec<T> {
    pub fn new(c_star: T, half_width: T) -> Result<Self> {
        if !(c_star >= T::zero()) || !c_star.is_finite() {
            return Err(Error::InvalidSpec {
                what: "shell",
                reason: format!("center must be >= 0, got {c_star}"),
            });
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidSpec {
                what: "shell",
                reason: format!("half width must be > 0, got {half_width}"),
            });
        }
        Ok(Self {
            c_star,
            half_width,
            ball: None,
        })
    }

    /// Shell of the default half width 1.
    pub fn unit_width(c_star: T) -> Result<Self> {
        Self::new(c_star, T::one())
    }

    pub fn with_ball(mut self, center: Vec<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::InvalidSpec {
                what: "shell",
                reason: format!("ball radius must be > 0, got {radius}"),
            });
        }
        self.ball = Some(BallRestriction { center, radius });
        Ok(self)
    }

    pub fn c_star(&self) -> T {
        self.c_star
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn ball(&self) -> Option<&BallRestriction<T>> {
        self.ball.as_ref()
    }

    /// Closed shell (and ball) predicate on a frequency vector.
    pub fn contains(&self, v: &[T]) -> bool {
        let r2 = v.iter().fold(T::zero(), |a, &x| a + x * x);
        let outer = self.c_star + self.half_width;
        let inner = self.c_star - self.half_width;
        if r2 > outer * outer {
            return false;
        }
        if inner > T::zero() && r2 < inner * inner {
            return false;
        }
        match &self.ball {
            None => true,
            Some(b) => {
                let d2 = v
                    .iter()
                    .zip(&b.center)
                    .fold(T::zero(), |a, (&x, &c)| a + (x - c) * (x - c));
                d2 <= b.radius * b.radius
            }
        }
    }
}

/// The slab `|a·(v − offset)| ≤ M` around a hyperplane with unit normal `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripSpec<T> {
    direction: Vec<T>,
    half_width: T,
    offset: Option<Vec<T>>,
}

impl<T: Real> StripSpec<T> {
    pub fn new(direction: Vec<T>, half_width: T) -> Result<Self> {
        let norm = direction.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
        if !((norm - T::one()).abs() <= tol) {
            return Err(Error::InvalidSpec {
                what: "strip",
                reason: format!("direction must be a unit vector, |a| = {norm}"),
            });
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::InvalidSpec {
                what: "strip",
                reason: format!("half width must be > 0, got {half_width}"),
            });
        }
        Ok(Self {
            direction,
            half_width,
            offset: None,
        })
    }

    pub fn with_offset(mut self, offset: Vec<T>) -> Self {
        self.offset = Some(offset);
        self
    }

    pub fn direction(&self) -> &[T] {
        &self.direction
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn offset(&self) -> Option<&[T]> {
        self.offset.as_deref()
    }

    /// `v − offset` (or `v` when no offset is set).
    pub fn relative(&self, v: &[T]) -> Vec<T> {
        match &self.offset {
            Some(o) => v.iter().zip(o).map(|(&x, &c)| x - c).collect(),
            None => v.to_vec(),
        }
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let proj = match &self.offset {
            Some(o) => v
                .iter()
                .zip(o)
                .zip(&self.direction)
                .fold(T::zero(), |acc, ((&x, &c), &a)| acc + a * (x - c)),
            None => v
                .iter()
                .zip(&self.direction)
                .fold(T::zero(), |acc, (&x, &a)| acc + a * x),
        };
        proj.abs() <= self.half_width
    }
}

fn check_dim(what: &str, got: usize, dim: usize) {
    assert_eq!(got, dim, "{what} has dimension {got}, lattice has {dim}");
}

/// Flat indices (ascending) of lattice frequencies inside the closed shell.
///
/// # Panics
/// If the shell's ball center has the wrong dimension.
pub fn shell_indices<T: Real>(lattice: &FrequencyLattice<T>, shell: &ShellSpec<T>) -> Vec<usize> {
    if let Some(b) = shell.ball() {
        check_dim("ball center", b.center.len(), lattice.dim());
    }
    let mut out = Vec::new();
    lattice.for_each_frequency(|flat, v| {
        if shell.contains(v) {
            out.push(flat);
        }
    });
    out
}

/// Flat indices (ascending) of lattice frequencies inside the closed strip.
///
/// # Panics
/// If the strip direction or offset has the wrong dimension.
pub fn strip_indices<T: Real>(lattice: &FrequencyLattice<T>, strip: &StripSpec<T>) -> Vec<usize> {
    check_dim("strip direction", strip.direction().len(), lattice.dim());
    if let Some(o) = strip.offset() {
        check_dim("strip offset", o.len(), lattice.dim());
    }
    let mut out = Vec::new();
    lattice.for_each_frequency(|flat, v| {
        if strip.contains(v) {
            out.push(flat);
        }
    });
    out
}
