//! Volumes and integer-slice integrals of the quadric-shell set
//!
//! `U = {ξ ∈ ℝ³ : c_*−1 ≤ |ξ| ≤ c_*+1, |(ξ−a)·(ξ−b)| ≤ 1/T}`.
//!
//! Since `(ξ−a)·(ξ−b) = |ξ−m|² − β²` with `m = (a+b)/2`, `β = |a−b|/2`, the
//! quadric condition confines `ξ` to a spherical slab around `m`. Monte Carlo
//! sampling and slice quadrature both start from that slab.

use rand::Rng;

use crate::rng::{derive_seed, stream};
use crate::{Error, Real, Result};

pub type Point<T> = [T; 3];

fn dot<T: Real>(x: &Point<T>, y: &Point<T>) -> T {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn sub<T: Real>(x: &Point<T>, y: &Point<T>) -> Point<T> {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

/// A bounded subset of ℝ³ with a known enclosing sampling region.
pub trait Region<T: Real> {
    fn contains(&self, p: &Point<T>) -> bool;

    /// A region guaranteed to contain `self`.
    fn bounding(&self) -> SamplingRegion<T>;

    /// Square `[lo, hi]²` (as `(lo₁, lo₂, hi₁, hi₂)`) that contains the slice
    /// `{ξ : (ξ, n) ∈ self}`, or `None` when the slice is empty.
    fn slice_bounds(&self, n: i64) -> Option<[T; 4]>;

    /// Integers `n` whose slices may be nonempty.
    fn slice_range(&self) -> (i64, i64);
}

/// Regions we can sample uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplingRegion<T> {
    Cube {
        center: Point<T>,
        half_side: T,
    },
    Ball {
        center: Point<T>,
        radius: T,
    },
    /// `{r_min ≤ |ξ − center| ≤ r_max}`.
    SphericalSlab {
        center: Point<T>,
        r_min: T,
        r_max: T,
    },
}

impl<T: Real> SamplingRegion<T> {
    pub fn volume(&self) -> T {
        let four_thirds_pi = T::lit(4.0) / T::lit(3.0) * T::PI();
        match *self {
            SamplingRegion::Cube { half_side, .. } => (T::lit(2.0) * half_side).powi(3),
            SamplingRegion::Ball { radius, .. } => four_thirds_pi * radius.powi(3),
            SamplingRegion::SphericalSlab { r_min, r_max, .. } => {
                four_thirds_pi * (r_max.powi(3) - r_min.powi(3))
            }
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Point<T> {
        let mut u = || T::lit(rng.random::<f64>());
        match *self {
            SamplingRegion::Cube { center, half_side } => {
                let mut p = center;
                for c in &mut p {
                    *c += half_side * (T::lit(2.0) * u() - T::one());
                }
                p
            }
            SamplingRegion::Ball { center, radius } => {
                radial_sample(center, T::zero(), radius, &mut u)
            }
            SamplingRegion::SphericalSlab {
                center,
                r_min,
                r_max,
            } => radial_sample(center, r_min, r_max, &mut u),
        }
    }
}

fn radial_sample<T: Real>(
    center: Point<T>,
    r_min: T,
    r_max: T,
    u: &mut impl FnMut() -> T,
) -> Point<T> {
    let lo = r_min.powi(3);
    let r = (lo + u() * (r_max.powi(3) - lo)).cbrt();
    let z = T::lit(2.0) * u() - T::one();
    let phi = T::lit(2.0) * T::PI() * u();
    let rho = (T::one() - z * z).max(T::zero()).sqrt();
    [
        center[0] + r * rho * phi.cos(),
        center[1] + r * rho * phi.sin(),
        center[2] + r * z,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadricShellSet<T> {
    a: Point<T>,
    b: Point<T>,
    c_star: T,
    t: T,
    mid: Point<T>,
    beta: T,
}

impl<T: Real> QuadricShellSet<T> {
    pub fn new(a: Point<T>, b: Point<T>, c_star: T, t: T) -> Result<Self> {
        if !(c_star > T::zero()) || !c_star.is_finite() {
            return Err(Error::InvalidSpec {
                what: "quadric-shell set",
                reason: format!("c_star must be positive, got {c_star}"),
            });
        }
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::InvalidSpec {
                what: "quadric-shell set",
                reason: format!("T must be positive, got {t}"),
            });
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec {
                what: "quadric-shell set",
                reason: "a and b must be finite".into(),
            });
        }
        let half = T::lit(0.5);
        let mid = [
            (a[0] + b[0]) * half,
            (a[1] + b[1]) * half,
            (a[2] + b[2]) * half,
        ];
        let d = sub(&a, &b);
        let beta = dot(&d, &d).sqrt() * half;
        Ok(Self {
            a,
            b,
            c_star,
            t,
            mid,
            beta,
        })
    }

    pub fn a(&self) -> Point<T> {
        self.a
    }

    pub fn b(&self) -> Point<T> {
        self.b
    }

    pub fn c_star(&self) -> T {
        self.c_star
    }

    pub fn tolerance(&self) -> T {
        self.t
    }

    pub fn midpoint(&self) -> Point<T> {
        self.mid
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Same `a`, `b`, `c_*` at a different `T`.
    pub fn with_tolerance(&self, t: T) -> Result<Self> {
        Self::new(self.a, self.b, self.c_star, t)
    }

    fn outer_radius(&self) -> T {
        (self.beta * self.beta + self.t.recip()).sqrt()
    }
}

impl<T: Real> Region<T> for QuadricShellSet<T> {
    fn contains(&self, p: &Point<T>) -> bool {
        membership(self, p)
    }

    fn bounding(&self) -> SamplingRegion<T> {
        let inv_t = self.t.recip();
        let b2 = self.beta * self.beta;
        if b2 > inv_t {
            SamplingRegion::SphericalSlab {
                center: self.mid,
                r_min: (b2 - inv_t).sqrt(),
                r_max: (b2 + inv_t).sqrt(),
            }
        } else {
            SamplingRegion::Ball {
                center: self.mid,
                radius: self.outer_radius(),
            }
        }
    }

    fn slice_bounds(&self, n: i64) -> Option<[T; 4]> {
        let nf = T::from_i64_(n);
        let outer = self.c_star + T::one();
        let shell_r2 = outer * outer - nf * nf;
        let r = self.outer_radius();
        let dz = nf - self.mid[2];
        let ball_r2 = r * r - dz * dz;
        if shell_r2 < T::zero() || ball_r2 < T::zero() {
            return None;
        }
        let (sr, br) = (shell_r2.sqrt(), ball_r2.sqrt());
        let lo1 = (-sr).max(self.mid[0] - br);
        let hi1 = sr.min(self.mid[0] + br);
        let lo2 = (-sr).max(self.mid[1] - br);
        let hi2 = sr.min(self.mid[1] + br);
        if lo1 > hi1 || lo2 > hi2 {
            return None;
        }
        Some([lo1, lo2, hi1, hi2])
    }

    fn slice_range(&self) -> (i64, i64) {
        let k = (self.c_star + T::one()).ceil().to_f64_() as i64;
        (-k, k)
    }
}

/// Exact evaluation of both defining inequalities of `U`.
pub fn membership<T: Real>(set: &QuadricShellSet<T>, p: &Point<T>) -> bool {
    let r2 = dot(p, p);
    let lo = set.c_star - T::one();
    let hi = set.c_star + T::one();
    if r2 > hi * hi || (lo > T::zero() && r2 < lo * lo) {
        return false;
    }
    let q = dot(&sub(p, &set.a), &sub(p, &set.b));
    q.abs() <= set.t.recip()
}

/// Closed ball; swapped in for `U` in calibration tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball<T> {
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Real> Region<T> for Ball<T> {
    fn contains(&self, p: &Point<T>) -> bool {
        let d = sub(p, &self.center);
        dot(&d, &d) <= self.radius * self.radius
    }

    fn bounding(&self) -> SamplingRegion<T> {
        SamplingRegion::Cube {
            center: self.center,
            half_side: self.radius,
        }
    }

    fn slice_bounds(&self, n: i64) -> Option<[T; 4]> {
        let dz = T::from_i64_(n) - self.center[2];
        let r2 = self.radius * self.radius - dz * dz;
        if r2 < T::zero() {
            return None;
        }
        let r = r2.sqrt();
        Some([
            self.center[0] - r,
            self.center[1] - r,
            self.center[0] + r,
            self.center[1] + r,
        ])
    }

    fn slice_range(&self) -> (i64, i64) {
        (
            (self.center[2] - self.radius).floor().to_f64_() as i64,
            (self.center[2] + self.radius).ceil().to_f64_() as i64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate<T> {
    pub value: T,
    pub stderr: T,
    pub samples: usize,
}

const MC_CHUNK: usize = 1 << 16;

/// Hit-or-miss Monte Carlo volume of `region` inside `bounds`.
///
/// Samples are drawn in chunks of 65536 from per-chunk streams, so the result
/// depends only on `(n_samples, seed)`.
pub fn mc_volume<T: Real, R: Region<T> + ?Sized>(
    region: &R,
    bounds: &SamplingRegion<T>,
    n_samples: usize,
    seed: u64,
) -> Result<VolumeEstimate<T>> {
    if n_samples == 0 {
        return Err(Error::TooFewSamples {
            got: 0,
            required: 1,
        });
    }
    let mut hits = 0usize;
    let mut done = 0usize;
    let mut chunk = 0u64;
    while done < n_samples {
        let len = MC_CHUNK.min(n_samples - done);
        let mut rng = stream(derive_seed(seed, &[chunk]));
        for _ in 0..len {
            if region.contains(&bounds.sample(&mut rng)) {
                hits += 1;
            }
        }
        done += len;
        chunk += 1;
    }
    let vol = bounds.volume();
    let n = T::from_usize_(n_samples);
    let frac = T::from_usize_(hits) / n;
    Ok(VolumeEstimate {
        value: frac * vol,
        stderr: vol * (frac * (T::one() - frac) / n).sqrt(),
        samples: n_samples,
    })
}

/// Default slice quadrature cell size.
pub const DEFAULT_SLICE_RESOLUTION: f64 = 1.0 / 64.0;

/// `∫_{ℝ²} 1_U(ξ, n) dξ` by midpoint quadrature on cells of side
/// `resolution`, aligned to integer multiples of `resolution`.
pub fn slice_area<T: Real, R: Region<T> + ?Sized>(region: &R, n: i64, resolution: T) -> Result<T> {
    if !(resolution > T::zero()) || !resolution.is_finite() {
        return Err(Error::InvalidSpec {
            what: "slice quadrature",
            reason: format!("resolution must be positive, got {resolution}"),
        });
    }
    let Some([lo1, lo2, hi1, hi2]) = region.slice_bounds(n) else {
        return Ok(T::zero());
    };
    let h = resolution;
    let cells = |lo: T, hi: T| {
        let a = (lo / h).floor().to_f64_() as i64;
        let b = (hi / h).ceil().to_f64_() as i64;
        a..b
    };
    let z = T::from_i64_(n);
    let half = T::lit(0.5);
    let mut count = 0u64;
    for i in cells(lo1, hi1) {
        let x = (T::from_i64_(i) + half) * h;
        for j in cells(lo2, hi2) {
            let y = (T::from_i64_(j) + half) * h;
            if region.contains(&[x, y, z]) {
                count += 1;
            }
        }
    }
    Ok(T::lit(count as f64) * h * h)
}

/// Slice areas for every integer in [`Region::slice_range`], in order.
pub fn slice_profile<T: Real, R: Region<T> + ?Sized>(region: &R, resolution: T) -> Result<Vec<T>> {
    let (lo, hi) = region.slice_range();
    (lo..=hi)
        .map(|n| slice_area(region, n, resolution))
        .collect()
}

/// `Σ_n ∫ 1_U(ξ, n) dξ` over all integers that can meet the set.
pub fn slice_sum<T: Real, R: Region<T> + ?Sized>(region: &R, resolution: T) -> Result<T> {
    Ok(slice_profile(region, resolution)?
        .into_iter()
        .fold(T::zero(), |a, b| a + b))
}

/// `sup_n ∫ 1_U(ξ, n) dξ`.
pub fn slice_sup<T: Real, R: Region<T> + ?Sized>(region: &R, resolution: T) -> Result<T> {
    Ok(slice_profile(region, resolution)?
        .into_iter()
        .fold(T::zero(), |a, b| a.max(b)))
}

/// Everything reported per measure instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceControl<T> {
    pub volume: VolumeEstimate<T>,
    pub slice_sum: T,
    pub slice_sup: T,
    /// `slice_sum / (|U| + slice_sup)`, `+∞` when the denominator vanishes.
    pub ratio: T,
}

/// Compares the lattice slice sum with `|U| + sup_n (slice area)`.
pub fn slice_control<T: Real, R: Region<T> + ?Sized>(
    region: &R,
    resolution: T,
    mc_samples: usize,
    seed: u64,
) -> Result<SliceControl<T>> {
    let areas = slice_profile(region, resolution)?;
    let sum = areas.iter().fold(T::zero(), |a, &b| a + b);
    let sup = areas.iter().fold(T::zero(), |a, &b| a.max(b));
    let volume = mc_volume(region, &region.bounding(), mc_samples, seed)?;
    let denom = volume.value + sup;
    let ratio = if denom > T::zero() {
        sum / denom
    } else {
        T::infinity()
    };
    Ok(SliceControl {
        volume,
        slice_sum: sum,
        slice_sup: sup,
        ratio,
    })
}

/// Just the ratio of [`slice_control`].
pub fn slice_control_ratio<T: Real, R: Region<T> + ?Sized>(
    region: &R,
    resolution: T,
    mc_samples: usize,
    seed: u64,
) -> Result<T> {
    Ok(slice_control(region, resolution, mc_samples, seed)?.ratio)
}

/// Number of strict sign changes among consecutive differences; zero
/// differences (plateaus) are skipped.
pub fn monotonicity_changes<T: Real>(samples: &[T]) -> Result<usize> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            required: 2,
        });
    }
    let mut last = 0i8;
    let mut changes = 0;
    for w in samples.windows(2) {
        let s = if w[1] > w[0] {
            1
        } else if w[1] < w[0] {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    Ok(changes)
}

/// Random `(a, b)` with `a, b ∈ ℝ²×ℤ`, `c_*−1 ≤ |a|, |b| ≤ c_*+1` and
/// `|a − b| ≤ c_*/50`.
pub fn random_admissible_pair<T: Real>(c_star: T, seed: u64) -> (Point<T>, Point<T>) {
    let mut rng = stream(derive_seed(seed, &[0x5eed]));
    let c = c_star.to_f64_();
    let two_pi = 2.0 * std::f64::consts::PI;
    loop {
        let rho = c - 1.0 + 2.0 * rng.random::<f64>();
        let zmax = (0.9 * rho).floor() as i64;
        let z = rng.random_range(-zmax..=zmax);
        let planar = (rho * rho - (z * z) as f64).sqrt();
        let th = two_pi * rng.random::<f64>();
        let a = [planar * th.cos(), planar * th.sin(), z as f64];
        let step = c / 50.0 * rng.random::<f64>().sqrt();
        let ph = two_pi * rng.random::<f64>();
        let b = [a[0] + step * ph.cos(), a[1] + step * ph.sin(), a[2]];
        let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
        if (c - 1.0..=c + 1.0).contains(&nb) {
            let cv = |p: [f64; 3]| [T::lit(p[0]), T::lit(p[1]), T::lit(p[2])];
            return (cv(a), cv(b));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn membership_examples() {
        let a = [16.0, 0.0, 0.0];
        let u = QuadricShellSet::new(a, a, 16.0, 100.0).unwrap();
        assert!(membership(&u, &a));
        assert!(!membership(&u, &[18.0, 0.0, 0.0]));
        assert!(!membership(&u, &[16.0, 0.2, 0.0]));
        assert!(membership(&u, &[16.0, 0.09, 0.0]));
    }

    #[test]
    fn rejects_bad_parameters() {
        let a = [1.0, 0.0, 0.0];
        assert!(QuadricShellSet::new(a, a, 0.0, 1.0).is_err());
        assert!(QuadricShellSet::new(a, a, 1.0, -1.0).is_err());
    }

    #[test]
    fn bounding_region_kind() {
        let a = [16.0, 0.0, 0.0];
        let b = [16.0, 0.4, 0.0];
        let u = QuadricShellSet::new(a, b, 16.0, 100.0).unwrap();
        assert!(matches!(u.bounding(), SamplingRegion::SphericalSlab { .. }));
        let u = QuadricShellSet::new(a, b, 16.0, 10.0).unwrap();
        assert!(matches!(u.bounding(), SamplingRegion::Ball { .. }));
    }

    #[test]
    fn bounding_region_covers_set() {
        for seed in 0..20 {
            let (a, b) = random_admissible_pair(16.0, seed);
            let u = QuadricShellSet::<f64>::new(a, b, 16.0, 10.0).unwrap();
            let cube = SamplingRegion::Cube {
                center: u.midpoint(),
                half_side: 1.0,
            };
            let mut rng = stream(seed);
            let bound = u.bounding();
            for _ in 0..2000 {
                let p = cube.sample(&mut rng);
                if u.contains(&p) {
                    let d = sub(&p, &u.midpoint());
                    let r = dot(&d, &d).sqrt();
                    match bound {
                        SamplingRegion::Ball { radius, .. } => assert!(r <= radius + 1e-12),
                        SamplingRegion::SphericalSlab { r_min, r_max, .. } => {
                            assert!(r >= r_min - 1e-12 && r <= r_max + 1e-12)
                        }
                        _ => unreachable!(),
                    }
                }
            }
        }
    }

    #[test]
    fn sampling_volumes() {
        let c = [0.0; 3];
        let ball = SamplingRegion::Ball {
            center: c,
            radius: 2.0,
        };
        assert!((ball.volume() - 32.0 * PI / 3.0).abs() < 1e-12);
        let cube = SamplingRegion::Cube {
            center: c,
            half_side: 1.0,
        };
        assert_eq!(cube.volume(), 8.0);
    }

    #[test]
    fn unit_ball_volume() {
        let ball = Ball {
            center: [0.0; 3],
            radius: 1.0,
        };
        let est = mc_volume(&ball, &ball.bounding(), 200_000, 3).unwrap();
        assert!((est.value - 4.0 * PI / 3.0).abs() <= 3.0 * est.stderr);
    }

    #[test]
    fn small_ball_quadric() {
        let a = [16.0, 0.0, 0.0];
        let u = QuadricShellSet::new(a, a, 16.0, 100.0).unwrap();
        let est = mc_volume(&u, &u.bounding(), 100_000, 1).unwrap();
        assert!(est.value <= 4.2e-3 + 3.0 * est.stderr);
        assert!((est.value - 4.0 * PI / 3.0 * 1e-3).abs() <= 3.0 * est.stderr + 1e-12);
    }

    #[test]
    fn ball_slices() {
        let ball = Ball {
            center: [0.0; 3],
            radius: 5.0,
        };
        for n in 0..5i64 {
            let exact = PI * (25.0 - (n * n) as f64);
            let got = slice_area(&ball, n, DEFAULT_SLICE_RESOLUTION).unwrap();
            assert!(
                (got - exact).abs() / exact < 0.02,
                "n={n}: {got} vs {exact}"
            );
        }
        assert_eq!(slice_area(&ball, 7, 0.1).unwrap(), 0.0);
        let exact: f64 = (-5i64..=5).map(|n| PI * (25.0 - (n * n) as f64)).sum();
        let got = slice_sum(&ball, DEFAULT_SLICE_RESOLUTION).unwrap();
        assert!((got - exact).abs() / exact < 0.01);
        let ratio = slice_control_ratio(&ball, DEFAULT_SLICE_RESOLUTION, 100_000, 0).unwrap();
        assert!(ratio <= 1.2, "ratio {ratio}");
    }

    #[test]
    fn empty_slices() {
        let a = [8.0, 0.0, 0.0];
        let u = QuadricShellSet::new(a, a, 8.0, 100.0).unwrap();
        assert_eq!(slice_area(&u, 10, 0.01).unwrap(), 0.0);
        assert_eq!(slice_area(&u, 1, 0.01).unwrap(), 0.0);
        assert!(slice_area(&u, 0, 0.0).is_err());
    }

    #[test]
    fn empty_set_ratio_is_sentinel() {
        // The quadric ball around the origin misses the shell entirely.
        let u = QuadricShellSet::<f64>::new([0.0; 3], [0.0; 3], 16.0, 100.0).unwrap();
        let c = slice_control(&u, 0.01, 1000, 0).unwrap();
        assert_eq!(c.slice_sum, 0.0);
        assert!(c.ratio.is_infinite());
    }

    #[test]
    fn monotonicity() {
        assert_eq!(monotonicity_changes(&[1.0, 2.0, 3.0]).unwrap(), 0);
        assert_eq!(monotonicity_changes(&[1.0, 3.0, 2.0]).unwrap(), 1);
        assert_eq!(
            monotonicity_changes(&[1.0, 1.0, 2.0, 2.0, 1.0, 1.0]).unwrap(),
            1
        );
        assert_eq!(monotonicity_changes(&[0.0, 1.0, 0.0, 1.0]).unwrap(), 2);
        assert_eq!(monotonicity_changes(&[5.0, 5.0]).unwrap(), 0);
        assert!(monotonicity_changes(&[1.0]).is_err());
    }

    #[test]
    fn admissible_pairs() {
        for seed in 0..50 {
            for c in [8.0f64, 16.0, 32.0] {
                let (a, b) = random_admissible_pair(c, seed);
                let na = dot(&a, &a).sqrt();
                let nb = dot(&b, &b).sqrt();
                assert!(na >= c - 1.0 - 1e-9 && na <= c + 1.0 + 1e-9);
                assert!(nb >= c - 1.0 && nb <= c + 1.0);
                let d = sub(&a, &b);
                assert!(dot(&d, &d).sqrt() <= c / 50.0 + 1e-12);
                assert_eq!(a[2], a[2].round());
                assert_eq!(a[2], b[2]);
            }
        }
    }
}
