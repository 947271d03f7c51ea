//! Built-in configurations.
//!
//! Scaling presets fix the geometry; everything else is shared. The reduced
//! grids are the smallest convenient FFT sizes that still hold the `N = 32`
//! shell on every axis. `--full-resolution` swaps in the larger grids, where
//! the torus axes truncate the top shells.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// ℝ²×𝕋
    R2t,
    /// ℝ×𝕋²
    Rt2,
    /// 𝕋³
    T3,
    /// ℝ² at p = 6
    Euclid2,
    /// ℝ³ at p = 4
    Euclid3,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::R2t,
        Preset::Rt2,
        Preset::T3,
        Preset::Euclid2,
        Preset::Euclid3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::R2t => "r2t",
            Preset::Rt2 => "rt2",
            Preset::T3 => "t3",
            Preset::Euclid2 => "euclid2",
            Preset::Euclid3 => "euclid3",
        }
    }

    /// `(m, n, period, p)`.
    fn shape(self) -> (usize, usize, f64, u32) {
        match self {
            Preset::R2t => (2, 1, 2.0, 4),
            Preset::Rt2 => (1, 2, 2.0, 4),
            Preset::T3 => (0, 3, 1.0, 4),
            Preset::Euclid2 => (2, 0, 2.0, 6),
            Preset::Euclid3 => (3, 0, 2.0, 4),
        }
    }

    pub fn grid(self, full_resolution: bool) -> &'static str {
        match (self, full_resolution) {
            (Preset::R2t, false) => "144, 144, 72",
            (Preset::Rt2, false) => "144, 72, 72",
            (Preset::T3, false) => "72, 72, 72",
            (Preset::Euclid2, false) => "144, 144",
            (Preset::Euclid3, false) => "144, 144, 144",
            (Preset::R2t, true) => "256, 256, 32",
            (Preset::Rt2, true) => "256, 32, 32",
            (Preset::T3, true) => "64, 64, 64",
            (Preset::Euclid2, true) => "256, 256",
            (Preset::Euclid3, true) => "192, 192, 192",
        }
    }

    /// Scaling configuration text for this preset.
    pub fn config_text(self, full_resolution: bool) -> String {
        let (m, n, period, p) = self.shape();
        format!(
            "[geometry]
m = {m}
n = {n}
period = {period}
grid = {grid}

[data]
kind = shell
width = 1
distribution = unit-modulus
seed = 1

[time]
t0 = 0
t1 = 1
nt = 64

[experiment]
p = {p}
N_list = 4, 8, 16, 32
trials = 5
statistic = max
",
            grid = self.grid(full_resolution)
        )
    }
}

/// Default for `decay`: coherent Gaussian-envelope strip data, in the regime
/// `t·M² ≪ 1`, on a box large enough that nothing wraps by `t = 8`.
pub const DECAY_DEFAULT: &str = "[geometry]
m = 2
n = 0
period = 48
grid = 64, 256

[data]
kind = strip
strip_dir = 1, 0
strip_halfwidth = 0.05
envelope_sigma = 0.4
distribution = coherent
seed = 1

[time]
t0 = 1
t1 = 8
nt = 4
";

pub const MIXED_DEFAULT: &str = "[geometry]
m = 2
n = 0
period = 8
grid = 48, 576

[data]
kind = strip
strip_dir = 1, 0
strip_halfwidth = 1
envelope_sigma = 1
distribution = unit-modulus
seed = 1

[time]
t0 = 0
t1 = 1
nt = 64

[experiment]
q = 8
r = 4
N_list = 4, 8, 16, 32
trials = 5
statistic = max
";

pub const MEASURE_DEFAULT: &str = "[measure]
c_star = 8, 16, 32
T_list = 10, 100, 1000
trials = 8
mc_samples = 100000
slice_resolution = 0.015625
seed = 1
";

pub const WEYL_DEFAULT: &str = "[weyl]
d = 2
K_list = 8, 16, 32, 64, 128
";

/// `ℝ×𝕋` with `N₁ = 8`, `N₂ = 128` (so `K = 8`); 11 Euclidean lattice
/// points fall inside the width-1/50 window at `P = 512`.
pub const COUNTEREXAMPLE_DEFAULT: &str = "[geometry]
m = 1
n = 1
period = 512
grid = 16384, 32

[data]
kind = counterexample
c_star = 8
ball_radius = 128
";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn presets_parse() {
        for p in Preset::ALL {
            for full in [false, true] {
                let cfg = Config::parse(&p.config_text(full)).unwrap();
                let grid: Vec<usize> = cfg.get_list("geometry", "grid").unwrap();
                let m: usize = cfg.get("geometry", "m").unwrap();
                let n: usize = cfg.get("geometry", "n").unwrap();
                assert_eq!(grid.len(), m + n, "{}", p.name());
            }
        }
        for text in [
            DECAY_DEFAULT,
            MIXED_DEFAULT,
            MEASURE_DEFAULT,
            WEYL_DEFAULT,
            COUNTEREXAMPLE_DEFAULT,
        ] {
            Config::parse(text).unwrap();
        }
    }
}
