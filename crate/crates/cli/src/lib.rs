//! Command-line driver for the `strichartz` experiments.
//!
//! Exit codes: 0 when every check passes, 1 when the run completes but a
//! check fails, 2 on configuration, numerical or I/O errors.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::Report;
use config::{Config, ConfigError};
use output::RunManifest;
use presets::Preset;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] strichartz::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "strichartz",
    version,
    about = "Numerical Strichartz experiments on ℝᵐ×𝕋ⁿ"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Configuration file (`key = value` with [section] headers).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `[output] out_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the data seed (`[measure] seed` for `measure`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strichartz ratio against frequency scale, with a log-log fit.
    Scaling {
        #[command(flatten)]
        common: Common,
        /// Built-in geometry (defaults to r2t when no --config is given).
        #[arg(long, value_enum, conflicts_with = "config")]
        preset: Option<Preset>,
        /// Use the preset's larger grid.
        #[arg(long, requires = "preset")]
        full_resolution: bool,
    },
    /// Sup-norm decay of strip data in time.
    Decay {
        #[command(flatten)]
        common: Common,
    },
    /// Mixed-norm ratio for translated strips.
    Mixed {
        #[command(flatten)]
        common: Common,
    },
    /// Slice bounds for sets around a quadric shell.
    Measure {
        #[command(flatten)]
        common: Common,
    },
    /// Nested Weyl-sum moments.
    Weyl {
        #[command(flatten)]
        common: Common,
    },
    /// Product data on ℝ×𝕋^{d−1} at the endpoint exponent.
    Counterexample {
        #[command(flatten)]
        common: Common,
    },
    /// Built-in numerical identities.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Scaling { .. } => "scaling",
            Command::Decay { .. } => "decay",
            Command::Mixed { .. } => "mixed",
            Command::Measure { .. } => "measure",
            Command::Weyl { .. } => "weyl",
            Command::Counterexample { .. } => "counterexample",
            Command::Selftest { .. } => "selftest",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Scaling { common, .. }
            | Command::Decay { common }
            | Command::Mixed { common }
            | Command::Measure { common }
            | Command::Weyl { common }
            | Command::Counterexample { common }
            | Command::Selftest { common } => common,
        }
    }

    /// Sections recorded in the manifest.
    fn sections(&self) -> &'static [&'static str] {
        match self {
            Command::Scaling { .. } | Command::Mixed { .. } => {
                &["geometry", "data", "time", "experiment", "output"]
            }
            Command::Decay { .. } => &["geometry", "data", "time", "output"],
            Command::Counterexample { .. } => &["geometry", "data", "output"],
            Command::Measure { .. } => &["measure", "output"],
            Command::Weyl { .. } => &["weyl", "output"],
            Command::Selftest { .. } => &["output"],
        }
    }

    fn builtin(&self) -> String {
        match self {
            Command::Scaling {
                preset,
                full_resolution,
                ..
            } => preset.unwrap_or(Preset::R2t).config_text(*full_resolution),
            Command::Decay { .. } => presets::DECAY_DEFAULT.into(),
            Command::Mixed { .. } => presets::MIXED_DEFAULT.into(),
            Command::Measure { .. } => presets::MEASURE_DEFAULT.into(),
            Command::Weyl { .. } => presets::WEYL_DEFAULT.into(),
            Command::Counterexample { .. } => presets::COUNTEREXAMPLE_DEFAULT.into(),
            Command::Selftest { .. } => String::new(),
        }
    }
}

pub const DEFAULT_OUT_DIR: &str = "strichartz-out";

fn load_config(command: &Command) -> Result<Config, RunError> {
    let text = match &command.common().config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?,
        None => command.builtin(),
    };
    let mut cfg = Config::parse(&text)?;
    if let Some(seed) = command.common().seed {
        let section = match command {
            Command::Measure { .. } => "measure",
            _ => "data",
        };
        cfg.set(section, "seed", seed.to_string());
    }
    Ok(cfg)
}

fn execute(command: &Command, cfg: &mut Config) -> Result<Report, RunError> {
    match command {
        Command::Scaling { .. } => commands::scaling(cfg),
        Command::Decay { .. } => commands::decay(cfg),
        Command::Mixed { .. } => commands::mixed(cfg),
        Command::Measure { .. } => commands::measure(cfg),
        Command::Weyl { .. } => commands::weyl(cfg),
        Command::Counterexample { .. } => commands::counterexample(cfg),
        Command::Selftest { .. } => Ok(commands::selftest()),
    }
}

fn render_summary(command: &Command, report: &Report) -> String {
    let mut out = format!("strichartz {}\n", command.name());
    for line in &report.lines {
        out.push_str(line);
        out.push('\n');
    }
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
    }
    out
}

fn write_outputs(
    command: &Command,
    cfg: &Config,
    report: &Report,
    dir: &Path,
    started: Instant,
) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: dir.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut outputs = Vec::new();
    for t in &report.tables {
        outputs.push(t.write(dir)?);
    }
    let summary = dir.join("summary.txt");
    std::fs::write(&summary, render_summary(command, report)).map_err(io)?;
    outputs.push(summary);
    let manifest = RunManifest {
        subcommand: command.name().into(),
        config: cfg.restricted(command.sections()).render(),
        outputs,
        duration_secs: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").into(),
    };
    let path = manifest.write(dir).map_err(io)?;
    for p in manifest.outputs.iter().chain([&path]) {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

/// Runs one invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let command = &cli.command;
    let result = (|| {
        let mut cfg = load_config(command)?;
        let out_dir = match &command.common().out {
            Some(p) => p.clone(),
            None => PathBuf::from(
                cfg.raw("output", "out_dir")
                    .unwrap_or(DEFAULT_OUT_DIR)
                    .to_string(),
            ),
        };
        cfg.set("output", "out_dir", out_dir.display().to_string());
        let report = execute(command, &mut cfg)?;
        write_outputs(command, &cfg, &report, &out_dir, started)?;
        Ok::<_, RunError>(report)
    })();
    match result {
        Ok(report) => {
            print!("{}", render_summary(command, &report));
            if report.checks.iter().all(|c| c.passed) {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
