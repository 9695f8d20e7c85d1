use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use suploc::process_sim::Family;

use crate::UsageError;

#[derive(Debug, Parser)]
#[command(name = "suploc", version, about = "Simulate ss,si paths and check the laws of their supremum location")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Brownian,
    Fbm,
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Basis,
    Reversible,
    Bounds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write sample paths as CSV, one file per replicate.
    Simulate,
    /// Monte Carlo law of the supremum location.
    Tau,
    /// Monte Carlo law of the largest-jump location.
    Jump,
    /// Local-maxima point cloud and the frame identity.
    Nu,
    /// Marginal tail exponents and product form of the point cloud.
    LevyCheck,
    /// Dump a basis density or the universal bounds.
    Spectral {
        #[arg(long, value_enum, default_value_t = CurveKind::Basis)]
        curve: CurveKind,
        #[arg(long, default_value_t = 0.5)]
        v: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Fit a mixing measure to a density curve CSV (`t,value`).
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 199)]
        atoms: usize,
        #[arg(long, default_value_t = 1.0)]
        mass_cap: f64,
        #[arg(long, default_value_t = 0.0)]
        damping: f64,
    },
    /// Check a histogram CSV (`t,value,se`) against the density bounds.
    BoundCheck {
        #[arg(long)]
        input: PathBuf,
        /// Also apply the time-reversible bound.
        #[arg(long)]
        reversible: bool,
    },
}

/// Simulation flags; each one overrides the matching `--config` entry.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long, global = true, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long, global = true)]
    pub hurst: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Grid steps per unit time.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Padding W of the window [-W, 1 + W] for point-process runs.
    #[arg(long, global = true)]
    pub window: Option<f64>,
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "SUPLOC_WORKERS")]
    pub workers: Option<usize>,
    /// JSON manifest with any of the settings above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<FamilyName>,
    pub hurst: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n: Option<usize>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub window: Option<f64>,
    pub bins: Option<usize>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Fully resolved settings.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub family: Family,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub window: f64,
    pub bins: usize,
    pub out: PathBuf,
    pub workers: Option<usize>,
}

pub fn load_config(path: &Path) -> anyhow::Result<ConfigFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
}

impl RunArgs {
    pub fn resolve(&self) -> anyhow::Result<Settings> {
        let file = match &self.config {
            Some(p) => load_config(p)?,
            None => ConfigFile::default(),
        };
        let name = self.family.or(file.family).unwrap_or(FamilyName::Brownian);
        let hurst = self.hurst.or(file.hurst);
        let alpha = self.alpha.or(file.alpha);
        let beta = self.beta.or(file.beta);
        let family = match name {
            FamilyName::Brownian => Family::Brownian,
            FamilyName::Fbm => Family::Fbm {
                hurst: hurst.ok_or_else(|| UsageError("--family fbm needs --hurst".into()))?,
            },
            FamilyName::Stable => Family::StableLevy {
                alpha: alpha.ok_or_else(|| UsageError("--family stable needs --alpha".into()))?,
                beta: beta.unwrap_or(0.0),
            },
        };
        family.validate().map_err(|e| UsageError(e.to_string()))?;
        let s = Settings {
            family,
            n: self.n.or(file.n).unwrap_or(4096),
            reps: self.reps.or(file.reps).unwrap_or(1000),
            seed: self.seed.or(file.seed).unwrap_or(0),
            window: self.window.or(file.window).unwrap_or(3.0),
            bins: self.bins.or(file.bins).unwrap_or(50),
            out: self.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            workers: self.workers.or(file.workers),
        };
        if s.n < 2 || s.reps == 0 || s.bins < 2 || s.window.is_nan() || s.window <= 0.0 {
            return Err(UsageError("need --n >= 2, --reps >= 1, --bins >= 2 and --window > 0".into()).into());
        }
        if s.workers == Some(0) {
            return Err(UsageError("--workers must be positive".into()).into());
        }
        Ok(s)
    }
}
