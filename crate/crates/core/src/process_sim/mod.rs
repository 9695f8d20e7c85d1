//! Sample paths of self-similar processes with stationary increments.
//!
//! Three families are supported: fractional Brownian motion, strictly
//! α-stable Lévy motion, and Brownian motion. Every path is a pure function of
//! `(SimSpec, replicate_index)` and is anchored so that `values[0] = 0`.

mod fbm;
mod grid;
mod stable;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use fbm::{fbm_cov, fgn_autocov, FgnMethod, FgnSampler};
pub use grid::{GridSpec, PathGrid};
pub use stable::StableSampler;

use crate::error::{domain, Error, Result};
use crate::seed::replicate_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Fbm { hurst: f64 },
    StableLevy { alpha: f64, beta: f64 },
    Brownian,
}

impl Family {
    /// Self-similarity exponent `H`.
    pub fn hurst(&self) -> f64 {
        match *self {
            Family::Fbm { hurst } => hurst,
            Family::StableLevy { alpha, .. } => 1.0 / alpha,
            Family::Brownian => 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Fbm { hurst } => fbm::check_hurst(hurst),
            Family::StableLevy { alpha, beta } => StableSampler::new(alpha, beta).map(|_| ()),
            Family::Brownian => Ok(()),
        }
    }

    /// Whether the process is equal in law to its time reversal.
    pub fn is_time_reversible(&self) -> bool {
        match *self {
            Family::Fbm { .. } | Family::Brownian => true,
            Family::StableLevy { alpha, beta } => beta == 0.0 || alpha == 2.0,
        }
    }

    /// Independent increments (the Lévy case).
    pub fn is_levy(&self) -> bool {
        match *self {
            Family::Fbm { hurst } => hurst == 0.5,
            Family::StableLevy { .. } | Family::Brownian => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub family: Family,
    pub grid: GridSpec,
    pub master_seed: u64,
    pub replicates: usize,
}

impl SimSpec {
    pub fn new(family: Family, grid: GridSpec, master_seed: u64, replicates: usize) -> Result<Self> {
        let spec = Self { family, grid, master_seed, replicates };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.replicates == 0 {
            return Err(domain("need at least one replicate"));
        }
        Ok(())
    }
}

#[derive(Clone)]
enum Engine {
    Brownian,
    Fbm(FgnSampler),
    Stable(StableSampler),
}

/// A prepared generator for one [`SimSpec`].
///
/// Set-up work (circulant eigenvalues, Cholesky factors) is done once; paths
/// are then drawn per replicate index, concurrently if desired.
#[derive(Clone)]
pub struct Simulator {
    spec: SimSpec,
    engine: Engine,
}

impl Simulator {
    pub fn new(spec: &SimSpec) -> Result<Self> {
        spec.validate()?;
        let increments = spec.grid.n_points() - 1;
        let engine = match spec.family {
            Family::Brownian => Engine::Brownian,
            Family::Fbm { hurst } => Engine::Fbm(FgnSampler::new(hurst, increments, spec.grid.step())?),
            Family::StableLevy { alpha, beta } => Engine::Stable(StableSampler::new(alpha, beta)?),
        };
        Ok(Self { spec: *spec, engine })
    }

    /// fBm generator forced onto the Cholesky route (test oracle).
    pub fn fbm_cholesky(spec: &SimSpec) -> Result<Self> {
        spec.validate()?;
        let Family::Fbm { hurst } = spec.family else {
            return Err(Error::InvalidInput("Cholesky route is fBm only".into()));
        };
        let fgn = FgnSampler::cholesky(hurst, spec.grid.n_points() - 1, spec.grid.step())?;
        Ok(Self { spec: *spec, engine: Engine::Fbm(fgn) })
    }

    pub fn spec(&self) -> &SimSpec {
        &self.spec
    }

    /// Which fGn construction is in use, for fBm specs.
    pub fn fgn_method(&self) -> Option<FgnMethod> {
        match &self.engine {
            Engine::Fbm(s) => Some(s.method()),
            _ => None,
        }
    }

    pub fn increments(&self, replicate_index: usize) -> Result<Vec<f64>> {
        if replicate_index >= self.spec.replicates {
            return Err(domain(format!(
                "replicate index {replicate_index} out of range (replicates = {})",
                self.spec.replicates
            )));
        }
        let mut rng = replicate_rng(self.spec.master_seed, replicate_index as u64);
        let n = self.spec.grid.n_points() - 1;
        let step = self.spec.grid.step();
        Ok(match &self.engine {
            Engine::Brownian => {
                let sd = step.sqrt();
                (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()
            }
            Engine::Fbm(fgn) => fgn.sample(&mut rng),
            Engine::Stable(st) => {
                let scale = step.powf(1.0 / st.alpha());
                (0..n).map(|_| scale * st.sample(&mut rng)).collect()
            }
        })
    }

    pub fn path(&self, replicate_index: usize) -> Result<PathGrid> {
        let inc = self.increments(replicate_index)?;
        PathGrid::from_increments(self.spec.grid, &inc, self.spec.family.hurst())
    }
}

/// Fractional Brownian motion path for one replicate.
pub fn gen_fbm(spec: &SimSpec, replicate_index: usize) -> Result<PathGrid> {
    if !matches!(spec.family, Family::Fbm { .. }) {
        return Err(Error::InvalidInput("gen_fbm needs an fbm family".into()));
    }
    Simulator::new(spec)?.path(replicate_index)
}

/// Strictly stable Lévy motion path for one replicate.
pub fn gen_stable_levy(spec: &SimSpec, replicate_index: usize) -> Result<PathGrid> {
    if !matches!(spec.family, Family::StableLevy { .. }) {
        return Err(Error::InvalidInput("gen_stable_levy needs a stable_levy family".into()));
    }
    Simulator::new(spec)?.path(replicate_index)
}

pub fn gen_path(spec: &SimSpec, replicate_index: usize) -> Result<PathGrid> {
    Simulator::new(spec)?.path(replicate_index)
}
