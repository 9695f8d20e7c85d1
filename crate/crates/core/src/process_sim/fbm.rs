//! Fractional Gaussian noise.
//!
//! Exact sampling by circulant embedding (Davies–Harte). If the embedding has a
//! materially negative eigenvalue the sampler falls back to a Cholesky factor
//! of the Toeplitz increment covariance.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{domain, Result};

/// `Cov(B_H(s), B_H(t))` for standard fractional Brownian motion.
pub fn fbm_cov(h: f64, s: f64, t: f64) -> Result<f64> {
    check_hurst(h)?;
    let two_h = 2.0 * h;
    Ok(0.5 * (s.abs().powf(two_h) + t.abs().powf(two_h) - (s - t).abs().powf(two_h)))
}

/// Autocovariance of unit-step fractional Gaussian noise at lag `k`.
pub fn fgn_autocov(h: f64, k: usize) -> f64 {
    let k = k as f64;
    let two_h = 2.0 * h;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

pub(crate) fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("Hurst exponent must lie in (0, 1), got {h}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FgnMethod {
    DaviesHarte,
    Cholesky,
}

#[derive(Clone)]
enum Engine {
    DaviesHarte { half: usize, scale: Vec<f64>, fft: Arc<dyn Fft<f64>> },
    Cholesky { lower: DMatrix<f64> },
}

/// Sampler for `n` consecutive fGn increments on a grid of step `step`.
#[derive(Clone)]
pub struct FgnSampler {
    n: usize,
    std_step: f64,
    engine: Engine,
}

/// Eigenvalues below `-NEG_TOL * max` count as an embedding failure;
/// smaller negatives are rounding and are clamped to zero.
const NEG_TOL: f64 = 1e-10;

impl FgnSampler {
    pub fn new(h: f64, n: usize, step: f64) -> Result<Self> {
        check_hurst(h)?;
        if n == 0 {
            return Err(domain("need at least one increment"));
        }
        match Self::davies_harte(h, n, step)? {
            Some(s) => Ok(s),
            None => Self::cholesky(h, n, step),
        }
    }

    /// Circulant embedding; `Ok(None)` when the embedding is not non-negative.
    pub fn davies_harte(h: f64, n: usize, step: f64) -> Result<Option<Self>> {
        check_hurst(h)?;
        let half = n.saturating_sub(1).max(1).next_power_of_two();
        let size = 2 * half;
        let mut row: Vec<Complex<f64>> = Vec::with_capacity(size);
        for k in 0..=half {
            row.push(Complex::new(fgn_autocov(h, k), 0.0));
        }
        for k in (1..half).rev() {
            row.push(Complex::new(fgn_autocov(h, k), 0.0));
        }
        let fft = FftPlanner::new().plan_fft_forward(size);
        fft.process(&mut row);
        let max = row.iter().map(|c| c.re).fold(0.0, f64::max);
        if row.iter().any(|c| c.re < -NEG_TOL * max) {
            return Ok(None);
        }
        let scale = row
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let lambda = c.re.max(0.0);
                if k == 0 || k == half {
                    (lambda / size as f64).sqrt()
                } else {
                    (lambda / (2 * size) as f64).sqrt()
                }
            })
            .collect();
        Ok(Some(Self {
            n,
            std_step: step.powf(h),
            engine: Engine::DaviesHarte { half, scale, fft },
        }))
    }

    pub fn cholesky(h: f64, n: usize, step: f64) -> Result<Self> {
        check_hurst(h)?;
        let cov = DMatrix::from_fn(n, n, |i, j| fgn_autocov(h, i.abs_diff(j)));
        let lower = cov
            .cholesky()
            .ok_or_else(|| domain("fGn covariance is not positive definite"))?
            .unpack();
        Ok(Self { n, std_step: step.powf(h), engine: Engine::Cholesky { lower } })
    }

    pub fn method(&self) -> FgnMethod {
        match self.engine {
            Engine::DaviesHarte { .. } => FgnMethod::DaviesHarte,
            Engine::Cholesky { .. } => FgnMethod::Cholesky,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = match &self.engine {
            Engine::DaviesHarte { half, scale, fft } => {
                let half = *half;
                let size = 2 * half;
                let mut w = vec![Complex::new(0.0, 0.0); size];
                w[0] = Complex::new(scale[0] * rng.sample::<f64, _>(StandardNormal), 0.0);
                w[half] = Complex::new(scale[half] * rng.sample::<f64, _>(StandardNormal), 0.0);
                for k in 1..half {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    let z = Complex::new(scale[k] * re, scale[k] * im);
                    w[k] = z;
                    w[size - k] = z.conj();
                }
                fft.process(&mut w);
                w.iter().take(self.n).map(|c| c.re).collect::<Vec<_>>()
            }
            Engine::Cholesky { lower } => {
                let z: Vec<f64> = (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
                (0..self.n)
                    .map(|i| (0..=i).map(|j| lower[(i, j)] * z[j]).sum())
                    .collect()
            }
        };
        for x in &mut out {
            *x *= self.std_step;
        }
        out
    }
}
