//! Monte Carlo estimation of the mean measure of the local-maxima point
//! process on survival rectangles `[l, ∞) × [r, ∞)`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::locations::{LocalMaxPoint, LocationSample};

use super::density::local_density;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuThreshold {
    pub l: f64,
    pub r: f64,
}

/// Thresholds `(t, 1 - t)` used by the density identity.
pub fn frame_thresholds(ts: &[f64]) -> Vec<NuThreshold> {
    ts.iter().map(|&t| NuThreshold { l: t, r: 1.0 - t }).collect()
}

/// Streaming accumulator for [`EmpiricalNu`]; merges are order independent.
#[derive(Debug, Clone, PartialEq)]
pub struct NuAccumulator {
    thresholds: Vec<NuThreshold>,
    interval: (f64, f64),
    slack: f64,
    sums: Vec<f64>,
    sum_squares: Vec<f64>,
    dropped: Vec<u64>,
    replicates: u64,
}

impl NuAccumulator {
    /// Counts points with `s` in `interval`. Thresholds must be at least two
    /// grid steps.
    pub fn new(thresholds: Vec<NuThreshold>, grid_step: f64, interval: (f64, f64)) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::InvalidInput("no thresholds".into()));
        }
        for th in &thresholds {
            if !(th.l >= 2.0 * grid_step && th.r >= 2.0 * grid_step) {
                return Err(domain(format!(
                    "threshold ({}, {}) below the discretisation floor 2 × {grid_step}",
                    th.l, th.r
                )));
            }
        }
        if !(interval.0 < interval.1) {
            return Err(Error::EmptyInterval { a: interval.0, b: interval.1 });
        }
        let k = thresholds.len();
        Ok(Self {
            thresholds,
            interval,
            slack: 1e-9 * grid_step,
            sums: vec![0.0; k],
            sum_squares: vec![0.0; k],
            dropped: vec![0; k],
            replicates: 0,
        })
    }

    /// Adds one replicate's point cloud.
    pub fn add(&mut self, points: &[LocalMaxPoint]) {
        let (a, b) = self.interval;
        let inside: Vec<&LocalMaxPoint> = points
            .iter()
            .filter(|p| p.s >= a - self.slack && p.s <= b + self.slack)
            .collect();
        for (k, th) in self.thresholds.iter().enumerate() {
            let mut count = 0u64;
            for p in &inside {
                match (p.l.at_least(th.l), p.r.at_least(th.r)) {
                    (Some(false), _) | (_, Some(false)) => {}
                    (Some(true), Some(true)) => count += 1,
                    _ => self.dropped[k] += 1,
                }
            }
            let c = count as f64;
            self.sums[k] += c;
            self.sum_squares[k] += c * c;
        }
        self.replicates += 1;
    }

    pub fn merge(mut self, other: &Self) -> Result<Self> {
        if self.thresholds != other.thresholds || self.interval != other.interval {
            return Err(Error::InvalidInput("cannot merge accumulators with different settings".into()));
        }
        for k in 0..self.sums.len() {
            self.sums[k] += other.sums[k];
            self.sum_squares[k] += other.sum_squares[k];
            self.dropped[k] += other.dropped[k];
        }
        self.replicates += other.replicates;
        Ok(self)
    }

    pub fn finish(&self) -> Result<EmpiricalNu> {
        if self.replicates == 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let n = self.replicates as f64;
        let len = self.interval.1 - self.interval.0;
        let estimates: Vec<f64> = self.sums.iter().map(|s| s / n / len).collect();
        let standard_errors = self
            .sums
            .iter()
            .zip(&self.sum_squares)
            .map(|(s, ss)| {
                if self.replicates < 2 {
                    return f64::NAN;
                }
                let mean = s / n;
                let var = ((ss - n * mean * mean) / (n - 1.0)).max(0.0);
                (var / n).sqrt() / len
            })
            .collect();
        Ok(EmpiricalNu {
            thresholds: self.thresholds.clone(),
            estimates,
            standard_errors,
            dropped: self.dropped.clone(),
            replicates: self.replicates,
        })
    }
}

/// Estimated `ν([l, ∞) × [r, ∞))` per threshold, as mean counts per unit
/// length of the counting interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalNu {
    pub thresholds: Vec<NuThreshold>,
    pub estimates: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// Points whose censoring hid the rectangle membership, per threshold.
    pub dropped: Vec<u64>,
    pub replicates: u64,
}

pub fn estimate_nu(
    clouds: &[Vec<LocalMaxPoint>],
    thresholds: Vec<NuThreshold>,
    grid_step: f64,
    interval: (f64, f64),
) -> Result<EmpiricalNu> {
    let mut acc = NuAccumulator::new(thresholds, grid_step, interval)?;
    for c in clouds {
        acc.add(c);
    }
    acc.finish()
}

/// One point of the comparison between `ν̂([t, ∞) × [1-t, ∞))` and the
/// location density `f̂(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameGap {
    pub t: f64,
    pub nu: f64,
    pub nu_se: f64,
    pub density: f64,
    pub density_se: f64,
    pub relative_gap: f64,
    pub combined_se: f64,
    pub pass: bool,
}

/// Compares a frame-diagonal [`EmpiricalNu`] with local density estimates of
/// the supremum location; each point passes if the relative gap is within
/// `rel_tol` or the absolute gap within `n_se` combined standard errors.
pub fn frame_identity_gaps(
    nu: &EmpiricalNu,
    locations: &[LocationSample],
    halfwidth: f64,
    rel_tol: f64,
    n_se: f64,
) -> Result<Vec<FrameGap>> {
    nu.thresholds
        .iter()
        .enumerate()
        .map(|(k, th)| {
            let t = th.l;
            if (th.r - (1.0 - t)).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("threshold ({}, {}) is not on the frame diagonal", th.l, th.r)));
            }
            let (density, density_se) = local_density(locations, t, halfwidth)?;
            let (est, se) = (nu.estimates[k], nu.standard_errors[k]);
            let gap = (est - density).abs();
            let relative_gap = gap / density.max(f64::MIN_POSITIVE);
            let combined_se = (se * se + density_se * density_se).sqrt();
            Ok(FrameGap {
                t,
                nu: est,
                nu_se: se,
                density,
                density_se,
                relative_gap,
                combined_se,
                pass: relative_gap <= rel_tol || gap <= n_se * combined_se,
            })
        })
        .collect()
}
