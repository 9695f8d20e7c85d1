use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Uniform time grid `t_start + k * step` for `k in 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    t_start: f64,
    t_end: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start >= t_end {
            return Err(domain(format!("grid needs t_start < t_end, got [{t_start}, {t_end}]")));
        }
        if n_points < 2 {
            return Err(domain(format!("grid needs at least 2 points, got {n_points}")));
        }
        Ok(Self { t_start, t_end, n_points })
    }

    /// Grid on `[0, 1]`.
    pub fn unit(n_points: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n_points)
    }

    /// Grid on `[-window, 1 + window]` whose step divides the unit interval
    /// into `points_per_unit` steps, so 0 and 1 are grid points.
    pub fn padded_unit(window: f64, points_per_unit: usize) -> Result<Self> {
        let window_steps = window * points_per_unit as f64;
        if !(window >= 0.0) || points_per_unit == 0 || (window_steps - window_steps.round()).abs() > 1e-9 {
            return Err(domain(format!(
                "window {window} must be a non-negative multiple of 1/{points_per_unit}"
            )));
        }
        let steps = ((1.0 + 2.0 * window) * points_per_unit as f64).round() as usize;
        Self::new(-window, 1.0 + window, steps + 1)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn len(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            self.t_end
        } else {
            self.t_start + k as f64 * self.step()
        }
    }

    /// Inclusive index range of the grid points inside `[a, b]`, allowing a
    /// relative slack of 1e-9 steps at both ends.
    pub fn index_range(&self, a: f64, b: f64) -> Result<(usize, usize)> {
        if !(a < b) {
            return Err(Error::EmptyInterval { a, b });
        }
        let step = self.step();
        let slack = 1e-9;
        if a < self.t_start - slack * step || b > self.t_end + slack * step {
            return Err(domain(format!(
                "interval [{a}, {b}] not covered by grid [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        let lo = ((a - self.t_start) / step - slack).ceil().max(0.0) as usize;
        let hi = (((b - self.t_start) / step + slack).floor() as usize).min(self.n_points - 1);
        if lo > hi {
            return Err(Error::EmptyInterval { a, b });
        }
        Ok((lo, hi))
    }

    /// Same index layout with every time multiplied by `a > 0`.
    pub fn scaled(&self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(domain(format!("time scale must be positive, got {a}")));
        }
        Self::new(a * self.t_start, a * self.t_end, self.n_points)
    }
}

/// A sampled path, anchored at the first grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    grid: GridSpec,
    values: Vec<f64>,
    hurst: f64,
}

impl PathGrid {
    pub fn new(grid: GridSpec, values: Vec<f64>, hurst: f64) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidInput(format!(
                "path has {} values for a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidInput(format!("path must start at 0, got {}", values[0])));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite path value at index {k}")));
        }
        if !(hurst > 0.0) {
            return Err(domain(format!("self-similarity exponent must be positive, got {hurst}")));
        }
        Ok(Self { grid, values, hurst })
    }

    /// Builds a path from increments; `values[0] = 0`, `values[k] = sum of the first k increments`.
    pub fn from_increments(grid: GridSpec, increments: &[f64], hurst: f64) -> Result<Self> {
        let mut values = Vec::with_capacity(increments.len() + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for dx in increments {
            acc += dx;
            values.push(acc);
        }
        Self::new(grid, values, hurst)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid.time(k)
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// The path `Y(a t) = X(t)`: same values on a grid stretched by `a`.
    pub fn time_rescaled(&self, a: f64) -> Result<Self> {
        Ok(Self { grid: self.grid.scaled(a)?, values: self.values.clone(), hurst: self.hurst })
    }
}
