//! Active-set non-negative least squares (Lawson–Hanson).
//!
//! The optional mass cap `Σ w <= cap` is handled by re-solving with the
//! equality `Σ w = cap` when the unconstrained optimum exceeds it; the passive
//! set subproblems then eliminate one variable against the equality.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsOptions {
    pub mass_cap: Option<f64>,
    /// Tikhonov damping `λ` on `‖w‖₂²`.
    pub damping: f64,
    /// KKT tolerance, relative to `max(1, ‖Aᵀb‖∞)`.
    pub tolerance: f64,
    /// Outer iteration limit; `None` means `3 × columns`.
    pub max_iterations: Option<usize>,
}

impl Default for NnlsOptions {
    fn default() -> Self {
        Self { mass_cap: None, damping: 0.0, tolerance: 1e-10, max_iterations: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NnlsSolution {
    pub weights: Vec<f64>,
    /// `‖A w - b‖₂` without the damping rows.
    pub residual: f64,
    pub iterations: usize,
    pub cap_active: bool,
}

/// `min ‖A w − b‖₂` subject to `w >= 0` (and `Σ w <= cap` if set).
pub fn nnls_solve(a: &DMatrix<f64>, b: &[f64], opts: &NnlsOptions) -> Result<NnlsSolution> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::InvalidInput(format!("matrix has {m} rows but b has {}", b.len())));
    }
    if n == 0 {
        return Err(Error::InvalidInput("design has no columns".into()));
    }
    if let Some(k) = b.iter().position(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(Error::InvalidInput(format!("b[{k}] = {} is not a finite non-negative value", b[k])));
    }
    if !(opts.damping >= 0.0) {
        return Err(Error::InvalidInput("damping must be >= 0".into()));
    }
    if let Some(cap) = opts.mass_cap {
        if !(cap >= 0.0) {
            return Err(Error::InvalidInput(format!("mass cap must be >= 0, got {cap}")));
        }
    }

    let (aa, bb) = if opts.damping > 0.0 {
        let mut aa = DMatrix::zeros(m + n, n);
        aa.rows_mut(0, m).copy_from(a);
        let s = opts.damping.sqrt();
        for j in 0..n {
            aa[(m + j, j)] = s;
        }
        let mut bb = DVector::zeros(m + n);
        bb.rows_mut(0, m).copy_from(&DVector::from_column_slice(b));
        (aa, bb)
    } else {
        (a.clone(), DVector::from_column_slice(b))
    };

    let scale = (aa.transpose() * &bb).amax().max(1.0);
    let tol = opts.tolerance * scale;
    let max_iter = opts.max_iterations.unwrap_or(3 * n);

    let mut solver = ActiveSet { a: &aa, b: &bb, tol, max_iter };
    let (mut w, mut iterations) = solver.run(None)?;
    let mut cap_active = false;
    if let Some(cap) = opts.mass_cap {
        if w.sum() > cap {
            cap_active = true;
            if cap == 0.0 {
                w.fill(0.0);
            } else {
                let (wc, it) = solver.run(Some(cap))?;
                iterations += it;
                w = wc;
                let total = w.sum();
                if total > cap {
                    w *= cap / total;
                }
            }
        }
    }
    let residual = (a * &w - DVector::from_column_slice(b)).norm();
    Ok(NnlsSolution { weights: w.iter().copied().collect(), residual, iterations, cap_active })
}

struct ActiveSet<'a> {
    a: &'a DMatrix<f64>,
    b: &'a DVector<f64>,
    tol: f64,
    max_iter: usize,
}

/// Columns whose `R` diagonal falls below this fraction of the largest are
/// treated as dependent on the passive set.
const RANK_TOL: f64 = 1e-12;

impl ActiveSet<'_> {
    /// Runs the active-set iteration; `sum_to` switches to `Σ w = sum_to`.
    fn run(&mut self, sum_to: Option<f64>) -> Result<(DVector<f64>, usize)> {
        let n = self.a.ncols();
        let mut x = DVector::zeros(n);
        let mut passive = vec![false; n];
        let mut rejected = vec![false; n];

        if let Some(cap) = sum_to {
            let grad = self.a.transpose() * self.b;
            let start = (0..n).max_by(|&i, &j| grad[i].total_cmp(&grad[j])).unwrap();
            x[start] = cap;
            passive[start] = true;
        }

        let mut iterations = 0;
        loop {
            let grad = self.a.transpose() * (self.b - self.a * &x);
            let level = match sum_to {
                None => 0.0,
                Some(_) => {
                    let (s, c) = (0..n).filter(|&j| passive[j]).fold((0.0, 0usize), |(s, c), j| (s + grad[j], c + 1));
                    s / c as f64
                }
            };
            let candidate = (0..n)
                .filter(|&j| !passive[j] && !rejected[j])
                .max_by(|&i, &j| grad[i].total_cmp(&grad[j]));
            let Some(j) = candidate.filter(|&j| grad[j] - level > self.tol) else {
                return Ok((x, iterations));
            };
            iterations += 1;
            if iterations > self.max_iter {
                let residual = (self.b - self.a * &x).norm();
                return Err(Error::NonConvergence { iterations: self.max_iter, residual });
            }
            passive[j] = true;

            let mut first = true;
            loop {
                let Some(z) = self.subproblem(&passive, sum_to) else {
                    passive[j] = false;
                    rejected[j] = true;
                    break;
                };
                if first && z[j] <= 0.0 {
                    passive[j] = false;
                    rejected[j] = true;
                    break;
                }
                first = false;
                if (0..n).filter(|&k| passive[k]).all(|k| z[k] > 0.0) {
                    x = z;
                    rejected.fill(false);
                    break;
                }
                let mut alpha = f64::INFINITY;
                for k in (0..n).filter(|&k| passive[k] && z[k] <= 0.0) {
                    alpha = alpha.min(x[k] / (x[k] - z[k]));
                }
                x += (z - &x) * alpha;
                let floor = f64::EPSILON * x.amax();
                for k in 0..n {
                    if passive[k] && x[k] <= floor {
                        passive[k] = false;
                        x[k] = 0.0;
                    }
                }
                rejected.fill(false);
                if !passive.iter().any(|&p| p) {
                    break;
                }
            }
        }
    }

    /// Least squares restricted to the passive columns, optionally with
    /// `Σ z = sum_to`. Returns `None` if the passive columns are dependent.
    fn subproblem(&self, passive: &[bool], sum_to: Option<f64>) -> Option<DVector<f64>> {
        let cols: Vec<usize> = (0..passive.len()).filter(|&k| passive[k]).collect();
        let mut z = DVector::zeros(passive.len());
        match sum_to {
            None => {
                let sub = self.a.select_columns(&cols);
                let coef = least_squares(sub, self.b.clone())?;
                for (c, &k) in coef.iter().zip(&cols) {
                    z[k] = *c;
                }
            }
            Some(cap) => {
                let (&pivot, rest) = cols.split_first()?;
                if rest.is_empty() {
                    z[pivot] = cap;
                    return Some(z);
                }
                let pcol = self.a.column(pivot);
                let mut sub = self.a.select_columns(rest);
                for mut c in sub.column_iter_mut() {
                    c -= &pcol;
                }
                let rhs = self.b - pcol * cap;
                let coef = least_squares(sub, rhs)?;
                for (c, &k) in coef.iter().zip(rest) {
                    z[k] = *c;
                }
                z[pivot] = cap - coef.sum();
            }
        }
        Some(z)
    }
}

fn least_squares(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    let k = a.ncols();
    if a.nrows() < k {
        return None;
    }
    let qr = a.qr();
    let r = qr.r();
    let diag_max = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if diag_max == 0.0 || (0..k).any(|i| r[(i, i)].abs() <= RANK_TOL * diag_max) {
        return None;
    }
    let qtb = qr.q().transpose() * b;
    r.solve_upper_triangular(&qtb)
}
