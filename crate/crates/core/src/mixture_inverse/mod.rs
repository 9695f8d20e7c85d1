//! Recovery of the mixing sub-probability measure from a density curve.
//!
//! The curve is matched pointwise by `Σ_j w_j f_{v_j}(t_i)` with `w >= 0` and
//! `Σ w <= mass_cap`. Each `f_v` integrates to one, so `w_j` is directly the
//! mass of the atom at `v_j`.

mod nnls;

use nalgebra::DMatrix;
use serde::Serialize;

pub use nnls::{nnls_solve, NnlsOptions, NnlsSolution};

use crate::error::{domain, Result};
use crate::spectral::{basis_density, Atom, DensityCurve, MixtureMeasure};

/// Kernel matrix `A[i, j] = f_{v_j}(t_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    t: Vec<f64>,
    v: Vec<f64>,
    a: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn t_grid(&self) -> &[f64] {
        &self.t
    }

    pub fn v_grid(&self) -> &[f64] {
        &self.v
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }
}

pub fn build_design(t_grid: &[f64], v_grid: &[f64]) -> Result<DesignMatrix> {
    if t_grid.is_empty() || v_grid.is_empty() {
        return Err(domain("design needs non-empty grids"));
    }
    for &x in t_grid.iter().chain(v_grid) {
        if !(x > 0.0 && x < 1.0) {
            return Err(domain(format!("grid point {x} is not strictly inside (0, 1)")));
        }
    }
    let mut a = DMatrix::zeros(t_grid.len(), v_grid.len());
    for (j, &v) in v_grid.iter().enumerate() {
        for (i, &t) in t_grid.iter().enumerate() {
            a[(i, j)] = basis_density(v, t)?;
        }
    }
    Ok(DesignMatrix { t: t_grid.to_vec(), v: v_grid.to_vec(), a })
}

/// Atoms at `j / (k + 1)` for `j = 1..=k`.
pub fn default_v_grid(k: usize) -> Vec<f64> {
    (1..=k).map(|j| j as f64 / (k + 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub mass_cap: f64,
    pub damping: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { mass_cap: 1.0, damping: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub l2: f64,
    pub sup: f64,
    pub total_mass: f64,
    pub iterations: usize,
    pub cap_active: bool,
    /// Fitted curve on the input grid.
    #[serde(skip)]
    pub reproduced: Vec<f64>,
}

/// Non-negative fit of a density curve by basis atoms on `v_grid`.
pub fn fit_mixture(
    curve: &DensityCurve,
    v_grid: &[f64],
    opts: &FitOptions,
) -> Result<(MixtureMeasure, ResidualReport)> {
    let design = build_design(curve.t(), v_grid)?;
    let sol = nnls_solve(
        design.matrix(),
        curve.values(),
        &NnlsOptions { mass_cap: Some(opts.mass_cap), damping: opts.damping, ..Default::default() },
    )?;
    let w = nalgebra::DVector::from_column_slice(&sol.weights);
    let reproduced: Vec<f64> = (design.matrix() * &w).iter().copied().collect();
    let sup = reproduced
        .iter()
        .zip(curve.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let atoms: Vec<Atom> = v_grid
        .iter()
        .zip(&sol.weights)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&v, &mass)| Atom { v, mass })
        .collect();
    let total_mass: f64 = atoms.iter().map(|a| a.mass).sum();
    // errors if a cap above one let the mass overflow
    let measure = MixtureMeasure::new(atoms)?;
    Ok((
        measure,
        ResidualReport {
            l2: sol.residual,
            sup,
            total_mass,
            iterations: sol.iterations,
            cap_active: sol.cap_active,
            reproduced,
        },
    ))
}
