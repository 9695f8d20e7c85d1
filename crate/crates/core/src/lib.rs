//! Simulation and verification toolkit for the location of the path supremum
//! of self-similar processes with stationary increments.
//!
//! * [`process_sim`] draws fBm, stable Lévy and Brownian paths on uniform grids.
//! * [`locations`] extracts the supremum location, the largest-jump location
//!   and the local-maxima point process with left/right return distances.
//! * [`spectral`] evaluates the two-branch basis densities, their mixtures and
//!   the universal density bounds.
//! * [`mixture_inverse`] recovers a discrete mixing measure from a density
//!   curve by non-negative least squares.
//! * [`empirics`] holds the Monte Carlo estimators and statistical checks.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod empirics;
pub mod error;
pub mod io;
pub mod locations;
pub mod mixture_inverse;
pub mod par;
pub mod process_sim;
pub mod seed;
pub mod spectral;

pub use error::{Error, Result};
