//! Strictly stable variates by the Chambers–Mallows–Stuck transform.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use rand_distr::{Exp1, Open01};

use crate::error::{domain, Result};

/// Standard strictly stable law with index `alpha` and skewness `beta`.
///
/// `alpha = 2` is rescaled to unit variance so a path built from these
/// increments is standard Brownian motion. `alpha = 1` is strictly stable
/// only when `beta = 0` (Cauchy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableSampler {
    alpha: f64,
    beta: f64,
    shift: f64,
    scale: f64,
}

impl StableSampler {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(domain(format!("stable index must lie in (0, 2], got {alpha}")));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(domain(format!("stable skewness must lie in [-1, 1], got {beta}")));
        }
        if alpha == 1.0 && beta != 0.0 {
            return Err(domain("alpha = 1 with beta != 0 is not strictly stable"));
        }
        let (shift, scale) = if alpha == 1.0 || alpha == 2.0 {
            (0.0, 1.0)
        } else {
            let zeta = beta * (PI * alpha / 2.0).tan();
            (zeta.atan() / alpha, (1.0 + zeta * zeta).powf(1.0 / (2.0 * alpha)))
        };
        Ok(Self { alpha, beta, shift, scale })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // Open01 keeps |v| < pi/2
        let u: f64 = rng.sample(Open01);
        let v = PI * (u - 0.5);
        if self.alpha == 1.0 {
            return v.tan();
        }
        let w: f64 = rng.sample(Exp1);
        let a = self.alpha;
        let av = a * (v + self.shift);
        let x = self.scale * av.sin() / v.cos().powf(1.0 / a)
            * ((v - av).cos() / w).powf((1.0 - a) / a);
        if a == 2.0 {
            x * FRAC_1_SQRT_2
        } else {
            x
        }
    }
}
