//! Beta laws: regularized incomplete beta by continued fraction, and
//! method-of-moments fitting.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaLaw {
    pub a: f64,
    pub b: f64,
}

impl BetaLaw {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(Self { a, b })
        } else {
            Err(domain(format!("Beta parameters must be positive, got ({a}, {b})")))
        }
    }

    pub fn arcsine() -> Self {
        Self { a: 0.5, b: 0.5 }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        regularized_beta(self.a, self.b, x.clamp(0.0, 1.0))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < 1.0) {
            return 0.0;
        }
        ((self.a - 1.0) * x.ln() + (self.b - 1.0) * (-x).ln_1p() - ln_beta(self.a, self.b)).exp()
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    pub fn variance(&self) -> f64 {
        let s = self.a + self.b;
        self.a * self.b / (s * s * (s + 1.0))
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `I_x(a, b)`.
pub fn beta_cdf(a: f64, b: f64, x: f64) -> Result<f64> {
    BetaLaw::new(a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("x must lie in [0, 1], got {x}")));
    }
    Ok(regularized_beta(a, b, x))
}

fn regularized_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b);
    // the continued fraction converges fast for x < (a+1)/(a+b+2)
    if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front.exp() * continued_fraction(a, b, x) / a).min(1.0)
    } else {
        (1.0 - ln_front.exp() * continued_fraction(b, a, 1.0 - x) / b).max(0.0)
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 10_000;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Sample mean and unbiased variance.
pub fn mean_variance(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: samples.len() });
    }
    let n = samples.len() as f64;
    let m = samples.iter().sum::<f64>() / n;
    let s2 = samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((m, s2))
}

/// Beta law with mean `m` and variance `s2`.
pub fn beta_from_moments(m: f64, s2: f64) -> Result<BetaLaw> {
    if !(m > 0.0 && m < 1.0) || !(s2 > 0.0) {
        return Err(domain(format!("need mean in (0, 1) and positive variance, got ({m}, {s2})")));
    }
    let spread = m * (1.0 - m);
    if spread <= s2 {
        return Err(domain(format!("moments ({m}, {s2}) are not attainable by a Beta law")));
    }
    let k = spread / s2 - 1.0;
    BetaLaw::new(m * k, (1.0 - m) * k)
}

pub fn fit_beta_moments(samples: &[f64]) -> Result<BetaLaw> {
    let (m, s2) = mean_variance(samples)?;
    beta_from_moments(m, s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn cdf_examples() {
        assert_abs_diff_eq!(beta_cdf(0.5, 0.5, 0.5).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(beta_cdf(0.5, 0.5, 0.25).unwrap(), 1.0 / 3.0, epsilon = 1e-14);
        assert_eq!(beta_cdf(2.3, 0.7, 1.0).unwrap(), 1.0);
        assert_eq!(beta_cdf(2.3, 0.7, 0.0).unwrap(), 0.0);
        assert!(beta_cdf(0.0, 1.0, 0.5).is_err());
        assert!(beta_cdf(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn cdf_matches_closed_forms() {
        for k in 0..=200 {
            let x = k as f64 / 200.0;
            let arcsine = 2.0 / PI * x.sqrt().asin();
            assert_abs_diff_eq!(beta_cdf(0.5, 0.5, x).unwrap(), arcsine, epsilon = 1e-13);
            assert_abs_diff_eq!(beta_cdf(1.0, 1.0, x).unwrap(), x, epsilon = 1e-14);
            // I_x(2, 3) = 6x^2 - 8x^3 + 3x^4
            let poly = 6.0 * x * x - 8.0 * x.powi(3) + 3.0 * x.powi(4);
            assert_abs_diff_eq!(beta_cdf(2.0, 3.0, x).unwrap(), poly, epsilon = 1e-13);
            // I_x(a, 1) = x^a
            assert_abs_diff_eq!(beta_cdf(0.3, 1.0, x).unwrap(), x.powf(0.3), epsilon = 1e-13);
        }
    }

    #[test]
    fn cdf_agrees_with_statrs() {
        use statrs::distribution::{Beta, ContinuousCDF};
        for &(a, b) in &[(0.3, 0.7), (0.5, 0.5), (2.5, 1.5), (30.0, 40.0), (0.05, 3.0)] {
            let reference = Beta::new(a, b).unwrap();
            for k in 1..100 {
                let x = k as f64 / 100.0;
                assert_abs_diff_eq!(beta_cdf(a, b, x).unwrap(), reference.cdf(x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn moment_inversion() {
        let arc = beta_from_moments(0.5, 0.125).unwrap();
        assert_abs_diff_eq!(arc.a, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(arc.b, 0.5, epsilon = 1e-15);
        let uni = beta_from_moments(0.5, 1.0 / 12.0).unwrap();
        assert_abs_diff_eq!(uni.a, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(uni.b, 1.0, epsilon = 1e-14);
        assert!(beta_from_moments(0.5, 0.25).is_err());
        assert!(beta_from_moments(0.0, 0.1).is_err());
        assert!(fit_beta_moments(&[0.3]).is_err());
        let law = BetaLaw::new(0.3, 0.7).unwrap();
        let back = beta_from_moments(law.mean(), law.variance()).unwrap();
        assert_abs_diff_eq!(back.a, 0.3, epsilon = 1e-12);
    }
}
