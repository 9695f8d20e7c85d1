//! Power-law tail fits of the local-maxima point cloud.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::locations::{LocalMaxPoint, ReturnDistance};

/// Fit range for return-distance tails, fixed before looking at the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailWindow {
    pub lo: f64,
    pub hi: f64,
    /// Log-spaced evaluation points in `[lo, hi]`.
    pub points: usize,
}

impl TailWindow {
    pub const DEFAULT_POINTS: usize = 24;

    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(domain(format!("tail window [{lo}, {hi}] must satisfy 0 < lo < hi")));
        }
        if points < 3 {
            return Err(domain("tail window needs at least 3 points"));
        }
        Ok(Self { lo, hi, points })
    }

    /// `[4 step, edge / 4]`: four grid steps up to a quarter of the distance
    /// from the counting interval to the window edge.
    pub fn for_grid(step: f64, edge: f64) -> Result<Self> {
        Self::new(4.0 * step, edge / 4.0, Self::DEFAULT_POINTS)
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let k = self.points - 1;
        (0..self.points)
            .map(|i| if i == k { self.hi } else { (a + (b - a) * i as f64 / k as f64).exp() })
            .collect()
    }
}

/// `survival(x) ≈ C x^{-exponent}` from a log-log least-squares line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub standard_error: f64,
    pub log_scale: f64,
    pub x: Vec<f64>,
    pub survival: Vec<f64>,
}

/// Least-squares slope of `ln survival` against `ln x`; zero survival values
/// are skipped.
pub fn fit_power_law(x: &[f64], survival: &[f64]) -> Result<PowerLawFit> {
    if x.len() != survival.len() {
        return Err(Error::InvalidInput("abscissae and survival lengths differ".into()));
    }
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(survival)
        .filter(|(&xi, &si)| xi > 0.0 && si > 0.0)
        .map(|(&xi, &si)| (xi.ln(), si.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(domain("degenerate abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let standard_error = if pts.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    Ok(PowerLawFit {
        exponent: -slope,
        standard_error,
        log_scale: intercept,
        x: x.to_vec(),
        survival: survival.to_vec(),
    })
}

fn in_interval(p: &LocalMaxPoint, interval: (f64, f64)) -> bool {
    p.s >= interval.0 && p.s <= interval.1
}

fn count_uncensored(clouds: &[Vec<LocalMaxPoint>], interval: (f64, f64)) -> usize {
    clouds
        .iter()
        .flatten()
        .filter(|p| in_interval(p, interval) && !p.is_censored())
        .count()
}

fn range(d: ReturnDistance) -> (f64, f64) {
    match d {
        ReturnDistance::Observed(x) => (x, x),
        ReturnDistance::Censored(w) => (w, f64::INFINITY),
    }
}

/// Whether `l >= x` and `v = l / (l + r)` lies in `band`; `None` if censoring
/// leaves it open.
fn in_band_survival(p: &LocalMaxPoint, x: f64, band: (f64, f64)) -> Option<bool> {
    let (l_lo, l_hi) = range(p.l);
    let (r_lo, r_hi) = range(p.r);
    if l_hi < x {
        return Some(false);
    }
    let v_lo = if r_hi.is_infinite() { 0.0 } else { l_lo / (l_lo + r_hi) };
    let v_hi = if l_hi.is_infinite() { 1.0 } else { l_hi / (l_hi + r_lo) };
    if v_hi < band.0 || v_lo > band.1 {
        return Some(false);
    }
    if l_lo >= x && v_lo >= band.0 && v_hi <= band.1 {
        return Some(true);
    }
    None
}

/// Tail exponent of the `u = l` marginal, restricted to points whose `v`
/// lies in `band`.
///
/// Without the restriction the `l`-marginal of the mean measure is infinite
/// for processes with many small maxima; within a closed `v`-band
/// self-similarity alone forces survival `∝ u^{-1}`. The lower end of the fit
/// window is raised by `(1 - band.0) / band.0` so that every counted `r` stays
/// above the window's discretisation floor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UTailFit {
    pub fit: PowerLawFit,
    pub band: (f64, f64),
    pub window: TailWindow,
    pub uncensored_points: usize,
    pub dropped: u64,
}

pub const DEFAULT_V_BAND: (f64, f64) = (0.25, 0.75);
pub const MIN_U_POINTS: usize = 500;
pub const MIN_LEVY_POINTS: usize = 1000;

pub fn u_marginal_tail_exponent(
    clouds: &[Vec<LocalMaxPoint>],
    window: TailWindow,
    interval: (f64, f64),
    band: (f64, f64),
) -> Result<UTailFit> {
    if !(0.0 < band.0 && band.0 < band.1 && band.1 < 1.0) {
        return Err(domain(format!("v band ({}, {}) must lie strictly inside (0, 1)", band.0, band.1)));
    }
    let got = count_uncensored(clouds, interval);
    if got < MIN_U_POINTS {
        return Err(Error::InsufficientData { needed: MIN_U_POINTS, got });
    }
    let ratio = ((1.0 - band.0) / band.0).max(band.1 / (1.0 - band.1));
    let lo = window.lo * ratio;
    let window = TailWindow::new(lo, window.hi.max(lo * 10.0), window.points)?;
    let xs = window.abscissae();
    let mut counts = vec![0.0; xs.len()];
    let mut dropped = 0u64;
    for p in clouds.iter().flatten().filter(|p| in_interval(p, interval)) {
        for (k, &x) in xs.iter().enumerate() {
            match in_band_survival(p, x, band) {
                Some(true) => counts[k] += 1.0,
                Some(false) => {}
                None => dropped += 1,
            }
        }
    }
    let n = clouds.len().max(1) as f64;
    let survival: Vec<f64> = counts.iter().map(|c| c / n).collect();
    Ok(UTailFit { fit: fit_power_law(&xs, &survival)?, band, window, uncensored_points: got, dropped })
}

/// Marginal exponents of the local-maxima measure and the product-form check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevyReport {
    pub c1: f64,
    pub c2: f64,
    pub l_fit: PowerLawFit,
    pub r_fit: PowerLawFit,
    /// Largest relative gap between `N(x, y)` and
    /// `N(x, y₀) N(x₀, y) / N(x₀, y₀)` over the checked cells.
    pub product_error: f64,
    pub cells_checked: usize,
    pub uncensored_points: usize,
}

impl LevyReport {
    pub fn sum(&self) -> f64 {
        self.c1 + self.c2
    }
}

fn joint_count(clouds: &[Vec<LocalMaxPoint>], interval: (f64, f64), x: f64, y: f64) -> f64 {
    clouds
        .iter()
        .flatten()
        .filter(|p| in_interval(p, interval))
        .filter(|p| p.l.at_least(x) == Some(true) && p.r.at_least(y) == Some(true))
        .count() as f64
}

/// Minimum cell count for the product-form comparison.
pub const PRODUCT_MIN_COUNT: f64 = 50.0;

/// Fits `ν(l ≥ x, r ≥ y₀) ∝ x^{-c₁}` and `ν(l ≥ x₀, r ≥ y) ∝ y^{-c₂}` with
/// `x₀ = y₀ = window.lo`, then compares the joint survival with the product
/// form on a 4 × 4 sub-grid of the window.
pub fn levy_factorization_check(
    clouds: &[Vec<LocalMaxPoint>],
    window: TailWindow,
    interval: (f64, f64),
) -> Result<LevyReport> {
    let got = count_uncensored(clouds, interval);
    if got < MIN_LEVY_POINTS {
        return Err(Error::InsufficientData { needed: MIN_LEVY_POINTS, got });
    }
    let xs = window.abscissae();
    let n = clouds.len() as f64;
    let reference = window.lo;
    let l_surv: Vec<f64> = xs.iter().map(|&x| joint_count(clouds, interval, x, reference) / n).collect();
    let r_surv: Vec<f64> = xs.iter().map(|&y| joint_count(clouds, interval, reference, y) / n).collect();
    let l_fit = fit_power_law(&xs, &l_surv)?;
    let r_fit = fit_power_law(&xs, &r_surv)?;

    let base = joint_count(clouds, interval, reference, reference);
    let sub: Vec<f64> = TailWindow::new(window.lo, window.hi, 4)?.abscissae();
    let mut product_error = 0.0f64;
    let mut cells_checked = 0;
    for &x in &sub {
        for &y in &sub {
            let joint = joint_count(clouds, interval, x, y);
            if joint < PRODUCT_MIN_COUNT || base <= 0.0 {
                continue;
            }
            let predicted = joint_count(clouds, interval, x, reference) * joint_count(clouds, interval, reference, y) / base;
            product_error = product_error.max((joint - predicted).abs() / joint);
            cells_checked += 1;
        }
    }
    Ok(LevyReport {
        c1: l_fit.exponent,
        c2: r_fit.exponent,
        l_fit,
        r_fit,
        product_error,
        cells_checked,
        uncensored_points: got,
    })
}
