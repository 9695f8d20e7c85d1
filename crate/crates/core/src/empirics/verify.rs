//! Pass/fail verdicts and Monte Carlo bound compliance.

use serde::Serialize;

use crate::error::Result;

use super::density::DensityEstimate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Verdict {
    /// Passes when `statistic <= threshold`.
    pub fn at_most(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self { name: name.into(), statistic, threshold, pass: statistic <= threshold, detail: None }
    }

    pub fn within(name: impl Into<String>, statistic: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold: hi,
            pass: (lo..=hi).contains(&statistic),
            detail: Some(format!("accepted range [{lo}, {hi}]")),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Per-bin comparison of a histogram against an upper bound evaluated at the
/// bin centre.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub centers: Vec<f64>,
    pub heights: Vec<f64>,
    pub bounds: Vec<f64>,
    /// Bins where `f̂ > bound · (1 + n_se · se / f̂)`.
    pub violations: Vec<usize>,
    /// Largest `(f̂ - bound) / se` over bins with positive SE.
    pub worst_excess_se: f64,
    pub n_se: f64,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_bound(
    density: &DensityEstimate,
    bound: impl Fn(f64) -> Result<f64>,
    n_se: f64,
) -> Result<BoundCheck> {
    let mut out = BoundCheck {
        centers: Vec::with_capacity(density.bins()),
        heights: density.heights.clone(),
        bounds: Vec::with_capacity(density.bins()),
        violations: Vec::new(),
        worst_excess_se: f64::NEG_INFINITY,
        n_se,
    };
    for i in 0..density.bins() {
        let t = density.bin_center(i);
        let b = bound(t)?;
        let (f, se) = (density.heights[i], density.standard_errors[i]);
        let allowed = if f > 0.0 { b * (1.0 + n_se * se / f) } else { b };
        if f > allowed {
            out.violations.push(i);
        }
        if se > 0.0 {
            out.worst_excess_se = out.worst_excess_se.max((f - b) / se);
        }
        out.centers.push(t);
        out.bounds.push(b);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est(heights: Vec<f64>, se: Vec<f64>) -> DensityEstimate {
        DensityEstimate { heights, standard_errors: se, mass_at_0: 0.0, mass_at_1: 0.0, n_samples: 100 }
    }

    #[test]
    fn verdicts() {
        assert!(Verdict::at_most("x", 0.01, 0.02).pass);
        assert!(!Verdict::at_most("x", 0.03, 0.02).pass);
        assert!(Verdict::within("x", 1.0, 0.95, 1.05).pass);
        assert!(!Verdict::within("x", 1.1, 0.95, 1.05).pass);
    }

    #[test]
    fn bound_slack() {
        let d = est(vec![1.0, 1.0], vec![0.1, 0.01]);
        // bound 0.8: bin 0 allowed 0.8·1.3 = 1.04, bin 1 allowed 0.8·1.03
        let c = check_bound(&d, |_| Ok(0.8), 3.0).unwrap();
        assert_eq!(c.violations, vec![1]);
        assert!(!c.passed());
        let c = check_bound(&d, |_| Ok(2.0), 3.0).unwrap();
        assert!(c.passed());
    }
}
