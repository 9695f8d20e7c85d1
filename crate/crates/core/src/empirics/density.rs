use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::locations::LocationSample;
use crate::spectral::DensityCurve;

/// Histogram density of a random location on `(0, 1)` plus the point masses
/// at the two boundaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub heights: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub mass_at_0: f64,
    pub mass_at_1: f64,
    pub n_samples: usize,
}

impl DensityEstimate {
    pub fn bins(&self) -> usize {
        self.heights.len()
    }

    pub fn bin_width(&self) -> f64 {
        1.0 / self.bins() as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.bin_width()
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (i as f64 * w, if i + 1 == self.bins() { 1.0 } else { (i + 1) as f64 * w })
    }

    pub fn interior_mass(&self) -> f64 {
        self.heights.iter().sum::<f64>() * self.bin_width()
    }

    /// Total of boundary and interior mass; one up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.mass_at_0 + self.mass_at_1 + self.interior_mass()
    }

    /// Heights at bin centres.
    pub fn as_curve(&self) -> Result<DensityCurve> {
        DensityCurve::new((0..self.bins()).map(|i| self.bin_center(i)).collect(), self.heights.clone())
    }
}

pub fn estimate_location_density(samples: &[LocationSample], bins: usize) -> Result<DensityEstimate> {
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if bins < 2 {
        return Err(domain(format!("need at least 2 bins, got {bins}")));
    }
    let mut counts = vec![0u64; bins];
    let (mut at0, mut at1) = (0u64, 0u64);
    for s in samples {
        if !(0.0..=1.0).contains(&s.value) {
            return Err(domain(format!("location {} outside [0, 1]", s.value)));
        }
        if s.at_start {
            at0 += 1;
        } else if s.at_end {
            at1 += 1;
        } else {
            let k = ((s.value * bins as f64) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    let n = samples.len() as f64;
    let w = 1.0 / bins as f64;
    let heights = counts.iter().map(|&c| c as f64 / (n * w)).collect();
    let standard_errors = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            (p * (1.0 - p) / n).sqrt() / w
        })
        .collect();
    Ok(DensityEstimate {
        heights,
        standard_errors,
        mass_at_0: at0 as f64 / n,
        mass_at_1: at1 as f64 / n,
        n_samples: samples.len(),
    })
}

/// Density at `t` from the fraction of interior samples within `halfwidth`
/// of `t`; returns `(value, standard error)`.
pub fn local_density(samples: &[LocationSample], t: f64, halfwidth: f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if !(halfwidth > 0.0) || t - halfwidth < 0.0 || t + halfwidth > 1.0 {
        return Err(domain(format!("window {t} ± {halfwidth} must lie inside [0, 1]")));
    }
    let (lo, hi) = (t - halfwidth, t + halfwidth);
    let hits = samples
        .iter()
        .filter(|s| s.is_interior() && s.value >= lo && s.value < hi)
        .count();
    let n = samples.len() as f64;
    let p = hits as f64 / n;
    let width = 2.0 * halfwidth;
    Ok((p / width, (p * (1.0 - p) / n).sqrt() / width))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locations::LocationKind;
    use crate::seed::replicate_rng;
    use rand::Rng;

    fn sample(v: f64) -> LocationSample {
        LocationSample { value: v, kind: LocationKind::Supremum, at_start: v == 0.0, at_end: v == 1.0 }
    }

    #[test]
    fn degenerate_at_zero() {
        let s = vec![sample(0.0); 10];
        let d = estimate_location_density(&s, 5).unwrap();
        assert_eq!(d.mass_at_0, 1.0);
        assert!(d.heights.iter().all(|&h| h == 0.0));
        assert_eq!(d.total_mass(), 1.0);
    }

    #[test]
    fn errors() {
        assert!(estimate_location_density(&[], 10).is_err());
        assert!(estimate_location_density(&[sample(0.5)], 1).is_err());
        assert!(local_density(&[sample(0.5)], 0.01, 0.02).is_err());
    }

    #[test]
    fn uniform_samples_within_four_se() {
        let mut rng = replicate_rng(17, 0);
        let s: Vec<LocationSample> = (0..100_000).map(|_| sample(rng.random::<f64>())).collect();
        let d = estimate_location_density(&s, 20).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        for (h, se) in d.heights.iter().zip(&d.standard_errors) {
            assert!((h - 1.0).abs() < 4.0 * se, "height {h} se {se}");
        }
        let (v, se) = local_density(&s, 0.3, 0.05).unwrap();
        assert!((v - 1.0).abs() < 4.0 * se);
    }

    #[test]
    fn mass_identity_holds_for_any_sample() {
        let mut rng = replicate_rng(3, 1);
        for bins in [2, 7, 50, 333] {
            let s: Vec<LocationSample> = (0..997)
                .map(|i| match i % 11 {
                    0 => sample(0.0),
                    1 => sample(1.0),
                    _ => sample(rng.random::<f64>()),
                })
                .collect();
            let d = estimate_location_density(&s, bins).unwrap();
            assert!((d.total_mass() - 1.0).abs() < 1e-12);
        }
    }
}
