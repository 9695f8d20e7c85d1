//! Closed-form layer: the two-branch basis densities `f_v`, their mixtures,
//! the entropy bound and its time-reversible refinement, expectation envelopes
//! and shape-constraint checks for density curves.

use serde::Serialize;

use crate::error::{domain, Error, Result};

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in (0, 1), got {x}")))
    }
}

/// Binary entropy in nats, `-v ln v - (1-v) ln(1-v)`.
pub fn entropy_z(v: f64) -> Result<f64> {
    open_unit("v", v)?;
    Ok(z(v))
}

#[inline]
fn z(v: f64) -> f64 {
    // evaluated from the smaller argument so that z(v) and z(1 - v) agree
    let a = if v <= 0.5 { v } else { 1.0 - v };
    -a * a.ln() - (1.0 - a) * (-a).ln_1p()
}

/// Basis density `f_v(t)`; the first branch owns `t <= v`.
pub fn basis_density(v: f64, t: f64) -> Result<f64> {
    open_unit("v", v)?;
    open_unit("t", t)?;
    Ok(basis(v, t))
}

#[inline]
fn basis(v: f64, t: f64) -> f64 {
    if t <= v {
        (1.0 - v) / z(v) / (1.0 - t)
    } else {
        v / z(v) / t
    }
}

/// Threshold with `{l >= t, r >= 1-t} = {u >= h(v, t)}` under `(u, v) = (l, l/(l+r))`.
pub fn h_threshold(v: f64, t: f64) -> Result<f64> {
    open_unit("v", v)?;
    open_unit("t", t)?;
    Ok(if v < t { t } else { v * (1.0 - t) / (1.0 - v) })
}

/// Universal upper bound `1 / Z(t)` on the interior density.
pub fn entropy_bound(t: f64) -> Result<f64> {
    open_unit("t", t)?;
    Ok(1.0 / z(t))
}

/// Symmetrised basis `(f_v + f_{1-v}) / 2` for `v in (0, 1/2]`.
pub fn basis_density_reversible(v: f64, t: f64) -> Result<f64> {
    if !(v > 0.0 && v <= 0.5) {
        return Err(domain(format!("reversible basis needs v in (0, 1/2], got {v}")));
    }
    open_unit("t", t)?;
    let c = 1.0 / (2.0 * z(v));
    Ok(if t < v {
        c / (1.0 - t)
    } else if t < 1.0 - v {
        c * v * (1.0 / t + 1.0 / (1.0 - t))
    } else {
        c / t
    })
}

/// Density bound for time-reversible processes.
pub fn reversible_bound(t: f64) -> Result<f64> {
    open_unit("t", t)?;
    Ok(if t < 0.5 { 1.0 / (2.0 * (1.0 - t) * z(t)) } else { 1.0 / (2.0 * t * z(t)) })
}

/// `∫_a^b f_v(t) dt` in closed form, `0 <= a <= b <= 1`.
pub fn basis_integral(v: f64, a: f64, b: f64) -> Result<f64> {
    open_unit("v", v)?;
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(domain(format!("need 0 <= a <= b <= 1, got [{a}, {b}]")));
    }
    Ok(linear_times_basis(v, a, b, 1.0, 1.0))
}

/// `∫_{t0}^{t1} g(t) f_v(t) dt` for `g` linear on the segment with
/// `g(t0) = g0`, `g(t1) = g1`.
fn linear_times_basis(v: f64, t0: f64, t1: f64, g0: f64, g1: f64) -> f64 {
    if t1 <= t0 {
        return 0.0;
    }
    if t0 < v && v < t1 {
        let gv = g0 + (g1 - g0) * (v - t0) / (t1 - t0);
        return linear_times_basis(v, t0, v, g0, gv) + linear_times_basis(v, v, t1, gv, g1);
    }
    let zv = z(v);
    if t1 <= v {
        // s = 1 - t maps the left branch onto the right one
        (1.0 - v) / zv * linear_over_t(1.0 - t1, 1.0 - t0, g1, g0)
    } else {
        v / zv * linear_over_t(t0, t1, g0, g1)
    }
}

/// `∫_a^b g / t` for `g` linear from `ga` to `gb`, `0 < a < b`, written so that
/// steep segments do not cancel.
fn linear_over_t(a: f64, b: f64, ga: f64, gb: f64) -> f64 {
    let x = (b - a) / a;
    let log = x.ln_1p();
    // 1 - ln(1 + x) / x
    let phi = if x < 1e-3 {
        x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * 0.2)))
    } else {
        1.0 - log / x
    };
    ga * log + (gb - ga) * phi
}

/// Discrete sub-probability measure on `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureMeasure {
    atoms: Vec<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub v: f64,
    pub mass: f64,
}

/// Slack on the total mass of a sub-probability measure.
pub const MASS_TOLERANCE: f64 = 1e-9;

impl MixtureMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            open_unit("atom location", a.v)?;
            if !(a.mass >= 0.0 && a.mass.is_finite()) {
                return Err(domain(format!("atom mass must be finite and >= 0, got {}", a.mass)));
            }
        }
        let m = Self { atoms };
        if m.total_mass() > 1.0 + MASS_TOLERANCE {
            return Err(domain(format!("total mass {} exceeds 1", m.total_mass())));
        }
        Ok(m)
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(v, mass)| Atom { v, mass }).collect())
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Mass left for the boundary point masses at 0 and 1.
    pub fn boundary_mass(&self) -> f64 {
        (1.0 - self.total_mass()).max(0.0)
    }
}

/// `Σ_j w_j f_{v_j}(t)`.
pub fn mixture_density(mu: &MixtureMeasure, t: f64) -> Result<f64> {
    open_unit("t", t)?;
    Ok(mu.atoms.iter().map(|a| a.mass * basis(a.v, t)).sum())
}

/// Density values on a grid of interior points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    t: Vec<f64>,
    f: Vec<f64>,
}

impl DensityCurve {
    pub fn new(t: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if t.len() != f.len() || t.is_empty() {
            return Err(Error::InvalidInput(format!(
                "curve needs equal, non-zero lengths (got {} and {})",
                t.len(),
                f.len()
            )));
        }
        if t.iter().any(|&x| !(x > 0.0 && x < 1.0)) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("curve grid must be strictly increasing inside (0, 1)"));
        }
        if f.iter().any(|&y| !(y >= 0.0 && y.is_finite())) {
            return Err(domain("curve values must be finite and non-negative"));
        }
        Ok(Self { t, f })
    }

    pub fn from_fn(t: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let vals = t.iter().map(|&x| f(x)).collect();
        Self::new(t, vals)
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Trapezoid integral over the curve's own grid.
    pub fn trapezoid(&self) -> f64 {
        self.t
            .windows(2)
            .zip(self.f.windows(2))
            .map(|(t, f)| 0.5 * (t[1] - t[0]) * (f[0] + f[1]))
            .sum()
    }
}

/// `n` midpoints `(k + 1/2) / n`.
pub fn midpoint_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect()
}

/// A function on `[0, 1]` given by samples, linear between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    t: Vec<f64>,
    g: Vec<f64>,
}

impl SampledFn {
    pub fn new(t: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if t.len() != g.len() || t.len() < 2 {
            return Err(Error::InvalidInput("sampled function needs >= 2 matching samples".into()));
        }
        if t[0] != 0.0 || *t.last().unwrap() != 1.0 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("sample grid must increase strictly from 0 to 1"));
        }
        if g.iter().any(|y| !y.is_finite()) {
            return Err(domain("sampled function has non-finite values"));
        }
        Ok(Self { t, g })
    }

    /// Samples `g` on `n + 1` equispaced points of `[0, 1]`.
    pub fn from_fn(n: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        let t: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let vals = t.iter().map(|&x| g(x)).collect();
        Self::new(t, vals)
    }

    pub fn at_zero(&self) -> f64 {
        self.g[0]
    }

    pub fn at_one(&self) -> f64 {
        *self.g.last().unwrap()
    }

    /// `∫_0^1 g f_v`, exact for the piecewise-linear interpolant.
    pub fn integrate_against_basis(&self, v: f64) -> Result<f64> {
        open_unit("v", v)?;
        Ok(self
            .t
            .windows(2)
            .zip(self.g.windows(2))
            .map(|(t, g)| linear_times_basis(v, t[0], t[1], g[0], g[1]))
            .sum())
    }
}

/// Envelope `(lower, upper)` for `E g(τ)` over every admissible law of τ:
/// extremes of `g(0)`, `g(1)` and `∫ g f_v` over `v_grid`.
pub fn expectation_bounds(g: &SampledFn, v_grid: &[f64]) -> Result<(f64, f64)> {
    let mut lower = g.at_zero().min(g.at_one());
    let mut upper = g.at_zero().max(g.at_one());
    for &v in v_grid {
        let e = g.integrate_against_basis(v)?;
        lower = lower.min(e);
        upper = upper.max(e);
    }
    Ok((lower, upper))
}

/// Tolerances for [`check_shape_constraints`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSlack {
    /// Relative slack on every inequality.
    pub relative: f64,
    /// Number of standard errors granted per point.
    pub n_se: f64,
    /// Per-point standard errors, if the curve is an estimate.
    pub se: Option<Vec<f64>>,
    /// Allow the right-hand side point to move by one grid position.
    pub neighbour_shift: bool,
}

impl ShapeSlack {
    /// For closed-form curves: only floating-point rounding is excused.
    pub fn exact() -> Self {
        Self { relative: 1e-12, n_se: 0.0, se: None, neighbour_shift: false }
    }

    /// For histogram estimates: 3 standard errors plus a one-bin shift.
    pub fn empirical(se: Vec<f64>) -> Self {
        Self { relative: 1e-12, n_se: 3.0, se: Some(se), neighbour_shift: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub pairs_checked: usize,
    /// Largest `f(t) - f(s) max(s/t, (1-s)/(1-t))` beyond slack (<= 0 means none).
    pub pairwise_worst: f64,
    pub pairwise_violations: usize,
    /// Largest `Δf/h - f(t)/(1-t)` for backward differences, beyond slack.
    pub left_derivative_worst: f64,
    pub left_derivative_violations: usize,
    /// Largest `-f(t)/t - Δf/h` for forward differences, beyond slack.
    pub right_derivative_worst: f64,
    pub right_derivative_violations: usize,
}

impl ShapeReport {
    pub fn violations(&self) -> usize {
        self.pairwise_violations + self.left_derivative_violations + self.right_derivative_violations
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

/// Checks the pairwise ratio inequality `f(t) <= f(s) max(s/t, (1-s)/(1-t))`
/// over all grid pairs and the one-sided derivative bounds
/// `f'(t-) <= f(t)/(1-t)`, `f'(t+) >= -f(t)/t` as backward/forward differences.
pub fn check_shape_constraints(curve: &DensityCurve, slack: &ShapeSlack) -> ShapeReport {
    let t = curve.t();
    let f = curve.values();
    let n = t.len();
    let se = |i: usize| slack.se.as_ref().map_or(0.0, |s| s[i]) * slack.n_se;
    let lo = |i: usize| (f[i] - se(i)).max(0.0);
    let hi = |i: usize| f[i] + se(i);
    let ratio = |s: f64, x: f64| (s / x).max((1.0 - s) / (1.0 - x));

    let mut report = ShapeReport {
        pairs_checked: 0,
        pairwise_worst: f64::NEG_INFINITY,
        pairwise_violations: 0,
        left_derivative_worst: f64::NEG_INFINITY,
        left_derivative_violations: 0,
        right_derivative_worst: f64::NEG_INFINITY,
        right_derivative_violations: 0,
    };

    for i in 0..n {
        let lhs = lo(i);
        for j in 0..n {
            if i == j {
                continue;
            }
            report.pairs_checked += 1;
            let candidates: &[isize] = if slack.neighbour_shift { &[-1, 0, 1] } else { &[0] };
            let rhs = candidates
                .iter()
                .filter_map(|&d| {
                    let k = j as isize + d;
                    (k >= 0 && (k as usize) < n && k as usize != i).then(|| hi(k as usize) * ratio(t[k as usize], t[i]))
                })
                .fold(f64::NEG_INFINITY, f64::max);
            let margin = lhs - rhs;
            let allowed = slack.relative * lhs.max(rhs);
            report.pairwise_worst = report.pairwise_worst.max(margin - allowed);
            if margin > allowed {
                report.pairwise_violations += 1;
            }
        }
    }

    for i in 1..n {
        let h = t[i] - t[i - 1];
        // backward difference at t_i
        let diff = (lo(i) - hi(i - 1)) / h;
        let bound = hi(i) / (1.0 - t[i]);
        let margin = diff - bound;
        let allowed = slack.relative * (diff.abs().max(bound) + f[i].max(f[i - 1]) / h);
        report.left_derivative_worst = report.left_derivative_worst.max(margin - allowed);
        if margin > allowed {
            report.left_derivative_violations += 1;
        }
        // forward difference at t_{i-1}
        let diff = (hi(i) - lo(i - 1)) / h;
        let bound = -hi(i - 1) / t[i - 1];
        let margin = bound - diff;
        let allowed = slack.relative * (diff.abs().max(bound.abs()) + f[i].max(f[i - 1]) / h);
        report.right_derivative_worst = report.right_derivative_worst.max(margin - allowed);
        if margin > allowed {
            report.right_derivative_violations += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy_z(0.5).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy_z(0.25).unwrap(), 0.562_335_144_618_577_1, epsilon = 1e-12);
        for v in [0.01, 0.2, 0.37] {
            assert_abs_diff_eq!(entropy_z(v).unwrap(), entropy_z(1.0 - v).unwrap(), epsilon = 1e-15);
        }
        assert!(entropy_z(0.0).is_err());
        assert!(entropy_z(1.0).is_err());
    }

    #[test]
    fn basis_examples() {
        assert_abs_diff_eq!(basis_density(0.5, 0.25).unwrap(), 0.961_796_693_925_975_6, epsilon = 1e-12);
        for v in [0.1, 0.5, 0.9] {
            assert_abs_diff_eq!(basis_density(v, v).unwrap(), 1.0 / entropy_z(v).unwrap(), epsilon = 1e-14);
            assert_abs_diff_eq!(basis_integral(v, 0.0, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        }
        assert!(basis_density(0.0, 0.5).is_err());
        assert!(basis_density(0.5, 1.0).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(h_threshold(0.3, 0.5).unwrap(), 0.5);
        assert_abs_diff_eq!(h_threshold(0.7, 0.5).unwrap(), 7.0 / 6.0, epsilon = 1e-15);
        for t in [0.1, 0.4, 0.8] {
            assert_abs_diff_eq!(h_threshold(t, t).unwrap(), t, epsilon = 1e-15);
            assert_abs_diff_eq!(h_threshold(t - 1e-12, t).unwrap(), t, epsilon = 1e-15);
        }
        assert!(h_threshold(1.0, 0.5).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_abs_diff_eq!(entropy_bound(0.5).unwrap(), 1.0 / LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy_bound(0.2).unwrap(), entropy_bound(0.8).unwrap(), epsilon = 1e-13);
        assert_abs_diff_eq!(reversible_bound(0.5).unwrap(), 1.0 / LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(reversible_bound(0.3).unwrap(), reversible_bound(0.7).unwrap(), epsilon = 1e-13);
        for k in 1..500 {
            let t = k as f64 / 1000.0;
            assert!(reversible_bound(t).unwrap() <= entropy_bound(t).unwrap());
        }
        assert!(entropy_bound(0.0).is_err());
        assert!(reversible_bound(1.0).is_err());
    }

    #[test]
    fn bound_is_attained_only_at_v() {
        // grid-search oracle over t for each v
        for k in 1..20 {
            let v = k as f64 / 20.0;
            let (mut best, mut arg) = (0.0, 0.0);
            for j in 1..2000 {
                let t = j as f64 / 2000.0;
                let r = basis_density(v, t).unwrap() / entropy_bound(t).unwrap();
                assert!(r <= 1.0 + 1e-14);
                if r > best {
                    best = r;
                    arg = t;
                }
            }
            assert_abs_diff_eq!(best, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(arg, v, epsilon = 1e-12);
        }
    }

    #[test]
    fn reversible_examples() {
        assert_abs_diff_eq!(basis_density_reversible(0.25, 0.5).unwrap(), 0.889_149_477_468_523_4, epsilon = 1e-9);
        for t in [0.05, 0.3, 0.5, 0.71] {
            assert_abs_diff_eq!(
                basis_density_reversible(0.5, t).unwrap(),
                basis_density(0.5, t).unwrap(),
                epsilon = 1e-14
            );
            for v in [0.1, 0.25, 0.4] {
                let rev = basis_density_reversible(v, t).unwrap();
                assert_abs_diff_eq!(rev, basis_density_reversible(v, 1.0 - t).unwrap(), epsilon = 1e-13);
                let avg = 0.5 * (basis_density(v, t).unwrap() + basis_density(1.0 - v, t).unwrap());
                assert_abs_diff_eq!(rev, avg, epsilon = 1e-13);
            }
        }
        assert!(basis_density_reversible(0.6, 0.5).is_err());
    }

    #[test]
    fn mixture_examples() {
        let single = MixtureMeasure::from_pairs(&[(0.5, 1.0)]).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert_eq!(mixture_density(&single, t).unwrap(), basis_density(0.5, t).unwrap());
            assert_eq!(mixture_density(&MixtureMeasure::empty(), t).unwrap(), 0.0);
        }
        assert!(MixtureMeasure::from_pairs(&[(0.5, 0.7), (0.2, 0.4)]).is_err());
        assert!(MixtureMeasure::from_pairs(&[(1.0, 0.1)]).is_err());
        assert!(MixtureMeasure::from_pairs(&[(0.5, -0.1)]).is_err());
    }

    #[test]
    fn expectation_bound_examples() {
        let v_grid = midpoint_grid(199);
        let one = SampledFn::from_fn(10, |_| 1.0).unwrap();
        let (lo, hi) = expectation_bounds(&one, &v_grid).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-13);

        let ident = SampledFn::from_fn(10, |t| t).unwrap();
        for v in [0.1f64, 0.5, 0.8] {
            let exact = -(1.0 - v) * (-v).ln_1p() / entropy_z(v).unwrap();
            assert_abs_diff_eq!(ident.integrate_against_basis(v).unwrap(), exact, epsilon = 1e-14);
        }
        let (lo, hi) = expectation_bounds(&ident, &v_grid).unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));

        // indicator of [0.4, 0.6] approximated by steep ramps
        let eps = 1e-9;
        let g = SampledFn::new(
            vec![0.0, 0.4 - eps, 0.4, 0.6, 0.6 + eps, 1.0],
            vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        let (_, hi) = expectation_bounds(&g, &v_grid).unwrap();
        let exact = v_grid.iter().map(|&v| basis_integral(v, 0.4, 0.6).unwrap()).fold(0.0, f64::max);
        assert_abs_diff_eq!(hi, exact, epsilon = 1e-8);
        assert!(hi < 0.2 * entropy_bound(0.5).unwrap());
    }

    #[test]
    fn sampled_fn_validation() {
        assert!(SampledFn::new(vec![0.0, 0.5], vec![1.0, 1.0]).is_err());
        assert!(SampledFn::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn shape_checks() {
        let grid = midpoint_grid(200);
        for v in [0.03, 0.25, 0.5, 0.77, 0.99] {
            let c = DensityCurve::from_fn(grid.clone(), |t| basis(v, t)).unwrap();
            let r = check_shape_constraints(&c, &ShapeSlack::exact());
            assert!(r.passed(), "v={v}: {r:?}");
        }
        let bound = DensityCurve::from_fn(grid.clone(), |t| 1.0 / z(t)).unwrap();
        assert_eq!(check_shape_constraints(&bound, &ShapeSlack::exact()).pairwise_violations, 0);

        let mut spiky = vec![1.0; 200];
        spiky[100] = 10.0;
        let c = DensityCurve::new(grid, spiky).unwrap();
        let r = check_shape_constraints(&c, &ShapeSlack::exact());
        assert!(r.pairwise_violations > 0 && r.left_derivative_violations > 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reflection_symmetry(v in 0.001f64..0.999, t in 0.001f64..0.999) {
                let a = basis(v, t);
                let b = basis(1.0 - v, 1.0 - t);
                prop_assert!((a - b).abs() <= 1e-13 * a.max(1.0));
            }

            #[test]
            fn psi_rectangle_equivalence(l in 1e-3f64..5.0, r in 1e-3f64..5.0, t in 0.01f64..0.99) {
                let (u, v) = crate::locations::psi(l, r);
                let lhs = l >= t && r >= 1.0 - t;
                let rhs = u >= h_threshold(v, t).unwrap();
                // exact equality only fails within rounding of the boundary
                let near = (l - t).abs() < 1e-12 || (r - (1.0 - t)).abs() < 1e-12;
                prop_assert!(near || lhs == rhs);
            }

            #[test]
            fn mixture_closure(weights in proptest::collection::vec(0.0f64..1.0, 1..6),
                               locs in proptest::collection::vec(0.01f64..0.99, 6)) {
                let total: f64 = weights.iter().sum::<f64>().max(1.0);
                let atoms: Vec<(f64, f64)> = weights.iter().zip(&locs).map(|(w, &v)| (v, w / total)).collect();
                let mu = MixtureMeasure::from_pairs(&atoms).unwrap();
                let exact: f64 = mu.atoms().iter().map(|a| a.mass * basis_integral(a.v, 0.0, 1.0).unwrap()).sum();
                prop_assert!((exact - mu.total_mass()).abs() < 1e-12);
            }
        }
    }
}
