//! Random locations and the local-maxima point process of a sampled path.
//!
//! Sampled values are taken as attained levels, so the upper semicontinuous
//! modification `X(t-) ∨ X(t)` is the identity on a grid. Grid increments
//! stand in for jumps `|X(t) - X(t-)|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::process_sim::PathGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationKind {
    Supremum,
    LargestJump,
}

/// A random location rescaled to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocationSample {
    pub value: f64,
    pub kind: LocationKind,
    /// The location is the first grid point of the interval.
    pub at_start: bool,
    /// The location is the last grid point of the interval.
    pub at_end: bool,
}

impl LocationSample {
    pub fn is_interior(&self) -> bool {
        !(self.at_start || self.at_end)
    }
}

fn rescale(t: f64, a: f64, b: f64) -> f64 {
    ((t - a) / (b - a)).clamp(0.0, 1.0)
}

/// Leftmost grid point in `[a, b]` attaining the maximum of the path.
pub fn argmax_location(path: &PathGrid, a: f64, b: f64) -> Result<LocationSample> {
    let (lo, hi) = path.grid().index_range(a, b)?;
    let values = path.values();
    let mut best = lo;
    for i in lo + 1..=hi {
        if values[i] > values[best] {
            best = i;
        }
    }
    Ok(LocationSample {
        value: rescale(path.time(best), a, b),
        kind: LocationKind::Supremum,
        at_start: best == lo,
        at_end: best == hi,
    })
}

/// Leftmost grid point `t_i` in `[a, b]` maximising `|X(t_i) - X(t_{i-1})|`,
/// over increments that lie inside the interval.
pub fn largest_jump_location(path: &PathGrid, a: f64, b: f64) -> Result<LocationSample> {
    let (lo, hi) = path.grid().index_range(a, b)?;
    if hi == lo {
        return Err(Error::EmptyInterval { a, b });
    }
    let values = path.values();
    let mut best = lo + 1;
    let mut best_jump = (values[best] - values[lo]).abs();
    for i in lo + 2..=hi {
        let jump = (values[i] - values[i - 1]).abs();
        if jump > best_jump {
            best = i;
            best_jump = jump;
        }
    }
    Ok(LocationSample {
        value: rescale(path.time(best), a, b),
        kind: LocationKind::LargestJump,
        at_start: false,
        at_end: best == hi,
    })
}

/// Return distance to the left or right of a local maximum.
///
/// `Censored(w)` means no return happened within the scanned distance `w` to
/// the window edge, so the true distance exceeds `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ReturnDistance {
    Observed(f64),
    Censored(f64),
}

impl ReturnDistance {
    pub fn observed(&self) -> Option<f64> {
        match *self {
            ReturnDistance::Observed(d) => Some(d),
            ReturnDistance::Censored(_) => None,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, ReturnDistance::Censored(_))
    }

    /// The observed distance or the censoring bound.
    pub fn bound(&self) -> f64 {
        match *self {
            ReturnDistance::Observed(d) | ReturnDistance::Censored(d) => d,
        }
    }

    /// Whether the true distance is `>= threshold`; `None` when censoring
    /// hides the answer.
    pub fn at_least(&self, threshold: f64) -> Option<bool> {
        match *self {
            ReturnDistance::Observed(d) => Some(d >= threshold),
            ReturnDistance::Censored(w) if w >= threshold => Some(true),
            ReturnDistance::Censored(_) => None,
        }
    }
}

/// One strict local maximum with its return distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalMaxPoint {
    pub index: usize,
    pub s: f64,
    pub l: ReturnDistance,
    pub r: ReturnDistance,
    /// Distance from `s` to the left window edge.
    pub w_l: f64,
    /// Distance from `s` to the right window edge.
    pub w_r: f64,
}

impl LocalMaxPoint {
    pub fn is_censored(&self) -> bool {
        self.l.is_censored() || self.r.is_censored()
    }

    /// Observed `(l, r)`, if neither side is censored.
    pub fn observed(&self) -> Option<(f64, f64)> {
        Some((self.l.observed()?, self.r.observed()?))
    }
}

/// All strict local maxima of the path with their return distances.
///
/// `l = step * (i - j)` for the nearest `j < i` with `values[j] >= values[i]`
/// (censored at the left edge if none), `r` symmetrically.
pub fn extract_local_maxima(path: &PathGrid) -> Vec<LocalMaxPoint> {
    let v = path.values();
    let n = v.len();
    if n < 3 {
        return Vec::new();
    }
    let grid = path.grid();
    let step = grid.step();

    let peaks: Vec<usize> = (1..n - 1).filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1]).collect();
    if peaks.is_empty() {
        return Vec::new();
    }

    // previous / next index with value >= v[i], via monotone stacks
    let mut prev_ge = vec![usize::MAX; n];
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..n {
        while let Some(&top) = stack.last() {
            if v[top] < v[i] {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&top) = stack.last() {
            prev_ge[i] = top;
        }
        stack.push(i);
    }
    let mut next_ge = vec![usize::MAX; n];
    stack.clear();
    for i in (0..n).rev() {
        while let Some(&top) = stack.last() {
            if v[top] < v[i] {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(&top) = stack.last() {
            next_ge[i] = top;
        }
        stack.push(i);
    }

    peaks
        .into_iter()
        .map(|i| {
            let w_l = i as f64 * step;
            let w_r = (n - 1 - i) as f64 * step;
            let l = match prev_ge[i] {
                usize::MAX => ReturnDistance::Censored(w_l),
                j => ReturnDistance::Observed((i - j) as f64 * step),
            };
            let r = match next_ge[i] {
                usize::MAX => ReturnDistance::Censored(w_r),
                j => ReturnDistance::Observed((j - i) as f64 * step),
            };
            LocalMaxPoint { index: i, s: grid.time(i), l, r, w_l, w_r }
        })
        .collect()
}

/// Local maxima whose location lies in `[a, b]` (grid-index based).
pub fn local_maxima_in(path: &PathGrid, a: f64, b: f64) -> Result<Vec<LocalMaxPoint>> {
    let (lo, hi) = path.grid().index_range(a, b)?;
    Ok(extract_local_maxima(path)
        .into_iter()
        .filter(|p| (lo..=hi).contains(&p.index))
        .collect())
}

/// `(u, v) = (l, l / (l + r))` for an uncensored point.
pub fn psi_transform(point: &LocalMaxPoint) -> Result<(f64, f64)> {
    let (l, r) = point.observed().ok_or(Error::Censored { s: point.s })?;
    Ok(psi(l, r))
}

pub fn psi(l: f64, r: f64) -> (f64, f64) {
    (l, l / (l + r))
}
