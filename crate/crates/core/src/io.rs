//! Plain CSV export: header row, LF line endings, 17 significant digits.

use std::io::{self, Write};

use crate::empirics::DensityEstimate;
use crate::locations::{LocalMaxPoint, LocationSample};
use crate::process_sim::PathGrid;
use crate::spectral::{DensityCurve, MixtureMeasure};

/// `{:.16e}`, which round-trips every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn row<W: Write>(w: &mut W, cells: &[String]) -> io::Result<()> {
    w.write_all(cells.join(",").as_bytes())?;
    w.write_all(b"\n")
}

pub fn write_table<W: Write>(w: &mut W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> io::Result<()> {
    row(w, &header.iter().map(|h| h.to_string()).collect::<Vec<_>>())?;
    for r in rows {
        if r.len() != header.len() {
            return Err(io::Error::new(io::ErrorKind::InvalidInput, "row width differs from header"));
        }
        row(w, &r.into_iter().map(fmt_f64).collect::<Vec<_>>())?;
    }
    Ok(())
}

pub fn write_path<W: Write>(w: &mut W, path: &PathGrid) -> io::Result<()> {
    let rows = path.values().iter().enumerate().map(|(k, &x)| vec![path.time(k), x]);
    write_table(w, &["t", "x"], rows)
}

pub fn write_points<W: Write>(w: &mut W, points: &[LocalMaxPoint]) -> io::Result<()> {
    row(w, &["s", "l", "l_censored", "r", "r_censored"].map(String::from))?;
    for p in points {
        row(
            w,
            &[
                fmt_f64(p.s),
                fmt_f64(p.l.bound()),
                (p.l.is_censored() as u8).to_string(),
                fmt_f64(p.r.bound()),
                (p.r.is_censored() as u8).to_string(),
            ],
        )?;
    }
    Ok(())
}

pub fn write_samples<W: Write>(w: &mut W, samples: &[LocationSample]) -> io::Result<()> {
    row(w, &["value", "at_start", "at_end"].map(String::from))?;
    for s in samples {
        row(w, &[fmt_f64(s.value), (s.at_start as u8).to_string(), (s.at_end as u8).to_string()])?;
    }
    Ok(())
}

/// Bin rows `(t, value, se)` followed by nothing else; the boundary masses go
/// into the JSON summary.
pub fn write_density<W: Write>(w: &mut W, d: &DensityEstimate) -> io::Result<()> {
    let rows = (0..d.bins()).map(|i| vec![d.bin_center(i), d.heights[i], d.standard_errors[i]]);
    write_table(w, &["t", "value", "se"], rows)
}

pub fn write_curve<W: Write>(w: &mut W, c: &DensityCurve) -> io::Result<()> {
    let rows = c.t().iter().zip(c.values()).map(|(&t, &f)| vec![t, f]);
    write_table(w, &["t", "value"], rows)
}

pub fn write_measure<W: Write>(w: &mut W, mu: &MixtureMeasure) -> io::Result<()> {
    write_table(w, &["v", "mass"], mu.atoms().iter().map(|a| vec![a.v, a.mass]))
}
