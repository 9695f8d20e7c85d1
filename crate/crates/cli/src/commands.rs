use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use suploc::empirics::{
    check_bound, estimate_location_density, estimate_nu, fit_beta_moments, frame_identity_gaps, frame_thresholds,
    kolmogorov_critical, ks_statistic, levy_factorization_check, mean_variance, u_marginal_tail_exponent, BetaLaw,
    DensityEstimate, TailWindow, Verdict, DEFAULT_V_BAND,
};
use suploc::io;
use suploc::locations::{argmax_location, largest_jump_location, local_maxima_in, LocalMaxPoint, LocationSample};
use suploc::mixture_inverse::{default_v_grid, fit_mixture, FitOptions};
use suploc::par::{try_map_replicates, with_workers};
use suploc::process_sim::{Family, GridSpec, SimSpec, Simulator};
use suploc::spectral::{
    basis_density, basis_density_reversible, entropy_bound, midpoint_grid, reversible_bound, DensityCurve,
};

use crate::args::{Cli, Command, CurveKind, Settings};
use crate::UsageError;

/// Slack for bin heights against a bound, in standard errors.
const BOUND_SE: f64 = 3.0;
/// Grid-discretisation allowance for the arcsine KS distance.
const KS_GRID_BUDGET: f64 = 0.01;
const KS_FLOOR: f64 = 0.02;
const BETA_SUM_TOL: f64 = 0.05;
const BOUNDARY_MASS_MAX: f64 = 0.03;
const FRAME_REL_TOL: f64 = 0.05;
const FRAME_HALFWIDTH: f64 = 0.01;

pub fn run(cli: Cli) -> Result<bool> {
    let settings = cli.run.resolve()?;
    fs::create_dir_all(&settings.out).with_context(|| format!("creating {}", settings.out.display()))?;
    let workers = settings.workers;
    with_workers(workers, move || dispatch(cli.command, &settings))
}

fn dispatch(command: Command, s: &Settings) -> Result<bool> {
    match command {
        Command::Simulate => simulate(s),
        Command::Tau => tau(s),
        Command::Jump => jump(s),
        Command::Nu => nu(s),
        Command::LevyCheck => levy_check(s),
        Command::Spectral { curve, v, points } => spectral(s, curve, v, points),
        Command::Fit { input, atoms, mass_cap, damping } => fit(s, &input, atoms, mass_cap, damping),
        Command::BoundCheck { input, reversible } => bound_check(s, &input, reversible),
    }
}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

fn write_file(path: PathBuf, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json(path: PathBuf, value: &impl Serialize) -> Result<()> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")
    })
}

fn write_manifest(s: &Settings, analysis: &str, spec: Option<&SimSpec>, extra: serde_json::Value) -> Result<()> {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = json!({
        "analysis": analysis,
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": timestamp,
        "settings": s,
        "spec": spec,
        "tolerances": {
            "bound_se": BOUND_SE,
            "ks_grid_budget": KS_GRID_BUDGET,
            "ks_floor": KS_FLOOR,
            "beta_sum": BETA_SUM_TOL,
            "boundary_mass_max": BOUNDARY_MASS_MAX,
            "frame_relative": FRAME_REL_TOL,
            "frame_halfwidth": FRAME_HALFWIDTH,
        },
        "details": extra,
    });
    write_json(s.out.join("manifest.json"), &manifest)
}

#[derive(Serialize)]
struct VerdictFile {
    pass: bool,
    /// Checks that decide the exit status.
    verdicts: Vec<Verdict>,
    /// Diagnostics shown for information only.
    reported: Vec<Verdict>,
}

fn finish(s: &Settings, verdicts: Vec<Verdict>, reported: Vec<Verdict>) -> Result<bool> {
    let pass = verdicts.iter().all(|v| v.pass);
    for v in &verdicts {
        println!("{} {}: {:.6} (threshold {:.6})", if v.pass { "PASS" } else { "FAIL" }, v.name, v.statistic, v.threshold);
    }
    for v in &reported {
        println!("INFO {}: {:.6} (threshold {:.6})", v.name, v.statistic, v.threshold);
    }
    write_json(s.out.join("verdicts.json"), &VerdictFile { pass, verdicts, reported })?;
    Ok(pass)
}

fn unit_spec(s: &Settings) -> Result<SimSpec> {
    let grid = GridSpec::unit(s.n + 1).map_err(usage)?;
    SimSpec::new(s.family, grid, s.seed, s.reps).map_err(usage)
}

fn padded_spec(s: &Settings) -> Result<SimSpec> {
    let grid = GridSpec::padded_unit(s.window, s.n).map_err(usage)?;
    SimSpec::new(s.family, grid, s.seed, s.reps).map_err(usage)
}

fn simulate(s: &Settings) -> Result<bool> {
    let spec = unit_spec(s)?;
    let sim = Simulator::new(&spec)?;
    let dir = s.out.join("paths");
    fs::create_dir_all(&dir)?;
    for i in 0..s.reps {
        let path = sim.path(i)?;
        write_file(dir.join(format!("path_{i:05}.csv")), |w| io::write_path(w, &path))?;
    }
    write_manifest(s, "simulate", Some(&spec), json!({ "fgn_method": sim.fgn_method() }))?;
    Ok(true)
}

fn bound_verdicts(d: &DensityEstimate, reversible: bool) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    let e = check_bound(d, entropy_bound, BOUND_SE)?;
    out.push(
        Verdict::at_most("entropy_bound_violating_bins", e.violations.len() as f64, 0.0)
            .with_detail(format!("worst excess {:.3} SE", e.worst_excess_se)),
    );
    if reversible {
        let r = check_bound(d, reversible_bound, BOUND_SE)?;
        out.push(
            Verdict::at_most("reversible_bound_violating_bins", r.violations.len() as f64, 0.0)
                .with_detail(format!("worst excess {:.3} SE", r.worst_excess_se)),
        );
    }
    Ok(out)
}

fn is_gaussian_levy(f: Family) -> bool {
    match f {
        Family::Brownian => true,
        Family::Fbm { hurst } => hurst == 0.5,
        Family::StableLevy { alpha, .. } => alpha == 2.0,
    }
}

/// Delta-method standard error of `a + b` from the moment fit.
fn beta_sum_se(x: &[f64]) -> Result<f64> {
    let (m, s2) = mean_variance(x)?;
    let n = x.len() as f64;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    let se_s2 = ((m4 - s2 * s2).max(0.0) / n).sqrt();
    Ok(m * (1.0 - m) / (s2 * s2) * se_s2)
}

fn location_outputs(s: &Settings, samples: &[LocationSample]) -> Result<DensityEstimate> {
    write_file(s.out.join("samples.csv"), |w| io::write_samples(w, samples))?;
    let d = estimate_location_density(samples, s.bins)?;
    write_file(s.out.join("density.csv"), |w| io::write_density(w, &d))?;
    Ok(d)
}

fn tau(s: &Settings) -> Result<bool> {
    let spec = unit_spec(s)?;
    let sim = Simulator::new(&spec)?;
    let taus = try_map_replicates(s.reps, |i| argmax_location(&sim.path(i)?, 0.0, 1.0))?;
    let d = location_outputs(s, &taus)?;
    let x: Vec<f64> = taus.iter().map(|t| t.value).collect();
    let fit = fit_beta_moments(&x).ok();

    let mut verdicts = bound_verdicts(&d, s.family.is_time_reversible())?;
    let mut reported = Vec::new();
    let law = BetaLaw::arcsine();
    let ks = ks_statistic(&x, |v| law.cdf(v));
    let ks_threshold = KS_FLOOR.max(KS_GRID_BUDGET + kolmogorov_critical(0.01) / (x.len() as f64).sqrt());
    let ks_verdict = Verdict::at_most("ks_vs_beta_half_half", ks.d, ks_threshold);
    if is_gaussian_levy(s.family) {
        verdicts.push(ks_verdict);
    } else {
        reported.push(ks_verdict);
    }
    if let (Family::StableLevy { beta, .. }, Some(fit)) = (s.family, fit) {
        if beta == 0.0 {
            let tol = BETA_SUM_TOL.max(4.0 * beta_sum_se(&x)?);
            verdicts.push(Verdict::within("beta_fit_a_plus_b", fit.a + fit.b, 1.0 - tol, 1.0 + tol));
            verdicts.push(Verdict::at_most("boundary_mass", d.mass_at_0 + d.mass_at_1, BOUNDARY_MASS_MAX));
        }
    }
    write_manifest(
        s,
        "tau",
        Some(&spec),
        json!({
            "fgn_method": sim.fgn_method(),
            "mass_at_0": d.mass_at_0,
            "mass_at_1": d.mass_at_1,
            "beta_fit": fit,
        }),
    )?;
    finish(s, verdicts, reported)
}

fn jump(s: &Settings) -> Result<bool> {
    let spec = unit_spec(s)?;
    let sim = Simulator::new(&spec)?;
    let deltas = try_map_replicates(s.reps, |i| largest_jump_location(&sim.path(i)?, 0.0, 1.0))?;
    let d = location_outputs(s, &deltas)?;
    let verdicts = bound_verdicts(&d, false)?;
    write_manifest(s, "jump", Some(&spec), json!({ "fgn_method": sim.fgn_method(), "mass_at_1": d.mass_at_1 }))?;
    finish(s, verdicts, Vec::new())
}

struct Clouds {
    taus: Vec<LocationSample>,
    clouds: Vec<Vec<LocalMaxPoint>>,
    /// Every local maximum of the first replicate, unfiltered.
    first: Vec<LocalMaxPoint>,
}

/// Per-replicate supremum location and local maxima in `[0, 1]` with both
/// return distances at least `floor`.
fn clouds(s: &Settings, spec: &SimSpec, floor: f64) -> Result<Clouds> {
    let sim = Simulator::new(spec)?;
    let first = local_maxima_in(&sim.path(0)?, 0.0, 1.0)?;
    let out = try_map_replicates(s.reps, |i| {
        let p = sim.path(i)?;
        let tau = argmax_location(&p, 0.0, 1.0)?;
        let cloud = local_maxima_in(&p, 0.0, 1.0)?
            .into_iter()
            .filter(|q| q.l.bound() >= floor && q.r.bound() >= floor)
            .collect::<Vec<_>>();
        Ok::<_, suploc::Error>((tau, cloud))
    })?;
    let (taus, clouds) = out.into_iter().unzip();
    Ok(Clouds { taus, clouds, first })
}

fn nu(s: &Settings) -> Result<bool> {
    let spec = padded_spec(s)?;
    let ts: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let Clouds { taus, clouds, first } = clouds(s, &spec, 0.1)?;
    write_file(s.out.join("points.csv"), |w| io::write_points(w, &first))?;
    let est = estimate_nu(&clouds, frame_thresholds(&ts), spec.grid.step(), (0.0, 1.0))?;
    write_file(s.out.join("nu.csv"), |w| {
        let rows = (0..ts.len()).map(|k| {
            let th = est.thresholds[k];
            vec![th.l, th.r, est.estimates[k], est.standard_errors[k], est.dropped[k] as f64]
        });
        io::write_table(w, &["l", "r", "estimate", "se", "dropped"], rows)
    })?;
    let gaps = frame_identity_gaps(&est, &taus, FRAME_HALFWIDTH, FRAME_REL_TOL, BOUND_SE)?;
    write_file(s.out.join("frame.csv"), |w| {
        let rows = gaps.iter().map(|g| vec![g.t, g.nu, g.nu_se, g.density, g.density_se, g.relative_gap]);
        io::write_table(w, &["t", "nu", "nu_se", "density", "density_se", "relative_gap"], rows)
    })?;
    let central: Vec<_> = gaps.iter().filter(|g| (0.2 - 1e-12..=0.8 + 1e-12).contains(&g.t)).collect();
    let failing = central.iter().filter(|g| !g.pass).count();
    let worst = central.iter().map(|g| g.relative_gap).fold(0.0, f64::max);
    let verdicts = vec![
        Verdict::at_most("frame_identity_failing_points", failing as f64, 0.0)
            .with_detail(format!("t = 0.2..0.8, worst relative gap {worst:.4}")),
    ];
    write_manifest(s, "nu", Some(&spec), json!({ "dropped": est.dropped }))?;
    finish(s, verdicts, Vec::new())
}

fn levy_check(s: &Settings) -> Result<bool> {
    let spec = padded_spec(s)?;
    let window = TailWindow::for_grid(spec.grid.step(), s.window)?;
    let clouds = clouds(s, &spec, window.lo)?.clouds;
    let levy = levy_factorization_check(&clouds, window, (0.0, 1.0))?;
    let u = u_marginal_tail_exponent(&clouds, window, (0.0, 1.0), DEFAULT_V_BAND)?;
    write_file(s.out.join("tails.csv"), |w| {
        let rows = (0..levy.l_fit.x.len()).map(|k| vec![levy.l_fit.x[k], levy.l_fit.survival[k], levy.r_fit.survival[k]]);
        io::write_table(w, &["x", "l_survival", "r_survival"], rows)
    })?;
    write_json(s.out.join("levy.json"), &json!({ "factorization": &levy, "u_marginal": &u }))?;
    let checks = vec![
        Verdict::within("c1_plus_c2", levy.sum(), 0.9, 1.1),
        Verdict::within("u_marginal_exponent", u.fit.exponent, 0.85, 1.15),
    ];
    let product = Verdict::at_most("product_form_relative_error", levy.product_error, 0.1)
        .with_detail(format!("{} cells", levy.cells_checked));
    let (verdicts, mut reported) = if s.family.is_levy() { (checks, Vec::new()) } else { (Vec::new(), checks) };
    reported.push(product);
    write_manifest(s, "levy-check", Some(&spec), json!({ "c1": levy.c1, "c2": levy.c2 }))?;
    finish(s, verdicts, reported)
}

fn spectral(s: &Settings, curve: CurveKind, v: f64, points: usize) -> Result<bool> {
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let t = midpoint_grid(points);
    let rows: Vec<Vec<f64>> = t
        .iter()
        .map(|&x| {
            Ok(match curve {
                CurveKind::Basis => vec![x, basis_density(v, x)?, entropy_bound(x)?],
                CurveKind::Reversible => vec![x, basis_density_reversible(v, x)?, reversible_bound(x)?],
                CurveKind::Bounds => vec![x, entropy_bound(x)?, reversible_bound(x)?],
            })
        })
        .collect::<suploc::Result<_>>()
        .map_err(usage)?;
    let header: &[&str] = match curve {
        CurveKind::Bounds => &["t", "entropy_bound", "reversible_bound"],
        _ => &["t", "value", "bound"],
    };
    write_file(s.out.join("spectral.csv"), |w| io::write_table(w, header, rows))?;
    write_manifest(s, "spectral", None, json!({ "curve": curve, "v": v, "points": points }))?;
    Ok(true)
}

/// Reads the named numeric columns of a CSV file with a header row.
fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h.trim() == *n)
                .ok_or_else(|| usage(format!("{}: missing column `{n}`", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (c, &i) in idx.iter().enumerate() {
            let cell = rec.get(i).unwrap_or("").trim();
            let x: f64 = cell
                .parse()
                .map_err(|_| usage(format!("{}: row {}: `{cell}` is not a number", path.display(), line + 1)))?;
            cols[c].push(x);
        }
    }
    Ok(cols)
}

fn fit(s: &Settings, input: &Path, atoms: usize, mass_cap: f64, damping: f64) -> Result<bool> {
    if atoms == 0 {
        return Err(usage("--atoms must be positive"));
    }
    let cols = read_columns(input, &["t", "value"])?;
    let curve = DensityCurve::new(cols[0].clone(), cols[1].clone()).map_err(usage)?;
    let opts = FitOptions { mass_cap, damping };
    let (mu, report) = fit_mixture(&curve, &default_v_grid(atoms), &opts).map_err(usage)?;
    write_file(s.out.join("measure.csv"), |w| io::write_measure(w, &mu))?;
    write_json(s.out.join("residual.json"), &report)?;
    let reproduced = DensityCurve::new(curve.t().to_vec(), report.reproduced.clone())?;
    write_file(s.out.join("reproduced.csv"), |w| io::write_curve(w, &reproduced))?;
    write_manifest(
        s,
        "fit",
        None,
        json!({ "input": input, "atoms": atoms, "mass_cap": mass_cap, "damping": damping }),
    )?;
    Ok(true)
}

fn bound_check(s: &Settings, input: &Path, reversible: bool) -> Result<bool> {
    let cols = read_columns(input, &["t", "value", "se"])?;
    let bins = cols[0].len();
    if bins < 2 {
        return Err(usage("need at least two bins"));
    }
    let d = DensityEstimate {
        heights: cols[1].clone(),
        standard_errors: cols[2].clone(),
        mass_at_0: 0.0,
        mass_at_1: 0.0,
        n_samples: 0,
    };
    for (i, &t) in cols[0].iter().enumerate() {
        if (t - d.bin_center(i)).abs() > 1e-9 {
            return Err(usage(format!("row {}: t = {t} is not the centre of bin {i} of {bins} uniform bins", i + 1)));
        }
    }
    let verdicts = bound_verdicts(&d, reversible)?;
    write_manifest(s, "bound-check", None, json!({ "input": input, "reversible": reversible }))?;
    finish(s, verdicts, Vec::new())
}
