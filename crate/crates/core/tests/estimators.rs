use suploc::empirics::{
    check_bound, estimate_location_density, estimate_nu, fit_beta_moments, frame_identity_gaps, frame_thresholds,
    ks_two_sample, levy_factorization_check, two_sample_critical, NuThreshold, TailWindow,
};
use suploc::locations::{argmax_location, largest_jump_location, local_maxima_in, LocalMaxPoint, LocationSample};
use suploc::par::map_replicates;
use suploc::process_sim::{Family, GridSpec, SimSpec, Simulator};
use suploc::spectral::entropy_bound;

fn sim(family: Family, grid: GridSpec, seed: u64, reps: usize) -> Simulator {
    Simulator::new(&SimSpec::new(family, grid, seed, reps).unwrap()).unwrap()
}

fn taus(s: &Simulator, reps: usize) -> Vec<LocationSample> {
    map_replicates(reps, |i| argmax_location(&s.path(i).unwrap(), 0.0, 1.0).unwrap())
}

#[test]
fn brownian_argmax_is_u_shaped_arcsine() {
    let reps = 20_000;
    let s = sim(Family::Brownian, GridSpec::unit(1025).unwrap(), 100, reps);
    let t = taus(&s, reps);
    let d = estimate_location_density(&t, 20).unwrap();
    assert!((d.total_mass() - 1.0).abs() < 1e-12);
    let (argmin, _) = d
        .heights
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &h)| if h < acc.1 { (i, h) } else { acc });
    let centre = d.bin_center(argmin);
    assert!((0.3..=0.7).contains(&centre), "minimum at {centre}");
    assert!(d.heights[0] > 2.0 * d.heights[10] && d.heights[19] > 2.0 * d.heights[9]);

    let x: Vec<f64> = t.iter().map(|s| s.value).collect();
    let fit = fit_beta_moments(&x).unwrap();
    assert!((fit.a + fit.b - 1.0).abs() < 0.05, "{fit:?}");
    assert!((fit.a - 0.5).abs() < 0.05, "{fit:?}");
}

#[test]
fn brownian_largest_jump_obeys_entropy_bound() {
    let reps = 20_000;
    let s = sim(Family::Brownian, GridSpec::unit(1025).unwrap(), 101, reps);
    let deltas = map_replicates(reps, |i| largest_jump_location(&s.path(i).unwrap(), 0.0, 1.0).unwrap());
    let d = estimate_location_density(&deltas, 50).unwrap();
    let c = check_bound(&d, entropy_bound, 3.0).unwrap();
    assert!(c.passed(), "bins {:?}", c.violations);
}

#[test]
fn reversible_argmax_law_is_mirror_symmetric() {
    let reps = 10_000;
    for (k, family) in [Family::Fbm { hurst: 0.7 }, Family::StableLevy { alpha: 1.5, beta: 0.0 }].into_iter().enumerate() {
        let s = sim(family, GridSpec::unit(513).unwrap(), 102 + k as u64, reps);
        let x: Vec<f64> = taus(&s, reps).iter().map(|t| t.value).collect();
        let (a, b) = x.split_at(reps / 2);
        let mirrored: Vec<f64> = b.iter().map(|v| 1.0 - v).collect();
        let d = ks_two_sample(a, &mirrored);
        assert!(d < two_sample_critical(0.01, a.len(), b.len()), "{family:?}: D = {d}");
    }
}

fn padded_clouds(family: Family, seed: u64, reps: usize, ppu: usize) -> (Vec<LocationSample>, Vec<Vec<LocalMaxPoint>>, f64) {
    let grid = GridSpec::padded_unit(3.0, ppu).unwrap();
    let s = sim(family, grid, seed, reps);
    let out = map_replicates(reps, |i| {
        let p = s.path(i).unwrap();
        let cloud = local_maxima_in(&p, 0.0, 1.0)
            .unwrap()
            .into_iter()
            .filter(|q| q.l.bound() >= 0.02 && q.r.bound() >= 0.02)
            .collect::<Vec<_>>();
        (argmax_location(&p, 0.0, 1.0).unwrap(), cloud)
    });
    let (t, c) = out.into_iter().unzip();
    (t, c, grid.step())
}

/// `ν(aA) = ν(A) / a` with `a = 2`.
#[test]
fn nu_scales_inversely_with_time() {
    let (_, clouds, step) = padded_clouds(Family::Brownian, 103, 5000, 512);
    let base = [(0.05, 0.1), (0.1, 0.1), (0.2, 0.05), (0.15, 0.3)];
    let mut th: Vec<NuThreshold> = base.iter().map(|&(l, r)| NuThreshold { l, r }).collect();
    th.extend(base.iter().map(|&(l, r)| NuThreshold { l: 2.0 * l, r: 2.0 * r }));
    let nu = estimate_nu(&clouds, th, step, (0.0, 1.0)).unwrap();
    for k in 0..base.len() {
        let (small, big) = (nu.estimates[k], 2.0 * nu.estimates[k + base.len()]);
        let se = (nu.standard_errors[k].powi(2) + 4.0 * nu.standard_errors[k + base.len()].powi(2)).sqrt();
        assert!((small - big).abs() < 4.0 * se, "{:?}: {small} vs {big} (se {se})", base[k]);
    }
}

#[test]
fn cauchy_frame_identity() {
    let (t, clouds, step) = padded_clouds(Family::StableLevy { alpha: 1.0, beta: 0.0 }, 104, 8000, 512);
    let ts: Vec<f64> = (2..=8).map(|k| k as f64 / 10.0).collect();
    let nu = estimate_nu(&clouds, frame_thresholds(&ts), step, (0.0, 1.0)).unwrap();
    let gaps = frame_identity_gaps(&nu, &t, 0.01, 0.05, 3.0).unwrap();
    for g in &gaps {
        assert!(g.pass, "{g:?}");
    }
}

#[test]
fn fbm_product_form_is_reported_not_asserted() {
    let (_, clouds, step) = padded_clouds(Family::Fbm { hurst: 0.7 }, 105, 1000, 512);
    let w = TailWindow::new(4.0 * step.max(0.005), 0.75, 24).unwrap();
    let rep = levy_factorization_check(&clouds, w, (0.0, 1.0)).unwrap();
    assert!(rep.c1.is_finite() && rep.c2.is_finite() && rep.product_error.is_finite());
    assert!(rep.cells_checked > 0);
}
