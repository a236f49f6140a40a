//! Acceptance checks, one test per criterion. Every test writes a single
//! `PASS`/`FAIL` line straight to stderr (bypassing the test harness capture)
//! so the tally is visible in a plain `cargo test` log.

use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;
use ssh_mosaic::eigen::{max_matching_distance, validate_spectrum};
use ssh_mosaic::localization::diagnose;
use ssh_mosaic::lyapunov::asymptotic_settings;
use ssh_mosaic::rings::{hausdorff_distance, k2_coefficients, k2_radii, solve_cubic};
use ssh_mosaic::*;

const E_CONST: f64 = std::f64::consts::E;

fn verdict(id: &str, title: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] criterion {id}: {title} — {detail}");
}

/// Full-size chain: L = 1220 sites, periodic, θ = 0.
fn chain(kappa: usize, w: f64, h: f64) -> ModelParams {
    ModelParams { v: 1.0, w, lambda: 0.5, h, kappa, num_cells: 610, theta: 0.0, ..Default::default() }
}

struct Solved {
    params: ModelParams,
    spectrum: Spectrum,
    gamma: Vec<f64>,
}

fn solved(params: ModelParams) -> Solved {
    let spectrum = solve(&params).expect("diagonalization");
    let gamma = diagnose(&spectrum).expect("diagnostics").iter().map(|d| d.gamma_fractal).collect();
    Solved { params, spectrum, gamma }
}

macro_rules! cached {
    ($name:ident, $params:expr) => {
        fn $name() -> &'static Solved {
            static CELL: OnceLock<Solved> = OnceLock::new();
            CELL.get_or_init(|| solved($params))
        }
    };
}

cached!(hermitian_030, chain(1, 0.3, 0.0));
cached!(hermitian_044, chain(1, 0.44, 0.0));
cached!(hermitian_060, chain(1, 0.6, 0.0));
cached!(ring_k1_chain, chain(1, 1.0, 1.0));
cached!(ring_k2_chain, chain(2, 1.0, 1.0));

/// Fraction of `items` satisfying `ok`; `None` when `items` is empty.
fn compliance<T>(items: &[T], ok: impl Fn(&T) -> bool) -> Option<f64> {
    (!items.is_empty()).then(|| items.iter().filter(|x| ok(x)).count() as f64 / items.len() as f64)
}

fn fmt_fraction(f: Option<f64>) -> String {
    f.map_or("n/a (no states)".into(), |f| format!("{:.1}%", 100.0 * f))
}

#[test]
fn criterion_1_hermitian_mobility_edge() {
    let mut pass = true;
    let mut details = vec![];
    for (ratio, s) in [(0.3, hermitian_030()), (0.44, hermitian_044()), (0.6, hermitian_060())] {
        let edge = s.params.v * s.params.w / s.params.lambda;
        let states: Vec<(f64, f64)> =
            s.spectrum.eigenvalues.iter().zip(&s.gamma).map(|(e, &g)| (e.norm(), g)).collect();
        let outside: Vec<_> = states.iter().filter(|(r, _)| *r > edge + 0.05).collect();
        let inside: Vec<_> = states.iter().filter(|(r, _)| *r < edge - 0.05).collect();
        let loc = compliance(&outside, |(_, g)| *g < 0.3);
        let ext = compliance(&inside, |(_, g)| *g > 0.7);
        pass &= loc.is_none_or(|f| f >= 0.95) && ext.is_none_or(|f| f >= 0.95);
        details.push(format!("w/v={ratio}: localized {} extended {}", fmt_fraction(loc), fmt_fraction(ext)));
    }
    verdict("1", "Hermitian mobility edge |E| = vw/λ", pass, &details.join("; "));
    assert!(pass, "{details:?}");
}

#[test]
fn criterion_2_mobility_ring_radius() {
    let s = ring_k1_chain();
    let radius = 2.0 / E_CONST;
    let states: Vec<(f64, f64)> = s.spectrum.eigenvalues.iter().zip(&s.gamma).map(|(e, &g)| (e.norm(), g)).collect();
    let localized: Vec<_> = states.iter().filter(|(_, g)| *g < 0.3).collect();
    let extended: Vec<_> = states.iter().filter(|(_, g)| *g > 0.6).collect();
    let loc = compliance(&localized, |(r, _)| *r > radius + 0.03);
    let ext = compliance(&extended, |(r, _)| *r < radius - 0.03);
    let pass = loc.is_none_or(|f| f >= 0.95) && ext.is_none_or(|f| f >= 0.95);
    let detail = format!(
        "Γ<0.3 outside 2/e+0.03: {} of {}; Γ>0.6 inside 2/e−0.03: {} of {}",
        fmt_fraction(loc),
        localized.len(),
        fmt_fraction(ext),
        extended.len()
    );
    verdict("2", "mobility ring radius 2/e", pass, &detail);
    assert!(pass, "{detail}");
}

/// Up to `count` eigenvalues with closed-form γ ≥ `floor`, evenly spread over
/// the sorted spectrum.
fn localized_energies(s: &Solved, floor: f64, count: usize) -> Vec<(Complex64, f64)> {
    let eligible: Vec<(Complex64, f64)> = s
        .spectrum
        .eigenvalues
        .iter()
        .filter_map(|&e| analytic_le(&s.params, e).ok().filter(|&g| g >= floor).map(|g| (e, g)))
        .collect();
    let stride = (eligible.len() / count).max(1);
    eligible.into_iter().step_by(stride).take(count).collect()
}

fn le_oracle(s: &Solved) -> (usize, f64) {
    let sample = localized_energies(s, 0.2, 100);
    let settings = TransferSettings { num_quasicells: 10_000, theta_samples: 32, ..Default::default() };
    let worst = sample
        .par_iter()
        .map(|&(e, analytic)| (finite_le(&s.params, e, &settings).expect("finite LE").gamma - analytic).abs())
        .reduce(|| 0.0, f64::max);
    (sample.len(), worst)
}

#[test]
fn criterion_3_le_oracle_k1() {
    let (n, worst) = le_oracle(ring_k1_chain());
    let pass = n == 100 && worst <= 0.01;
    let detail = format!("{n} eigenvalues with analytic γ ≥ 0.2, max |finite − analytic| = {worst:.2e}");
    verdict("3", "LE oracle κ=1", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_4_le_oracle_k2() {
    let (n, worst) = le_oracle(ring_k2_chain());
    let pass = n == 100 && worst <= 0.01;
    let detail = format!("{n} eigenvalues with analytic γ ≥ 0.2, max |finite − analytic| = {worst:.2e}");
    verdict("4", "LE oracle κ=2", pass, &detail);
    assert!(pass, "{detail}");
}

/// Bisection root of the real-axis boundary equation x|x² − 2| = 2/e.
fn real_axis_root(lo: f64, hi: f64) -> f64 {
    let g = |x: f64| x * (x * x - 2.0).abs() - 2.0 / E_CONST;
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (g(lo) < 0.0) == (g(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_5_multiple_ring_geometry() {
    let params = ModelParams { kappa: 2, v: 1.0, w: 1.0, lambda: 0.5, h: 1.0, ..Default::default() };
    let curve = ring_k2(&params, 2048).unwrap();
    let components = count_components(&curve);
    let radii = k2_radii(k2_coefficients(&params).0, k2_coefficients(&params).1, 0.0);
    let oracle = [real_axis_root(0.0, 1.0), real_axis_root(1.0, 2.0_f64.sqrt()), real_axis_root(2.0_f64.sqrt(), 2.0)];
    let targets = [0.4003, 1.171, 1.572];
    let radii_ok = radii.len() == 3
        && radii.iter().zip(targets).all(|(r, t)| (r - t).abs() <= 1e-3)
        && radii.iter().zip(oracle).all(|(r, o)| (r - o).abs() <= 1e-9);

    // Vieta checks on the cubic in u = r² at φ = 0: u³ − 2a u² + a² u − c² = 0.
    let (a, c) = k2_coefficients(&params);
    let roots = solve_cubic(-2.0 * a, a * a, -c * c);
    let sum_err = (roots.iter().sum::<f64>() - 2.0 * a).abs();
    let prod_err = (roots.iter().product::<f64>() - c * c).abs();
    let vieta_ok = roots.len() == 3 && sum_err <= 1e-9 && prod_err <= 1e-9;

    let pass = components == 3 && radii_ok && vieta_ok;
    let detail = format!(
        "{components} components; real-axis radii {radii:.6?} (bisection {oracle:.6?}); root-sum err {sum_err:.1e}, root-product err {prod_err:.1e}"
    );
    verdict("5", "κ=2 ring geometry", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_6_numeric_vs_closed_form() {
    let settings = asymptotic_settings();
    let k1 = ModelParams { h: 1.0, ..Default::default() };
    let grid1 = ComplexGrid::with_spacing((-1.0, 1.0), (-1.0, 1.0), 0.01).unwrap();
    let nb1 = numeric_boundary(&k1, &grid1, &settings, 1e-3).unwrap();
    let d1 = hausdorff_distance(&nb1.curve.components, &ring_k1(&k1, 2048).unwrap().components);

    let k2 = ModelParams { kappa: 2, h: 1.0, ..Default::default() };
    let grid2 = ComplexGrid::with_spacing((-2.0, 2.0), (-1.0, 1.0), 0.01).unwrap();
    let nb2 = numeric_boundary(&k2, &grid2, &settings, 1e-3).unwrap();
    let d2 = hausdorff_distance(&nb2.curve.components, &ring_k2(&k2, 2048).unwrap().components);

    let pass = d1 <= 0.02
        && d2 <= 0.02
        && !nb1.touches_edge()
        && !nb2.touches_edge()
        && count_components(&nb2.curve) == 3;
    let detail = format!(
        "κ=1 Hausdorff {d1:.2e} ({} comp.), κ=2 Hausdorff {d2:.2e} ({} comp.)",
        count_components(&nb1.curve),
        count_components(&nb2.curve)
    );
    verdict("6", "numeric boundary vs closed forms", pass, &detail);
    assert!(pass, "{detail}");
}

fn small(kappa: usize, h: f64) -> ModelParams {
    ModelParams { kappa, h, w: 0.8, num_cells: 55, theta: 0.3, ..Default::default() }
}

#[test]
fn criterion_7_exact_symmetries() {
    let mut gauge = 0.0f64;
    let mut scale_e = 0.0f64;
    let mut scale_g = 0.0f64;
    let mut hermitian = 0.0f64;
    for kappa in [1, 2, 3] {
        for h in [0.0, 0.5, 1.0] {
            let p = small(kappa, h);
            let a = solve(&p).unwrap();
            let b = solve(&ModelParams { theta: p.theta + std::f64::consts::PI, ..p }).unwrap();
            let neg: Vec<Complex64> = b.eigenvalues.iter().map(|e| -e).collect();
            gauge = gauge.max(max_matching_distance(&a.eigenvalues, &neg).unwrap());

            let s = solve(&p.scaled(3.0)).unwrap();
            let tripled: Vec<Complex64> = a.eigenvalues.iter().map(|e| e * 3.0).collect();
            scale_e = scale_e.max(max_matching_distance(&tripled, &s.eigenvalues).unwrap());
            let ga = diagnose(&a).unwrap();
            let gs = diagnose(&s).unwrap();
            for (x, y) in ga.iter().zip(&gs) {
                scale_g = scale_g.max((x.gamma_fractal - y.gamma_fractal).abs());
            }
        }
        let p = ModelParams { delta: Complex64::new(0.3, 0.0), ..small(kappa, 0.0) };
        let h = build_hamiltonian(&p).unwrap();
        let spectrum = solve(&p).unwrap();
        let max_im = spectrum.eigenvalues.iter().map(|e| e.im.abs()).fold(0.0, f64::max);
        hermitian = hermitian.max(max_im / ssh_mosaic::eigen::frobenius_norm(&h));
    }
    let pass = gauge <= 1e-8 && scale_e <= 1e-8 && scale_g <= 1e-10 && hermitian <= 1e-10;
    let detail = format!(
        "gauge {gauge:.1e}, scaling |ΔE| {scale_e:.1e}, |ΔΓ| {scale_g:.1e}, Hermitian max|Im E|/‖H‖ {hermitian:.1e}"
    );
    verdict("7", "exact symmetries (L=110)", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_8_eigensolver_contract() {
    let mut configs: Vec<&Solved> =
        vec![hermitian_030(), hermitian_044(), hermitian_060(), ring_k1_chain(), ring_k2_chain()];
    let extra: Vec<Solved> = [1, 2, 3]
        .into_iter()
        .flat_map(|k| [0.0, 1.0].map(|h| solved(small(k, h))))
        .collect();
    configs.extend(extra.iter());
    let mut worst_res = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut clean = true;
    for s in configs {
        let h = build_hamiltonian(&s.params).unwrap();
        let report = validate_spectrum(&h, &s.spectrum);
        let norm = ssh_mosaic::eigen::frobenius_norm(&h);
        worst_res = worst_res.max(report.max_residual / norm);
        worst_trace = worst_trace.max(report.trace_error / norm);
        clean &= report.residual_violations.is_empty() && report.norm_violations.is_empty();
    }
    let pass = clean && worst_res <= 1e-8 && worst_trace <= 1e-8;
    let detail = format!("max residual/‖H‖ {worst_res:.1e}, max trace error/‖H‖ {worst_trace:.1e}");
    verdict("8", "eigensolver contract", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_9_reported_not_asserted() {
    let params = chain(2, 1.9, 1.0);
    let curve = ring_k2(&params, 2048).unwrap();
    let spectrum = solve(&params).unwrap();
    let total = count_components(&curve);
    let populated = count_populated_components(&curve, &spectrum.eigenvalues, 0.02);
    let detail = format!(
        "w/v=1.9, h=1: {total} boundary components, {populated} enclosing or touching eigenvalues (tol 0.02); marker energies need the unstated θ"
    );
    verdict("9", "report only", true, &detail);
}
