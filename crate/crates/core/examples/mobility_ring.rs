// Closed-form mobility-ring boundaries for κ = 1 and κ = 2.
//
// Run with `cargo run --release --example mobility_ring`.

use ssh_mosaic::rings::{compare_quartic_forms, k2_coefficients, ring_k1_radius};
use ssh_mosaic::*;

fn extent(component: &[Complex64]) -> String {
    let (lo, hi) = component
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)));
    format!("real-axis crossings in [{lo:.4}, {hi:.4}]")
}

fn main() -> Result<()> {
    // κ = 1: a circle of radius vw/(λe^h), centred on δ.
    for (h, delta) in [(0.0, Complex64::new(0.0, 0.0)), (1.0, Complex64::new(0.0, 0.0)), (1.0, Complex64::new(1.0, 1.0))] {
        let p = ModelParams { h, delta, ..Default::default() };
        let ring = ring_k1(&p, 512)?;
        println!(
            "κ = 1, h = {h}, δ = {delta}: radius {:.5}, {} component",
            ring_k1_radius(&p).unwrap(),
            count_components(&ring)
        );
    }

    // κ = 2: up to three loops from |z|·|z² − (v² + w²)| = v²w²e^{−h}/λ.
    let p = ModelParams { kappa: 2, h: 1.0, ..Default::default() };
    let curve = ring_k2(&p, 2048)?;
    println!("κ = 2, w/v = 1, h = 1: {} components", count_components(&curve));
    for (k, c) in curve.components.iter().enumerate() {
        println!("  component {k}: {} points, {}", c.len(), extent(c));
    }
    let cmp = compare_quartic_forms(&curve);
    println!(
        "  boundary residuals on the traced curve: factored {:.1e}, expanded quartic {:.1e}, commonly printed quartic {:.1e}",
        cmp.max_factored_residual, cmp.max_expanded_residual, cmp.max_printed_residual
    );

    // Loops merge when c crosses the saddle value 2a^{3/2}/(3√3).
    for h in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let q = ModelParams { h, ..p };
        let (a, c) = k2_coefficients(&q);
        let saddle = 2.0 * a.powf(1.5) / (3.0 * 3f64.sqrt());
        println!("  h = {h}: c = {c:.4} (saddle {saddle:.4}), {} components", count_components(&ring_k2(&q, 1024)?));
    }

    // w/v = 1.9: count all boundary loops, and only the loops holding eigenvalues.
    let q = ModelParams { kappa: 2, w: 1.9, h: 1.0, num_cells: 610, ..Default::default() };
    let curve = ring_k2(&q, 2048)?;
    let spectrum = solve(&q)?;
    println!(
        "κ = 2, w/v = 1.9, h = 1: {} components, {} holding eigenvalues (inside or within 0.02)",
        count_components(&curve),
        count_populated_components(&curve, &spectrum.eigenvalues, 0.02)
    );
    Ok(())
}
