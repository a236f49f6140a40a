// Transfer-matrix Lyapunov exponents next to their closed forms.
//
// The closed forms hold on the spectrum. Away from it the finite-N exponent
// can differ (e.g. at E = 2e with h = 0); the asymptotic field, evaluated at a
// large lifted phase and shifted back, follows the closed form everywhere and
// is what the numeric ring boundary contours.
//
// Run with `cargo run --release --example lyapunov`.

use ssh_mosaic::lyapunov::{asymptotic_settings, DEFAULT_LIFT};
use ssh_mosaic::*;

fn main() -> Result<()> {
    let settings = TransferSettings { num_quasicells: 10_000, theta_samples: 32, ..Default::default() };
    let e = std::f64::consts::E;

    println!("κ = 1, v = w = 1, λ = 0.5");
    println!("{:>8} {:>16} {:>10} {:>10} {:>10}", "h", "E", "finite", "asympt.", "closed");
    let cases = [
        (0.0, Complex64::new(2.0 * e, 0.0)),
        (0.0, Complex64::new(2.0, 0.0)),
        (1.0, Complex64::new(0.5, 0.0)),
        (1.0, Complex64::new(1.2, 0.4)),
    ];
    for (h, energy) in cases {
        let params = ModelParams { h, ..Default::default() };
        let finite = finite_le(&params, energy, &settings)?;
        let asym = asymptotic_le(&params, energy, &asymptotic_settings(), DEFAULT_LIFT)?;
        let closed = analytic_le(&params, energy)?;
        println!(
            "{h:>8} {:>16} {:>10.4} {:>10.4} {closed:>10.4}",
            format!("{:.3}{:+.3}i", energy.re, energy.im),
            finite.gamma,
            asym
        );
    }

    // On the spectrum the finite exponent matches the closed form.
    for kappa in [1, 2] {
        let params = ModelParams { kappa, h: 1.0, num_cells: 144, ..Default::default() };
        let spectrum = solve(&params)?;
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for &energy in spectrum.eigenvalues.iter().step_by(7) {
            let closed = analytic_le(&params, energy)?;
            if closed < 0.2 {
                continue;
            }
            let finite = finite_le(&params, energy, &settings)?;
            worst = worst.max((finite.gamma - closed).abs());
            checked += 1;
        }
        println!("κ = {kappa}, h = 1: {checked} localized eigenvalues, max |finite − closed| = {worst:.2e}");
    }

    // κ = 3 has no closed form here, but the numeric exponent is always available.
    let k3 = ModelParams { kappa: 3, h: 1.0, ..Default::default() };
    let g = finite_le(&k3, Complex64::new(2.0, 0.5), &settings)?;
    println!("κ = 3, E = 2+0.5i: γ = {:.4} (closed form: {})", g.gamma, analytic_le(&k3, g.energy).is_ok());
    Ok(())
}
