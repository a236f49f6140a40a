// Build a small chain and print its Hamiltonian and on-site potential.
//
// Run with `cargo run --example hamiltonian`.

use ssh_mosaic::model::modulated_cells;
use ssh_mosaic::*;

fn main() -> Result<()> {
    // Two cells, open boundary: the smallest chain that shows both hoppings.
    let params = ModelParams { num_cells: 2, w: 0.5, boundary: Boundary::Open, ..Default::default() };
    let h = build_hamiltonian(&params)?;
    println!("H for {} sites (v = {}, w = {}, λ = {}, open):", params.num_sites(), params.v, params.w, params.lambda);
    for i in 0..h.nrows() {
        let row: Vec<String> = (0..h.ncols()).map(|j| format!("{:>8.5}", h[(i, j)].re)).collect();
        println!("  [{}]", row.join(" "));
    }

    // The non-Hermitian phase enters through cos(x + ih).
    for h_phase in [0.0, 1.0] {
        let p = ModelParams { h: h_phase, ..Default::default() };
        let z = potential_at(&p, 1, Sublattice::B)?;
        println!("V(cell 1, B) at h = {h_phase}: {:.5} {:+.5}i", z.re, z.im);
    }

    // Mosaic modulation: only every κ-th cell carries the quasiperiodic term.
    for kappa in 1..=3 {
        let p = ModelParams { kappa, ..Default::default() };
        let first: Vec<String> = (1..=6)
            .map(|cell| {
                let z = potential_at(&p, cell, Sublattice::B).unwrap();
                format!("{:+.3}", z.re)
            })
            .collect();
        println!(
            "κ = {kappa}: {} of {} cells modulated; B-site potential of cells 1..6: {}",
            modulated_cells(&p),
            p.num_cells,
            first.join(" ")
        );
    }

    // Periodic wrap adds exactly the bond H[L−1, 0] = H[0, L−1] = w.
    let periodic = build_hamiltonian(&ModelParams { boundary: Boundary::Periodic, ..params })?;
    let n = periodic.nrows();
    println!("periodic wrap: H[{}, 0] = {}", n - 1, periodic[(n - 1, 0)].re);
    Ok(())
}
