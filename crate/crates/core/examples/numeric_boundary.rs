// Numeric mobility boundary for κ = 3, where no closed form is available:
// contour the asymptotic Lyapunov field at level ε on a complex-energy grid
// and write the curve as CSV plus an SVG overlaid on the spectrum.
//
// Run with `cargo run --release --example numeric_boundary`.
// Output files go to <temp dir>/ssh-mosaic-examples.

use ssh_mosaic::io::{ring_csv, write_text};
use ssh_mosaic::localization::diagnose;
use ssh_mosaic::lyapunov::asymptotic_settings;
use ssh_mosaic::plot::{scatter_svg, Overlay, PlotSpec, ScatterPoint};
use ssh_mosaic::rings::{hausdorff_distance, DEFAULT_EPSILON};
use ssh_mosaic::*;

fn main() -> Result<()> {
    let out = std::env::temp_dir().join("ssh-mosaic-examples");
    let settings = asymptotic_settings();

    // Cross-check against the closed form for κ = 2 on a coarse grid first.
    let k2 = ModelParams { kappa: 2, h: 1.0, ..Default::default() };
    let grid = ComplexGrid::with_spacing((-2.0, 2.0), (-1.0, 1.0), 0.02)?;
    let nb = numeric_boundary(&k2, &grid, &settings, DEFAULT_EPSILON)?;
    let d = hausdorff_distance(&nb.curve.components, &ring_k2(&k2, 2048)?.components);
    println!("κ = 2: numeric {} components, Hausdorff distance to the closed form {d:.3e}", count_components(&nb.curve));

    let k3 = ModelParams { kappa: 3, h: 1.0, num_cells: 300, ..Default::default() };
    let grid = ComplexGrid::with_spacing((-2.5, 2.5), (-1.5, 1.5), 0.02)?;
    let nb = numeric_boundary(&k3, &grid, &settings, DEFAULT_EPSILON)?;
    println!(
        "κ = 3: {} closed components, {} pieces leave the grid, {} failed nodes",
        count_components(&nb.curve),
        nb.open_pieces.len(),
        nb.field.failures.len()
    );

    let spectrum = solve(&k3)?;
    let points: Vec<ScatterPoint> = diagnose(&spectrum)?
        .iter()
        .map(|d| ScatterPoint { x: d.eigenvalue.re, y: d.eigenvalue.im, value: d.gamma_fractal })
        .collect();
    let overlays: Vec<Overlay> = nb
        .curve
        .components
        .iter()
        .map(|c| Overlay::curve(c.iter().map(|z| (z.re, z.im)).collect(), true))
        .collect();
    let spec = PlotSpec { title: "κ = 3, h = 1: Γ with numeric boundary".into(), ..Default::default() };
    let csv = out.join("ring_k3.csv");
    let svg = out.join("ring_k3.svg");
    write_text(&csv, &ring_csv(&nb.curve))?;
    write_text(&svg, &scatter_svg(&points, &overlays, &spec))?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
