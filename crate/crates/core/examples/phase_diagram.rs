// Checkpointed sweep over w/v, rendered as a Γ heatmap over (w/v, Re E)
// with the Hermitian mobility-edge lines E = ±vw/λ, plus a complex-plane
// slice with the ring |E| = 2/e.
//
// Run with `cargo run --release --example phase_diagram`.
// Output files go to <temp dir>/ssh-mosaic-examples.
// A second run reuses the checkpoints.

use ssh_mosaic::io::{sweep_csv, write_text};
use ssh_mosaic::plot::{scatter_svg, Overlay, PlotSpec, ScatterPoint};
use ssh_mosaic::*;

fn main() -> Result<()> {
    let out = std::env::temp_dir().join("ssh-mosaic-examples");
    let checkpoints = out.join("phase_diagram_checkpoints");
    let options = SweepOptions { checkpoint_dir: Some(checkpoints.clone()), ..Default::default() };

    // Hermitian sweep: localized states appear beyond |E| = 2 w/v.
    let base = ModelParams { num_cells: 144, ..Default::default() };
    let grid = SweepGrid::linspace(SweepParameter::WOverV, 0.05, 2.0, 40, base)?;
    let sweep = run_sweep(&grid, &options)?;
    println!(
        "w/v sweep: {} records, {} values resumed from {}",
        sweep.records.len(),
        sweep.resumed.len(),
        checkpoints.display()
    );
    let beyond: Vec<&SweepRecord> = sweep.records.iter().filter(|r| r.re_e.abs() > 2.0 * r.param_value + 0.05).collect();
    let localized = beyond.iter().filter(|r| r.gamma_fractal < 0.3).count();
    println!("  {} of {} states beyond the edge lines have Γ < 0.3", localized, beyond.len());

    let points: Vec<ScatterPoint> =
        sweep.records.iter().map(|r| ScatterPoint { x: r.param_value, y: r.re_e, value: r.gamma_fractal }).collect();
    let lines = [1.0, -1.0].map(|s| Overlay::curve(vec![(0.0, 0.0), (2.0, 4.0 * s)], false));
    let spec = PlotSpec { x_label: "w/v".into(), y_label: "Re E".into(), ..Default::default() };
    write_text(&out.join("phase_diagram.svg"), &scatter_svg(&points, &lines, &spec))?;
    write_text(&out.join("phase_diagram.csv"), &sweep_csv(&sweep.records))?;

    // Non-Hermitian slice at w/v = 1, h = 1.
    let grid = SweepGrid::new(SweepParameter::WOverV, vec![1.0], ModelParams { h: 1.0, ..base })?;
    let sweep = run_sweep(&grid, &SweepOptions::default())?;
    let slice = slice_complex_plane(&sweep.records, 1.0)?;
    let points: Vec<ScatterPoint> = slice.iter().map(|&(x, y, value)| ScatterPoint { x, y, value }).collect();
    let r = 2.0 / std::f64::consts::E;
    let circle = Overlay::curve(
        (0..256)
            .map(|k| {
                let phi = std::f64::consts::TAU * k as f64 / 256.0;
                (r * phi.cos(), r * phi.sin())
            })
            .collect(),
        true,
    );
    write_text(&out.join("ring_slice.svg"), &scatter_svg(&points, &[circle], &PlotSpec::default()))?;
    println!("wrote phase_diagram.svg, phase_diagram.csv and ring_slice.svg to {}", out.display());
    Ok(())
}
