use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ssh_mosaic::eigen::{eigendecompose_with_tol, DEFAULT_TOL};
use ssh_mosaic::io::{
    apply_setting, dump_config, le_csv, load_config, parse_ring_csv, parse_sweep_csv, profile_csv, read_text,
    ring_csv, spectrum_csv, sweep_csv, write_metadata, write_text, Metadata,
};
use ssh_mosaic::localization::diagnose;
use ssh_mosaic::lyapunov::{asymptotic_settings, DEFAULT_LIFT};
use ssh_mosaic::plot::{scatter_svg, Overlay, PlotSpec, ScatterPoint};
use ssh_mosaic::rings::{numeric_boundary_with_field, DEFAULT_EPSILON, DEFAULT_RESOLUTION};
use ssh_mosaic::sweep::{SweepMetadata, SweepOutput};
use ssh_mosaic::*;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ssh-mosaic", version, about = "Non-Hermitian SSH chain with a mosaic quasiperiodic potential")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct Global {
    /// Key-value configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; a JSON metadata sidecar is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and LE grids (0 = all cores).
    #[arg(long, global = true, env = "SSH_MOSAIC_THREADS")]
    threads: Option<usize>,
    /// Print the effective merged configuration and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    #[arg(long, global = true, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// A number, `golden`, or `fib:N`.
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long = "delta_re", alias = "delta-re", global = true, allow_hyphen_values = true)]
    delta_re: Option<String>,
    #[arg(long = "delta_im", alias = "delta-im", global = true, allow_hyphen_values = true)]
    delta_im: Option<String>,
    #[arg(long, global = true)]
    kappa: Option<String>,
    #[arg(long = "num_cells", alias = "num-cells", global = true)]
    num_cells: Option<String>,
    /// `periodic` or `open`.
    #[arg(long, global = true)]
    boundary: Option<String>,
}

impl Global {
    fn overrides(&self) -> [(&'static str, &Option<String>); 11] {
        [
            ("v", &self.v),
            ("w", &self.w),
            ("lambda", &self.lambda),
            ("alpha", &self.alpha),
            ("theta", &self.theta),
            ("h", &self.h),
            ("delta_re", &self.delta_re),
            ("delta_im", &self.delta_im),
            ("kappa", &self.kappa),
            ("num_cells", &self.num_cells),
            ("boundary", &self.boundary),
        ]
    }

    fn params(&self) -> Result<ModelParams> {
        let mut params = match &self.config {
            Some(path) => load_config(path)?,
            None => ModelParams::default(),
        };
        for (key, value) in self.overrides() {
            if let Some(value) = value {
                apply_setting(&mut params, key, value)?;
            }
        }
        Ok(params)
    }

    fn out_or(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full spectrum with fractal dimension, IPR and residual per eigenpair.
    Spectrum {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Spatial profile |ψ_n|² of one eigenstate (lexicographic index).
    State {
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Lyapunov exponents at listed energies or over a complex grid.
    Le(LeArgs),
    /// Mobility-ring boundary curve.
    Ring(RingArgs),
    /// Parameter sweep of (E, Γ) records.
    Sweep(SweepArgs),
    /// SVG rendering of sweep and ring CSV files.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    re_max: f64,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    im_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    im_max: f64,
    #[arg(long, default_value_t = 0.01)]
    spacing: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<ComplexGrid> {
        ComplexGrid::with_spacing((self.re_min, self.re_max), (self.im_min, self.im_max), self.spacing)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    Frobenius,
    Spectral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FieldArg {
    Direct,
    Asymptotic,
}

#[derive(Args, Debug)]
struct LeArgs {
    /// Energy `re` or `re,im`; repeatable. Without energies a grid is used.
    #[arg(long = "energy", allow_hyphen_values = true)]
    energies: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Quasicells per θ sample (default 10000 direct, 256 asymptotic).
    #[arg(long = "n")]
    num_quasicells: Option<usize>,
    #[arg(long)]
    theta_samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    rescale_every: usize,
    #[arg(long, value_enum, default_value_t = NormArg::Frobenius)]
    norm: NormArg,
    /// Exponent to evaluate: `direct` (default for listed energies) or
    /// `asymptotic` (default for grids).
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    #[arg(long, default_value_t = DEFAULT_LIFT)]
    lift: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RingMethodArg {
    Auto,
    K1,
    K2,
    Numeric,
}

#[derive(Args, Debug)]
struct RingArgs {
    #[arg(long, value_enum, default_value_t = RingMethodArg::Auto)]
    method: RingMethodArg,
    /// Angular samples for the closed-form curves.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    /// Contour level for the numeric boundary.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Also diagonalize and report how many components hold eigenvalues.
    #[arg(long)]
    count_populated: bool,
    /// A loop also counts as populated when an eigenvalue lies this close to it.
    #[arg(long, default_value_t = 0.02)]
    populated_tol: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// w_over_v, h, lambda, theta, delta_re or delta_im.
    #[arg(long, default_value = "w_over_v")]
    param: String,
    /// Explicit strictly increasing values (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, default_value_t = 201)]
    count: usize,
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Sweep CSV: (param, Re E) heatmap, or a complex-plane slice with --slice.
    #[arg(long)]
    sweep: Option<PathBuf>,
    /// Ring CSV files drawn as dashed overlays.
    #[arg(long)]
    ring: Vec<PathBuf>,
    /// Parameter value whose complex-plane spectrum is drawn.
    #[arg(long, allow_hyphen_values = true)]
    slice: Option<f64>,
    /// Dashed circle |E| = R overlay; repeatable.
    #[arg(long)]
    circle: Vec<f64>,
    /// Dashed lines E = ±s·x overlay on heatmaps; repeatable.
    #[arg(long)]
    lines: Vec<f64>,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long)]
    x_label: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() {
                EXIT_NUMERIC
            } else if e.is_io() {
                EXIT_IO
            } else {
                EXIT_VALIDATION
            })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let params = cli.global.params()?;
    if cli.global.dump_config {
        print!("{}", dump_config(&params));
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(Error::InvalidInput("no subcommand given (try --help)".into()));
    };
    let threads = cli.global.threads.unwrap_or(0);
    if threads > 0 {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let g = &cli.global;
    match command {
        Command::Spectrum { tol } => cmd_spectrum(&params, tol, &g.out_or("spectrum.csv")),
        Command::State { index, tol } => cmd_state(&params, index, tol, &g.out_or("state.csv")),
        Command::Le(args) => cmd_le(&params, &args, &g.out_or("le.csv")),
        Command::Ring(args) => cmd_ring(&params, &args, &g.out_or("ring.csv")),
        Command::Sweep(args) => cmd_sweep(&params, &args, threads, &g.out_or("sweep.csv")),
        Command::Plot(args) => cmd_plot(&params, &args, &g.out_or("plot.svg")),
    }
}

fn finish(out: &Path, contents: &str, meta: Metadata) -> Result<()> {
    write_text(out, contents)?;
    let sidecar = write_metadata(out, &meta)?;
    eprintln!("wrote {} and {}", out.display(), sidecar.display());
    Ok(())
}

fn cmd_spectrum(params: &ModelParams, tol: f64, out: &Path) -> Result<()> {
    params.validate()?;
    let spectrum = eigendecompose_with_tol(&build_hamiltonian(params)?, tol)?;
    let diagnostics = diagnose(&spectrum)?;
    let meta = Metadata::new("spectrum", params, json!({ "tol": tol, "max_residual": spectrum.max_residual() }));
    finish(out, &spectrum_csv(&spectrum, &diagnostics), meta)
}

fn cmd_state(params: &ModelParams, index: usize, tol: f64, out: &Path) -> Result<()> {
    params.validate()?;
    let spectrum = eigendecompose_with_tol(&build_hamiltonian(params)?, tol)?;
    let profile = spatial_profile(&spectrum, index)?;
    let psi = &spectrum.eigenvectors[index];
    let gamma = fractal_dimension(psi, params.num_sites())?;
    let e = spectrum.eigenvalues[index];
    eprintln!("state {index}: E = {} {:+}i, Γ = {gamma:.6}", e.re, e.im);
    let meta = Metadata::new(
        "state",
        params,
        json!({ "index": index, "tol": tol, "re_E": e.re, "im_E": e.im, "gamma": gamma }),
    );
    finish(out, &profile_csv(&profile), meta)
}

fn parse_energy(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidInput(format!("energy `{s}`: expected `re` or `re,im`"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn cmd_le(params: &ModelParams, args: &LeArgs, out: &Path) -> Result<()> {
    let norm = match args.norm {
        NormArg::Frobenius => MatrixNorm::Frobenius,
        NormArg::Spectral => MatrixNorm::Spectral,
    };
    let mut rows = vec![];
    let settings;
    let mode;
    if args.energies.is_empty() {
        let field_arg = args.field.unwrap_or(FieldArg::Asymptotic);
        let base = match field_arg {
            FieldArg::Direct => TransferSettings::default(),
            FieldArg::Asymptotic => asymptotic_settings(),
        };
        settings = TransferSettings {
            num_quasicells: args.num_quasicells.unwrap_or(base.num_quasicells),
            theta_samples: args.theta_samples.unwrap_or(base.theta_samples),
            rescale_every: args.rescale_every,
            norm,
        };
        let field = match field_arg {
            FieldArg::Direct => LeField::Direct,
            FieldArg::Asymptotic => LeField::Asymptotic { lift: args.lift },
        };
        let grid = args.grid.grid()?;
        let le = le_grid(params, &grid, &settings, field)?;
        if !le.failures.is_empty() {
            eprintln!("warning: {} grid nodes failed and are reported as NaN", le.failures.len());
        }
        for j in 0..grid.n_im {
            for i in 0..grid.n_re {
                let energy = grid.node(i, j);
                let result = LeResult { energy, gamma: le.value(i, j), per_theta: vec![] };
                rows.push((result, analytic_le(params, energy).ok()));
            }
        }
        mode = json!({ "grid": grid, "field": field });
    } else {
        let field_arg = args.field.unwrap_or(FieldArg::Direct);
        let base = match field_arg {
            FieldArg::Direct => TransferSettings::default(),
            FieldArg::Asymptotic => asymptotic_settings(),
        };
        settings = TransferSettings {
            num_quasicells: args.num_quasicells.unwrap_or(base.num_quasicells),
            theta_samples: args.theta_samples.unwrap_or(base.theta_samples),
            rescale_every: args.rescale_every,
            norm,
        };
        for s in &args.energies {
            let energy = parse_energy(s)?;
            let result = match field_arg {
                FieldArg::Direct => finite_le(params, energy, &settings)?,
                FieldArg::Asymptotic => LeResult {
                    energy,
                    gamma: asymptotic_le(params, energy, &settings, args.lift)?,
                    per_theta: vec![],
                },
            };
            rows.push((result, analytic_le(params, energy).ok()));
        }
        let field = format!("{field_arg:?}").to_lowercase();
        mode = json!({ "energies": args.energies, "field": field, "lift": args.lift });
    }
    let meta = Metadata::new("le", params, json!({ "settings": settings, "mode": mode }));
    finish(out, &le_csv(&rows), meta)
}

fn cmd_ring(params: &ModelParams, args: &RingArgs, out: &Path) -> Result<()> {
    params.validate()?;
    let method = match (args.method, params.kappa) {
        (RingMethodArg::Auto, 1) | (RingMethodArg::K1, _) => RingMethodArg::K1,
        (RingMethodArg::Auto, 2) | (RingMethodArg::K2, _) => RingMethodArg::K2,
        _ => RingMethodArg::Numeric,
    };
    let mut settings = json!({ "method": format!("{method:?}").to_lowercase(), "resolution": args.resolution });
    let curve = match method {
        RingMethodArg::K1 => {
            if params.kappa != 1 {
                return Err(Error::Unsupported("the k1 closed form needs kappa = 1".into()));
            }
            ring_k1(params, args.resolution)?
        }
        RingMethodArg::K2 => {
            if params.kappa != 2 {
                return Err(Error::Unsupported("the k2 closed form needs kappa = 2".into()));
            }
            ring_k2(params, args.resolution)?
        }
        _ => {
            let grid = args.grid.grid()?;
            let nb = numeric_boundary_with_field(params, &grid, &asymptotic_settings(), args.epsilon, LeField::default())?;
            if nb.touches_edge() {
                eprintln!("warning: {} boundary pieces leave the grid; enlarge it", nb.open_pieces.len());
            }
            settings["grid"] = json!(grid);
            settings["epsilon"] = json!(args.epsilon);
            settings["open_pieces"] = json!(nb.open_pieces.len());
            nb.curve
        }
    };
    let total = count_components(&curve);
    settings["components"] = json!(total);
    eprintln!("{total} boundary component(s)");
    if args.count_populated {
        let spectrum = solve(params)?;
        let populated = count_populated_components(&curve, &spectrum.eigenvalues, args.populated_tol);
        eprintln!("{populated} component(s) populated by eigenvalues within {}", args.populated_tol);
        settings["populated_components"] = json!(populated);
        settings["populated_tol"] = json!(args.populated_tol);
    }
    finish(out, &ring_csv(&curve), Metadata::new("ring", params, settings))
}

fn cmd_sweep(params: &ModelParams, args: &SweepArgs, threads: usize, out: &Path) -> Result<()> {
    let parameter: SweepParameter = args.param.parse()?;
    let grid = if args.values.is_empty() {
        SweepGrid::linspace(parameter, args.from, args.to, args.count, *params)?
    } else {
        SweepGrid::new(parameter, args.values.clone(), *params)?
    };
    let options = SweepOptions { threads, checkpoint_dir: args.checkpoint_dir.clone(), tol: args.tol };
    let output: SweepOutput = run_sweep(&grid, &options)?;
    for f in &output.failures {
        eprintln!("warning: value {} failed: {}", f.param_value, f.message);
    }
    if !output.resumed.is_empty() {
        eprintln!("resumed {} value(s) from checkpoints", output.resumed.len());
    }
    let meta = Metadata::new("sweep", params, serde_json::to_value(SweepMetadata::new(&grid, &options, &output))?);
    finish(out, &sweep_csv(&output.records), meta)
}

fn cmd_plot(_params: &ModelParams, args: &PlotArgs, out: &Path) -> Result<()> {
    let mut points = vec![];
    let mut overlays = vec![];
    let mut spec = PlotSpec { title: args.title.clone(), ..Default::default() };
    let heatmap = args.sweep.is_some() && args.slice.is_none();

    if let Some(path) = &args.sweep {
        let records = parse_sweep_csv(&read_text(path)?, &path.display().to_string())?;
        match args.slice {
            Some(value) => {
                for (re, im, gamma) in slice_complex_plane(&records, value)? {
                    points.push(ScatterPoint { x: re, y: im, value: gamma });
                }
            }
            None => {
                spec.x_label = "parameter".into();
                spec.y_label = "Re E".into();
                points.extend(records.iter().map(|r| ScatterPoint { x: r.param_value, y: r.re_e, value: r.gamma_fractal }));
            }
        }
    }
    if let Some(label) = &args.x_label {
        spec.x_label = label.clone();
    }
    for path in &args.ring {
        for component in parse_ring_csv(&read_text(path)?, &path.display().to_string())? {
            overlays.push(Overlay::curve(component.iter().map(|z| (z.re, z.im)).collect(), true));
        }
    }
    for &r in &args.circle {
        let n = 256;
        let pts = (0..n)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                (r * phi.cos(), r * phi.sin())
            })
            .collect();
        overlays.push(Overlay::curve(pts, true));
    }
    if !args.lines.is_empty() {
        let (x0, x1) = if heatmap && !points.is_empty() {
            points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)))
        } else {
            (0.0, 2.0)
        };
        for &s in &args.lines {
            for sign in [1.0, -1.0] {
                overlays.push(Overlay::curve(vec![(x0, sign * s * x0), (x1, sign * s * x1)], false));
            }
        }
    }
    let svg = scatter_svg(&points, &overlays, &spec);
    let inputs: Vec<String> =
        args.sweep.iter().chain(&args.ring).map(|p| p.display().to_string()).collect();
    write_text(out, &svg)?;
    let meta = json!({
        "tool": "ssh-mosaic",
        "version": VERSION,
        "command": "plot",
        "inputs": inputs,
        "slice": args.slice,
        "circle": args.circle,
        "lines": args.lines,
        "points": points.len(),
        "overlays": overlays.len(),
    });
    let sidecar = ssh_mosaic::io::sidecar_path(out);
    write_text(&sidecar, &(serde_json::to_string_pretty(&meta)? + "\n"))?;
    eprintln!("wrote {} and {}", out.display(), sidecar.display());
    Ok(())
}
