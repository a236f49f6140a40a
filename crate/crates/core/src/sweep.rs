//! Parameter sweeps: one full diagonalization per parameter value, reduced to
//! (value, E, Γ) records.
//!
//! Values run on a rayon pool of configurable width and are merged in grid
//! order, so the record stream does not depend on scheduling. With a
//! checkpoint directory each finished value is stored as its own CSV file,
//! named by a hash of the parameters, and reused on the next run.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::eigen::{eigendecompose_with_tol, DEFAULT_TOL};
use crate::io::{parse_sweep_csv, sweep_csv};
use crate::localization::fractal_dimension;
use crate::model::{build_hamiltonian, ModelParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// w = value · v with v held fixed.
    WOverV,
    H,
    Lambda,
    Theta,
    DeltaRe,
    DeltaIm,
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "w_over_v" | "w/v" | "ratio" => SweepParameter::WOverV,
            "h" => SweepParameter::H,
            "lambda" => SweepParameter::Lambda,
            "theta" => SweepParameter::Theta,
            "delta_re" => SweepParameter::DeltaRe,
            "delta_im" => SweepParameter::DeltaIm,
            other => return Err(Error::param("param", format!("unknown sweep parameter `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: ModelParams,
}

impl SweepGrid {
    pub fn new(parameter: SweepParameter, values: Vec<f64>, base: ModelParams) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("values", "sweep needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("values", "must be finite"));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("values", "must be strictly increasing"));
        }
        base.validate()?;
        Ok(SweepGrid { parameter, values, base })
    }

    /// `count` evenly spaced values in [from, to].
    pub fn linspace(parameter: SweepParameter, from: f64, to: f64, count: usize, base: ModelParams) -> Result<Self> {
        let values = match count {
            0 => vec![],
            1 => vec![from],
            _ => (0..count).map(|k| from + (to - from) * k as f64 / (count - 1) as f64).collect(),
        };
        Self::new(parameter, values, base)
    }

    pub fn params_at(&self, value: f64) -> ModelParams {
        let mut p = self.base;
        match self.parameter {
            SweepParameter::WOverV => p.w = value * p.v,
            SweepParameter::H => p.h = value,
            SweepParameter::Lambda => p.lambda = value,
            SweepParameter::Theta => p.theta = value,
            SweepParameter::DeltaRe => p.delta.re = value,
            SweepParameter::DeltaIm => p.delta.im = value,
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub param_value: f64,
    pub eigen_index: usize,
    pub re_e: f64,
    pub im_e: f64,
    pub gamma_fractal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub param_value: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Worker count; 0 uses rayon's default.
    pub threads: usize,
    pub checkpoint_dir: Option<PathBuf>,
    pub tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { threads: 0, checkpoint_dir: None, tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<SweepFailure>,
    /// Parameter values loaded from checkpoints instead of recomputed.
    pub resumed: Vec<f64>,
}

/// Records for a single parameter set, in spectrum order.
pub fn spectrum_records(params: &ModelParams, value: f64, tol: f64) -> Result<Vec<SweepRecord>> {
    let h = build_hamiltonian(params)?;
    let spectrum = eigendecompose_with_tol(&h, tol)?;
    let n = params.num_sites();
    spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvectors)
        .enumerate()
        .map(|(k, (e, psi))| {
            Ok(SweepRecord {
                param_value: value,
                eigen_index: k,
                re_e: e.re,
                im_e: e.im,
                gamma_fractal: fractal_dimension(psi, n)?,
            })
        })
        .collect()
}

/// Checkpoint file name: SHA-256 over the serialized parameters, the swept
/// value's bit pattern and the tolerance.
pub fn checkpoint_name(params: &ModelParams, value: f64, tol: f64) -> Result<String> {
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_vec(params)?);
    hasher.update(value.to_bits().to_le_bytes());
    hasher.update(tol.to_bits().to_le_bytes());
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("{hex}.csv"))
}

enum PointOutcome {
    Computed(Vec<SweepRecord>),
    Resumed(Vec<SweepRecord>),
    Failed(String),
}

fn run_point(grid: &SweepGrid, value: f64, options: &SweepOptions) -> Result<PointOutcome> {
    let params = grid.params_at(value);
    let checkpoint = match &options.checkpoint_dir {
        Some(dir) => Some(dir.join(checkpoint_name(&params, value, options.tol)?)),
        None => None,
    };
    if let Some(path) = checkpoint.as_deref().filter(|p| p.exists()) {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        return Ok(PointOutcome::Resumed(parse_sweep_csv(&text, &path.display().to_string())?));
    }
    let records = match spectrum_records(&params, value, options.tol) {
        Ok(r) => r,
        Err(e) => return Ok(PointOutcome::Failed(e.to_string())),
    };
    if let Some(path) = checkpoint {
        write_atomically(&path, &sweep_csv(&records))?;
    }
    Ok(PointOutcome::Computed(records))
}

fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("csv.partial");
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Run every grid value. Per-value solver failures are recorded and the
/// sweep continues; I/O failures on checkpoints abort it.
pub fn run_sweep(grid: &SweepGrid, options: &SweepOptions) -> Result<SweepOutput> {
    if let Some(dir) = &options.checkpoint_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<PointOutcome>> =
        pool.install(|| grid.values.par_iter().map(|&v| run_point(grid, v, options)).collect());

    let mut out = SweepOutput::default();
    for (&value, outcome) in grid.values.iter().zip(outcomes) {
        match outcome? {
            PointOutcome::Computed(records) => out.records.extend(records),
            PointOutcome::Resumed(records) => {
                out.resumed.push(value);
                out.records.extend(records);
            }
            PointOutcome::Failed(message) => out.failures.push(SweepFailure { param_value: value, message }),
        }
    }
    Ok(out)
}

/// (Re E, Im E, Γ) for one parameter value.
pub fn slice_complex_plane(records: &[SweepRecord], param_value: f64) -> Result<Vec<(f64, f64, f64)>> {
    let tol = 1e-12 * param_value.abs().max(1.0);
    let slice: Vec<_> = records
        .iter()
        .filter(|r| (r.param_value - param_value).abs() <= tol)
        .map(|r| (r.re_e, r.im_e, r.gamma_fractal))
        .collect();
    if slice.is_empty() {
        return Err(Error::Lookup(format!("no records for parameter value {param_value}")));
    }
    Ok(slice)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub grid: SweepGrid,
    pub convention: String,
    pub tol: f64,
    pub failures: Vec<SweepFailure>,
}

impl SweepMetadata {
    pub fn new(grid: &SweepGrid, options: &SweepOptions, output: &SweepOutput) -> Self {
        let convention = match grid.parameter {
            SweepParameter::WOverV => format!("v fixed at {}, w = value * v", grid.base.v),
            other => format!("{other:?} set to value; all other parameters from base"),
        };
        SweepMetadata { grid: grid.clone(), convention, tol: options.tol, failures: output.failures.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve;
    use crate::localization::diagnose;

    fn small() -> ModelParams {
        ModelParams { num_cells: 55, ..Default::default() }
    }

    #[test]
    fn grid_validation() {
        assert!(SweepGrid::new(SweepParameter::WOverV, vec![], small()).is_err());
        assert!(SweepGrid::new(SweepParameter::WOverV, vec![0.5, 0.5], small()).is_err());
        assert!(SweepGrid::new(SweepParameter::WOverV, vec![0.5, 0.4], small()).is_err());
        let g = SweepGrid::linspace(SweepParameter::WOverV, 0.0, 2.0, 201, small()).unwrap();
        assert_eq!(g.values.len(), 201);
        assert_eq!(g.values[100], 1.0);
        let p = g.params_at(0.7);
        assert_eq!((p.v, p.w), (1.0, 0.7));
    }

    #[test]
    fn single_value_matches_direct_computation() {
        let base = ModelParams { h: 1.0, w: 0.8, ..small() };
        let grid = SweepGrid::new(SweepParameter::WOverV, vec![0.8], base).unwrap();
        let out = run_sweep(&grid, &SweepOptions::default()).unwrap();
        let spectrum = solve(&base).unwrap();
        let diags = diagnose(&spectrum).unwrap();
        assert_eq!(out.records.len(), base.num_sites());
        for (r, d) in out.records.iter().zip(&diags) {
            assert_eq!((r.re_e, r.im_e), (d.eigenvalue.re, d.eigenvalue.im));
            assert_eq!(r.gamma_fractal, d.gamma_fractal);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let grid = SweepGrid::linspace(SweepParameter::WOverV, 0.2, 1.4, 5, ModelParams { h: 0.5, ..small() }).unwrap();
        let one = run_sweep(&grid, &SweepOptions { threads: 1, ..Default::default() }).unwrap();
        let four = run_sweep(&grid, &SweepOptions { threads: 4, ..Default::default() }).unwrap();
        assert_eq!(one.records, four.records);
        assert_eq!(one.records.len(), 5 * 110);
        assert!(one.records.iter().all(|r| (0.0..=1.0).contains(&r.gamma_fractal)));
    }

    #[test]
    fn checkpoint_resume_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let grid = SweepGrid::linspace(SweepParameter::H, 0.0, 1.0, 3, ModelParams { kappa: 2, ..small() }).unwrap();
        let options = SweepOptions { checkpoint_dir: Some(dir.path().to_path_buf()), ..Default::default() };

        // Simulate an interrupted run: only the first value is done.
        let partial = SweepGrid::new(SweepParameter::H, vec![0.0], grid.base).unwrap();
        run_sweep(&partial, &options).unwrap();

        let resumed = run_sweep(&grid, &options).unwrap();
        assert_eq!(resumed.resumed, vec![0.0]);
        let fresh = run_sweep(&grid, &SweepOptions::default()).unwrap();
        assert_eq!(resumed.records, fresh.records);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);

        let again = run_sweep(&grid, &options).unwrap();
        assert_eq!(again.resumed.len(), 3);
        assert_eq!(again.records, fresh.records);
    }

    #[test]
    fn failures_are_recorded() {
        let grid = SweepGrid::new(SweepParameter::Lambda, vec![-1.0, 0.5], small()).unwrap();
        let out = run_sweep(&grid, &SweepOptions::default()).unwrap();
        assert_eq!(out.failures.len(), 1);
        assert_eq!(out.failures[0].param_value, -1.0);
        assert_eq!(out.records.len(), 110);
    }

    #[test]
    fn hermitian_slice_is_real() {
        let grid = SweepGrid::new(SweepParameter::WOverV, vec![0.6], small()).unwrap();
        let out = run_sweep(&grid, &SweepOptions::default()).unwrap();
        let slice = slice_complex_plane(&out.records, 0.6).unwrap();
        let h_norm = crate::eigen::frobenius_norm(&build_hamiltonian(&grid.params_at(0.6)).unwrap());
        assert!(slice.iter().all(|&(_, im, _)| im.abs() <= 1e-10 * h_norm));
        assert!(slice_complex_plane(&out.records, 0.7).is_err());
    }

    #[test]
    fn gap_closes_at_unit_ratio() {
        let grid = SweepGrid::new(SweepParameter::WOverV, vec![1.0], ModelParams { num_cells: 305, ..Default::default() }).unwrap();
        let out = run_sweep(&grid, &SweepOptions::default()).unwrap();
        let min_abs = out.records.iter().map(|r| r.re_e.hypot(r.im_e)).fold(f64::INFINITY, f64::min);
        assert!(min_abs < 0.02, "{min_abs}");
    }
}
