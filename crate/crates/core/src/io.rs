//! Configuration files and CSV/JSON serialization.
//!
//! Config files are flat `key = value` lines with `#` comments. CSV numbers
//! are written in scientific notation with 17 significant digits, which
//! round-trips every f64 exactly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::Spectrum;
use crate::localization::StateDiagnostics;
use crate::lyapunov::LeResult;
use crate::model::{fibonacci_alpha, golden_alpha, Boundary, ModelParams};
use crate::rings::RingCurve;
use crate::sweep::SweepRecord;
use crate::{Error, Result};

pub const CONFIG_KEYS: [&str; 11] = [
    "v", "w", "lambda", "alpha", "theta", "h", "delta_re", "delta_im", "kappa", "num_cells", "boundary",
];

/// `key = value` pairs in file order. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str, origin: &str) -> Result<Vec<(String, String)>> {
    let mut out = vec![];
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| Error::Parse {
                path: origin.to_string(),
                line: n as u64 + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn parse_f64(field: &'static str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::param(field, format!("expected a number, got `{value}`")))
}

fn parse_usize(field: &'static str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::param(field, format!("expected a non-negative integer, got `{value}`")))
}

/// Accepts a number, `golden`, or `fib:N` (the approximant F_{N−1}/F_N).
pub fn parse_alpha(value: &str) -> Result<f64> {
    let v = value.trim();
    if v.eq_ignore_ascii_case("golden") {
        return Ok(golden_alpha());
    }
    if let Some(n) = v.strip_prefix("fib:") {
        let n: u32 = n
            .parse()
            .map_err(|_| Error::param("alpha", format!("bad Fibonacci index in `{v}`")))?;
        if !(2..=90).contains(&n) {
            return Err(Error::param("alpha", "Fibonacci index must lie in 2..=90"));
        }
        return Ok(fibonacci_alpha(n));
    }
    parse_f64("alpha", v)
}

/// Set one field of `params` from its config key.
pub fn apply_setting(params: &mut ModelParams, key: &str, value: &str) -> Result<()> {
    match key {
        "v" => params.v = parse_f64("v", value)?,
        "w" => params.w = parse_f64("w", value)?,
        "lambda" => params.lambda = parse_f64("lambda", value)?,
        "alpha" => params.alpha = parse_alpha(value)?,
        "theta" => params.theta = parse_f64("theta", value)?,
        "h" => params.h = parse_f64("h", value)?,
        "delta_re" => params.delta.re = parse_f64("delta_re", value)?,
        "delta_im" => params.delta.im = parse_f64("delta_im", value)?,
        "kappa" => params.kappa = parse_usize("kappa", value)?,
        "num_cells" => params.num_cells = parse_usize("num_cells", value)?,
        "boundary" => params.boundary = value.parse::<Boundary>()?,
        other => return Err(Error::Config(format!("unknown key `{other}`"))),
    }
    Ok(())
}

/// Defaults overridden by the settings in `text`.
pub fn params_from_config(text: &str, origin: &str) -> Result<ModelParams> {
    let mut params = ModelParams::default();
    for (key, value) in parse_config(text, origin)? {
        apply_setting(&mut params, &key, &value)?;
    }
    Ok(params)
}

pub fn load_config(path: &Path) -> Result<ModelParams> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    params_from_config(&text, &path.display().to_string())
}

/// The effective configuration in config-file syntax.
pub fn dump_config(params: &ModelParams) -> String {
    format!(
        "v = {}\nw = {}\nlambda = {}\nalpha = {}\ntheta = {}\nh = {}\ndelta_re = {}\ndelta_im = {}\nkappa = {}\nnum_cells = {}\nboundary = {}\n",
        params.v,
        params.w,
        params.lambda,
        params.alpha,
        params.theta,
        params.h,
        params.delta.re,
        params.delta.im,
        params.kappa,
        params.num_cells,
        params.boundary
    )
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn spectrum_csv(spectrum: &Spectrum, diagnostics: &[StateDiagnostics]) -> String {
    let mut out = String::from("index,re_E,im_E,gamma,ipr,residual\n");
    for (k, (d, r)) in diagnostics.iter().zip(&spectrum.residuals).enumerate() {
        out.push_str(&format!(
            "{k},{},{},{},{},{}\n",
            fmt_f64(d.eigenvalue.re),
            fmt_f64(d.eigenvalue.im),
            fmt_f64(d.gamma_fractal),
            fmt_f64(d.ipr),
            fmt_f64(*r)
        ));
    }
    out
}

pub fn profile_csv(profile: &[(usize, f64)]) -> String {
    let mut out = String::from("site,weight\n");
    for (site, weight) in profile {
        out.push_str(&format!("{site},{}\n", fmt_f64(*weight)));
    }
    out
}

/// `re_E,im_E,gamma_le,gamma_analytic`; the last column is empty when no
/// closed form is available.
pub fn le_csv(rows: &[(LeResult, Option<f64>)]) -> String {
    let mut out = String::from("re_E,im_E,gamma_le,gamma_analytic\n");
    for (le, analytic) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(le.energy.re),
            fmt_f64(le.energy.im),
            fmt_f64(le.gamma),
            analytic.map(fmt_f64).unwrap_or_default()
        ));
    }
    out
}

pub fn ring_csv(curve: &RingCurve) -> String {
    let mut out = String::from("component,point,re_E,im_E\n");
    for (c, comp) in curve.components.iter().enumerate() {
        for (k, z) in comp.iter().enumerate() {
            out.push_str(&format!("{c},{k},{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
        }
    }
    out
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("param,eigen_index,re_E,im_E,gamma\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(r.param_value),
            r.eigen_index,
            fmt_f64(r.re_e),
            fmt_f64(r.im_e),
            fmt_f64(r.gamma_fractal)
        ));
    }
    out
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    write_file(path, contents)
}

fn parse_rows(text: &str, origin: &str, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let parse_err = |line: u64, message: String| Error::Parse { path: origin.to_string(), line, message };
    let found = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let found: Vec<&str> = found.iter().map(str::trim).collect();
    if found != header {
        return Err(parse_err(1, format!("expected header `{}`, got `{}`", header.join(","), found.join(","))));
    }
    let mut rows = vec![];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, record));
    }
    Ok(rows)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize, line: u64, origin: &str) -> Result<T> {
    let raw = record.get(idx).unwrap_or("").trim();
    raw.parse::<T>().map_err(|_| Error::Parse {
        path: origin.to_string(),
        line,
        message: format!("column {}: cannot parse `{raw}`", idx + 1),
    })
}

pub fn parse_sweep_csv(text: &str, origin: &str) -> Result<Vec<SweepRecord>> {
    parse_rows(text, origin, &["param", "eigen_index", "re_E", "im_E", "gamma"])?
        .into_iter()
        .map(|(line, rec)| {
            Ok(SweepRecord {
                param_value: field(&rec, 0, line, origin)?,
                eigen_index: field(&rec, 1, line, origin)?,
                re_e: field(&rec, 2, line, origin)?,
                im_e: field(&rec, 3, line, origin)?,
                gamma_fractal: field(&rec, 4, line, origin)?,
            })
        })
        .collect()
}

/// Components of a ring CSV, in component-id order.
pub fn parse_ring_csv(text: &str, origin: &str) -> Result<Vec<Vec<Complex64>>> {
    let mut components: Vec<Vec<Complex64>> = vec![];
    for (line, rec) in parse_rows(text, origin, &["component", "point", "re_E", "im_E"])? {
        let c: usize = field(&rec, 0, line, origin)?;
        let z = Complex64::new(field(&rec, 2, line, origin)?, field(&rec, 3, line, origin)?);
        if c >= components.len() {
            components.resize(c + 1, vec![]);
        }
        components[c].push(z);
    }
    Ok(components)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Sidecar metadata written next to every output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub params: ModelParams,
    #[serde(default)]
    pub settings: serde_json::Value,
}

impl Metadata {
    pub fn new(command: &str, params: &ModelParams, settings: serde_json::Value) -> Self {
        Metadata {
            tool: "ssh-mosaic".into(),
            version: crate::VERSION.into(),
            command: command.into(),
            params: *params,
            settings,
        }
    }
}

/// `out.csv` → `out.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

pub fn write_metadata(out: &Path, meta: &Metadata) -> Result<PathBuf> {
    let path = sidecar_path(out);
    write_file(&path, &(serde_json::to_string_pretty(meta)? + "\n"))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_with_comments_and_overrides() {
        let text = "# full-size run\nv = 1\nw=0.44  # ratio\nkappa: 2\nboundary = open\nalpha = fib:15\n\n";
        let p = params_from_config(text, "test.cfg").unwrap();
        assert_eq!(p.w, 0.44);
        assert_eq!(p.kappa, 2);
        assert_eq!(p.boundary, Boundary::Open);
        assert_eq!(p.alpha, 377.0 / 610.0);
    }

    #[test]
    fn config_errors() {
        let err = params_from_config("v = 1\nnonsense\n", "x.cfg").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(params_from_config("colour = red", "x").is_err());
        let err = params_from_config("kappa = -1", "x").unwrap_err();
        assert!(err.to_string().contains("kappa"));
    }

    #[test]
    fn dump_round_trips() {
        let p = ModelParams { w: 0.3, h: 1.0, delta: Complex64::new(1.0, 1.0), kappa: 2, ..Default::default() };
        assert_eq!(params_from_config(&dump_config(&p), "dump").unwrap(), p);
    }

    #[test]
    fn sweep_csv_round_trip() {
        let records = vec![
            SweepRecord { param_value: 0.1, eigen_index: 0, re_e: -1.0 / 3.0, im_e: 1e-300, gamma_fractal: 0.123_456_789_012_345_68 },
            SweepRecord { param_value: 0.1, eigen_index: 1, re_e: std::f64::consts::PI, im_e: -0.0, gamma_fractal: 1.0 },
        ];
        let back = parse_sweep_csv(&sweep_csv(&records), "mem").unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn malformed_csv_reports_line() {
        let text = "param,eigen_index,re_E,im_E,gamma\n0.1,0,1,0,0.5\n0.1,1,oops,0,0.5\n";
        match parse_sweep_csv(text, "bad.csv").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
        assert!(parse_sweep_csv("a,b\n", "bad.csv").is_err());
    }
}
