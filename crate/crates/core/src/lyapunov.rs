//! Transfer matrices and Lyapunov exponents.
//!
//! A quasicell is κ consecutive unit cells, the last of which carries the
//! quasiperiodic value on its B site. With amplitudes ordered as
//! (ψ_{j,A}, ψ_{j−1,B}) → (ψ_{j,B}, ψ_{j,A}) → (ψ_{j+1,A}, ψ_{j,B}), one
//! quasicell advances by T_m = T_B · T_A · T_κ, where T_κ is the (κ−1)-th
//! power of the plain-cell matrix. Exponents are reported per quasicell, in
//! nats.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::ModelParams;
use crate::{Error, Result};

/// Lift applied to |h| by the asymptotic LE field.
pub const DEFAULT_LIFT: f64 = 25.0;

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Mat2([[o, z], [z, o]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value, from the closed form for 2×2 matrices.
    pub fn spectral(&self) -> f64 {
        let f2 = self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        let d = self.det().norm();
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
        ((f2 + disc) / 2.0).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn pow(&self, mut n: usize) -> Self {
        let mut base = *self;
        let mut acc = Mat2::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MatrixNorm {
    #[default]
    Frobenius,
    Spectral,
}

impl MatrixNorm {
    fn eval(self, m: &Mat2) -> f64 {
        match self {
            MatrixNorm::Frobenius => m.frobenius(),
            MatrixNorm::Spectral => m.spectral(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferSettings {
    /// Number of quasicells N in the product.
    pub num_quasicells: usize,
    /// Uniform θ samples over one period.
    pub theta_samples: usize,
    /// Renormalize the running product every this many factors.
    pub rescale_every: usize,
    pub norm: MatrixNorm,
}

impl Default for TransferSettings {
    fn default() -> Self {
        TransferSettings {
            num_quasicells: 10_000,
            theta_samples: 32,
            rescale_every: 1,
            norm: MatrixNorm::Frobenius,
        }
    }
}

impl TransferSettings {
    /// N = L/(2κ) quasicells for the chain described by `params`.
    pub fn for_chain(params: &ModelParams) -> Self {
        TransferSettings {
            num_quasicells: (params.num_cells / params.kappa).max(1),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_quasicells == 0 {
            return Err(Error::param("num_quasicells", "must be >= 1"));
        }
        if self.theta_samples == 0 {
            return Err(Error::param("theta_samples", "must be >= 1"));
        }
        if self.rescale_every == 0 {
            return Err(Error::param("rescale_every", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeResult {
    pub energy: Complex64,
    /// θ-averaged exponent per quasicell.
    pub gamma: f64,
    pub per_theta: Vec<f64>,
}

fn check_hoppings(params: &ModelParams) -> Result<()> {
    if params.v == 0.0 {
        return Err(Error::SingularParameter("v"));
    }
    if params.w == 0.0 {
        return Err(Error::SingularParameter("w"));
    }
    Ok(())
}

/// T_A · T_κ: everything in a quasicell except the modulated B site.
fn unmodulated_part(params: &ModelParams, energy: Complex64) -> Mat2 {
    let (v, w) = (params.v, params.w);
    let z = energy - params.delta;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let t_a = Mat2([[z / v, Complex64::new(-w / v, 0.0)], [one, zero]]);
    let plain = Mat2([
        [(z * z - v * v) / (v * w), -z / v],
        [z / v, Complex64::new(-w / v, 0.0)],
    ]);
    t_a * plain.pow(params.kappa - 1)
}

fn t_b(params: &ModelParams, energy: Complex64, m: usize, theta: f64) -> Mat2 {
    let (v, w) = (params.v, params.w);
    let potential = params.mosaic_value(m * params.kappa, theta);
    Mat2([
        [(energy - potential) / w, Complex64::new(-v / w, 0.0)],
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
}

/// Transfer matrix T_m of quasicell `m` at real phase `theta`.
pub fn quasicell_transfer(params: &ModelParams, energy: Complex64, m: usize, theta: f64) -> Result<Mat2> {
    check_hoppings(params)?;
    if params.kappa < 1 {
        return Err(Error::param("kappa", "must be a positive integer"));
    }
    Ok(t_b(params, energy, m, theta) * unmodulated_part(params, energy))
}

/// Finite-N Lyapunov exponent, averaged over a uniform θ grid starting at
/// `params.theta`.
pub fn finite_le(params: &ModelParams, energy: Complex64, settings: &TransferSettings) -> Result<LeResult> {
    check_hoppings(params)?;
    settings.validate()?;
    if params.kappa < 1 {
        return Err(Error::param("kappa", "must be a positive integer"));
    }
    let core = unmodulated_part(params, energy);
    let n = settings.num_quasicells;
    let per_theta = (0..settings.theta_samples)
        .map(|s| {
            let theta = params.theta + 2.0 * PI * s as f64 / settings.theta_samples as f64;
            let mut product = Mat2::identity();
            let mut log_acc = 0.0;
            for m in 1..=n {
                product = t_b(params, energy, m, theta) * core * product;
                if m % settings.rescale_every == 0 || m == n {
                    let norm = settings.norm.eval(&product);
                    if !norm.is_finite() || norm == 0.0 {
                        return Err(Error::Overflow { step: m });
                    }
                    log_acc += norm.ln();
                    product = product.scale(1.0 / norm);
                }
            }
            Ok(log_acc / n as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let gamma = per_theta.iter().sum::<f64>() / per_theta.len() as f64;
    Ok(LeResult { energy, gamma, per_theta })
}

/// Closed-form exponent on the spectrum, for κ = 1 and κ = 2:
///
/// - κ = 1: max{ln|λ(E−δ)/(vw)| + |h|, 0}
/// - κ = 2: max{ln|λf/w| + |h|, 0}, f = z(z² − v² − w²)/(v²w), z = E − δ
pub fn analytic_le(params: &ModelParams, energy: Complex64) -> Result<f64> {
    check_hoppings(params)?;
    let (v, w) = (params.v, params.w);
    let z = energy - params.delta;
    let arg = match params.kappa {
        1 => params.lambda * z.norm() / (v * w).abs(),
        2 => {
            let f = z * (z * z - (v * v + w * w)) / (v * v * w);
            params.lambda * f.norm() / w.abs()
        }
        k => return Err(Error::Unsupported(format!("no closed-form LE for kappa = {k}; use finite_le"))),
    };
    if arg == 0.0 {
        return Ok(0.0);
    }
    Ok((arg.ln() + params.h.abs()).max(0.0))
}

/// Asymptotic-branch exponent: the finite LE evaluated at imaginary phase
/// |h| + `lift`, shifted back by `lift` and clamped at zero.
///
/// For E on the spectrum this equals the true LE; for any E it is the
/// quantity whose zero set bounds the localized region, and it needs no
/// closed form, so it works for every κ.
pub fn asymptotic_le(params: &ModelParams, energy: Complex64, settings: &TransferSettings, lift: f64) -> Result<f64> {
    if !(lift > 0.0 && lift.is_finite()) {
        return Err(Error::param("lift", "must be positive and finite"));
    }
    let lifted = ModelParams { h: params.h.abs() + lift, ..*params };
    let result = finite_le(&lifted, energy, settings)?;
    Ok((result.gamma - lift).max(0.0))
}

/// Settings suited to [`asymptotic_le`]: at large lift each factor is rank-one
/// dominated, so short products and few θ samples already converge.
pub fn asymptotic_settings() -> TransferSettings {
    TransferSettings { num_quasicells: 256, theta_samples: 4, ..Default::default() }
}

/// Rectangular grid of complex energies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub n_re: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub n_im: usize,
}

impl ComplexGrid {
    pub fn new(re: (f64, f64), n_re: usize, im: (f64, f64), n_im: usize) -> Result<Self> {
        let grid = ComplexGrid { re_min: re.0, re_max: re.1, n_re, im_min: im.0, im_max: im.1, n_im };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid covering the given ranges with (at most) the given spacing; the
    /// upper bounds are extended to land on a node.
    pub fn with_spacing(re: (f64, f64), im: (f64, f64), spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::param("spacing", "must be positive"));
        }
        let count = |lo: f64, hi: f64| ((hi - lo) / spacing - 1e-9).ceil().max(0.0) as usize + 1;
        let (n_re, n_im) = (count(re.0, re.1), count(im.0, im.1));
        Self::new(
            (re.0, re.0 + (n_re - 1) as f64 * spacing),
            n_re,
            (im.0, im.0 + (n_im - 1) as f64 * spacing),
            n_im,
        )
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.re_min, self.re_max, self.im_min, self.im_max] {
            if !v.is_finite() {
                return Err(Error::InvalidInput("grid bounds must be finite".into()));
            }
        }
        if self.n_re == 0 || self.n_im == 0 {
            return Err(Error::InvalidInput("grid needs at least one node per axis".into()));
        }
        if self.re_max < self.re_min || self.im_max < self.im_min {
            return Err(Error::InvalidInput("grid bounds are reversed".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn re_step(&self) -> f64 {
        if self.n_re > 1 {
            (self.re_max - self.re_min) / (self.n_re - 1) as f64
        } else {
            0.0
        }
    }

    pub fn im_step(&self) -> f64 {
        if self.n_im > 1 {
            (self.im_max - self.im_min) / (self.n_im - 1) as f64
        } else {
            0.0
        }
    }

    pub fn re_at(&self, i: usize) -> f64 {
        self.re_min + i as f64 * self.re_step()
    }

    pub fn im_at(&self, j: usize) -> f64 {
        self.im_min + j as f64 * self.im_step()
    }

    /// Node (i, j) with i along Re E and j along Im E.
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re_at(i), self.im_at(j))
    }

    /// Row-major flat index (rows are fixed Im E).
    pub fn flat(&self, i: usize, j: usize) -> usize {
        j * self.n_re + i
    }
}

/// Which exponent [`le_grid`] evaluates at each node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeField {
    /// [`finite_le`] at the node itself.
    Direct,
    /// [`asymptotic_le`] with the given lift.
    Asymptotic { lift: f64 },
}

impl Default for LeField {
    fn default() -> Self {
        LeField::Asymptotic { lift: DEFAULT_LIFT }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeGrid {
    pub grid: ComplexGrid,
    pub field: LeField,
    /// Row-major values; NaN where the node failed.
    pub values: Vec<f64>,
    pub failures: Vec<(usize, String)>,
}

impl LeGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.flat(i, j)]
    }
}

/// Evaluate an LE field on every grid node. Node failures are recorded and
/// leave NaN in place; evaluation order does not affect the result.
pub fn le_grid(params: &ModelParams, grid: &ComplexGrid, settings: &TransferSettings, field: LeField) -> Result<LeGrid> {
    grid.validate()?;
    settings.validate()?;
    check_hoppings(params)?;
    let outcomes: Vec<Result<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let energy = grid.node(k % grid.n_re, k / grid.n_re);
            match field {
                LeField::Direct => finite_le(params, energy, settings).map(|r| r.gamma),
                LeField::Asymptotic { lift } => asymptotic_le(params, energy, settings, lift),
            }
        })
        .collect();
    let mut values = Vec::with_capacity(outcomes.len());
    let mut failures = vec![];
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(v) => values.push(v),
            Err(e) => {
                values.push(f64::NAN);
                failures.push((k, e.to_string()));
            }
        }
    }
    Ok(LeGrid { grid: *grid, field, values, failures })
}
