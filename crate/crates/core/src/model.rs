//! Chain parameters and the mosaic quasiperiodic SSH Hamiltonian.
//!
//! Sites are stored cell by cell, A before B: the flat index of `(cell, σ)` is
//! `2(cell − 1) + σ` with σ = 0 for A and 1 for B. Cells are 1-based to match
//! the mosaic condition `cell = mκ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The inverse golden mean (√5 − 1)/2.
pub fn golden_alpha() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Rational approximant F_{n−1}/F_n of the inverse golden mean, with
/// F_1 = F_2 = 1. `fibonacci_alpha(15)` is 377/610.
pub fn fibonacci_alpha(n: u32) -> f64 {
    let (num, den) = fibonacci_pair(n);
    num as f64 / den as f64
}

/// (F_{n−1}, F_n).
pub fn fibonacci_pair(n: u32) -> (u64, u64) {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..n {
        let next = a + b;
        a = b;
        b = next;
    }
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    #[default]
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" | "obc" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(Error::param("boundary", format!("expected `open` or `periodic`, got `{other}`"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

/// A lattice site: 1-based cell plus sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteIndex {
    pub cell: usize,
    pub sublattice: Sublattice,
}

impl SiteIndex {
    pub fn new(cell: usize, sublattice: Sublattice) -> Self {
        SiteIndex { cell, sublattice }
    }

    pub fn flat(self) -> usize {
        2 * (self.cell - 1)
            + match self.sublattice {
                Sublattice::A => 0,
                Sublattice::B => 1,
            }
    }

    pub fn from_flat(index: usize) -> Self {
        let sublattice = if index.is_multiple_of(2) { Sublattice::A } else { Sublattice::B };
        SiteIndex { cell: index / 2 + 1, sublattice }
    }
}

/// All physical and lattice parameters of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Intracell hopping.
    pub v: f64,
    /// Intercell hopping.
    pub w: f64,
    /// Quasiperiodic potential strength λ.
    pub lambda: f64,
    /// Incommensuration α ∈ (0, 1).
    pub alpha: f64,
    /// Real phase offset θ.
    pub theta: f64,
    /// Imaginary phase offset (non-Hermiticity).
    pub h: f64,
    /// Constant on-site potential δ.
    pub delta: Complex64,
    /// Mosaic period κ.
    pub kappa: usize,
    /// Number of unit cells, L/2.
    pub num_cells: usize,
    pub boundary: Boundary,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            v: 1.0,
            w: 1.0,
            lambda: 0.5,
            alpha: golden_alpha(),
            theta: 0.0,
            h: 0.0,
            delta: Complex64::new(0.0, 0.0),
            kappa: 1,
            num_cells: 610,
            boundary: Boundary::Periodic,
        }
    }
}

impl ModelParams {
    /// Number of lattice sites L = 2 · num_cells.
    pub fn num_sites(&self) -> usize {
        2 * self.num_cells
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("v", self.v),
            ("w", self.w),
            ("lambda", self.lambda),
            ("alpha", self.alpha),
            ("theta", self.theta),
            ("h", self.h),
            ("delta_re", self.delta.re),
            ("delta_im", self.delta.im),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(Error::param(field, format!("must be finite, got {value}")));
            }
        }
        if self.lambda < 0.0 {
            return Err(Error::param("lambda", "must be >= 0"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param("alpha", "must lie in (0, 1)"));
        }
        if self.kappa < 1 {
            return Err(Error::param("kappa", "must be a positive integer"));
        }
        if self.num_cells < 2 {
            return Err(Error::param("num_cells", "must be >= 2"));
        }
        if self.num_cells < self.kappa {
            return Err(Error::param("num_cells", format!("must be >= kappa ({})", self.kappa)));
        }
        Ok(())
    }

    /// Same parameters with (v, w, λ, δ) multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        ModelParams {
            v: s * self.v,
            w: s * self.w,
            lambda: s * self.lambda,
            delta: self.delta * s,
            ..*self
        }
    }

    /// Quasiperiodic value 2λ cos(2πα·cell + θ + ih), independent of the
    /// mosaic condition.
    pub(crate) fn mosaic_value(&self, cell: usize, theta: f64) -> Complex64 {
        let x = 2.0 * PI * self.alpha * cell as f64 + theta;
        complex_cos(x, self.h) * (2.0 * self.lambda)
    }
}

/// cos(x + ih) = cos x cosh h − i sin x sinh h.
pub(crate) fn complex_cos(x: f64, h: f64) -> Complex64 {
    Complex64::new(x.cos() * h.cosh(), -x.sin() * h.sinh())
}

/// On-site potential of site `(cell, sublattice)`.
pub fn potential_at(params: &ModelParams, cell: usize, sublattice: Sublattice) -> Result<Complex64> {
    if cell < 1 || cell > params.num_cells {
        return Err(Error::IndexOutOfRange { index: cell, lo: 1, hi: params.num_cells });
    }
    Ok(match sublattice {
        Sublattice::B if cell.is_multiple_of(params.kappa) => params.mosaic_value(cell, params.theta),
        _ => params.delta,
    })
}

/// Dense L×L Hamiltonian. The matrix is complex symmetric (H = Hᵀ).
pub fn build_hamiltonian(params: &ModelParams) -> Result<Mat<c64>> {
    params.validate()?;
    let n = params.num_sites();
    let cells = params.num_cells;
    let mut h = Mat::<c64>::zeros(n, n);
    let v = c64::new(params.v, 0.0);
    let w = c64::new(params.w, 0.0);

    for cell in 1..=cells {
        let a = SiteIndex::new(cell, Sublattice::A).flat();
        let b = a + 1;
        h[(a, a)] = potential_at(params, cell, Sublattice::A)?;
        h[(b, b)] = potential_at(params, cell, Sublattice::B)?;
        h[(a, b)] = v;
        h[(b, a)] = v;
        if cell < cells {
            h[(b, b + 1)] = w;
            h[(b + 1, b)] = w;
        }
    }
    if params.boundary == Boundary::Periodic {
        h[(n - 1, 0)] += w;
        h[(0, n - 1)] += w;
    }
    Ok(h)
}

/// Number of B sites carrying the quasiperiodic value.
pub fn modulated_cells(params: &ModelParams) -> usize {
    params.num_cells / params.kappa
}
