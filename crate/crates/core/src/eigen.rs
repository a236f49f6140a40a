//! Full eigendecomposition of dense complex (non-Hermitian) matrices.
//!
//! The Schur/eigenvector computation is delegated to `faer` running
//! sequentially, so results are bit-reproducible for a fixed build. Every
//! returned eigenpair is normalized, sorted by (Re, Im), and checked against
//! the residual bound `tol · ‖H‖_F`.

use std::cmp::Ordering;

use faer::{c64, Mat};
use num_complex::Complex64;

use crate::model::{build_hamiltonian, ModelParams};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;

/// Eigenpairs whose condition 1/|ψᵀψ| exceeds this are reported as
/// near-defective. An exact Jordan block perturbed by roundoff only reaches
/// about 1/√ε ≈ 1e8, so the threshold sits well below that.
pub const DEFECTIVE_CONDITION: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`; unit 2-norm.
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// ‖Hψ_k − E_kψ_k‖₂.
    pub residuals: Vec<f64>,
    /// Relative residual tolerance the spectrum was certified against.
    pub tol: f64,
    /// ‖H‖_F.
    pub h_norm: f64,
    pub params: Option<ModelParams>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Build the Hamiltonian for `params` and decompose it.
pub fn solve(params: &ModelParams) -> Result<Spectrum> {
    let h = build_hamiltonian(params)?;
    let mut spectrum = eigendecompose(&h)?;
    spectrum.params = Some(*params);
    Ok(spectrum)
}

pub fn eigendecompose(h: &Mat<c64>) -> Result<Spectrum> {
    eigendecompose_with_tol(h, DEFAULT_TOL)
}

pub fn eigendecompose_with_tol(h: &Mat<c64>, tol: f64) -> Result<Spectrum> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::InvalidInput(format!("matrix is {}x{}, expected square", n, h.ncols())));
    }
    for j in 0..n {
        for i in 0..n {
            let z = h[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite entry at ({i}, {j})")));
            }
        }
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
            eigenvectors: vec![],
            residuals: vec![],
            tol,
            h_norm: 0.0,
            params: None,
        });
    }

    let evd = h.eigen().map_err(|_| Error::NoConvergence { index: None })?;
    let values = evd.S().column_vector();
    let vectors = evd.U();

    let mut pairs: Vec<(Complex64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<Complex64> = (0..n).map(|i| vectors[(i, k)]).collect();
            normalize(&mut col);
            (values[k], col)
        })
        .collect();
    pairs.sort_by(|a, b| lex_cmp(&a.0, &b.0));

    let sparse = SparseRows::new(h);
    let h_norm = frobenius_norm(h);
    let bound = tol * h_norm;
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for (k, (e, psi)) in pairs.into_iter().enumerate() {
        if !(e.re.is_finite() && e.im.is_finite()) || psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NoConvergence { index: Some(k) });
        }
        let r = sparse.residual(e, &psi);
        if r > bound {
            return Err(Error::ResidualViolation { index: k, residual: r, bound });
        }
        eigenvalues.push(e);
        eigenvectors.push(psi);
        residuals.push(r);
    }

    Ok(Spectrum { eigenvalues, eigenvectors, residuals, tol, h_norm, params: None })
}

/// Lexicographic order on (Re, Im).
pub fn lex_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

pub fn frobenius_norm(h: &Mat<c64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..h.ncols() {
        for i in 0..h.nrows() {
            acc += h[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

pub fn trace(h: &Mat<c64>) -> Complex64 {
    (0..h.nrows().min(h.ncols())).map(|i| h[(i, i)]).sum()
}

/// Row-compressed copy of the nonzero entries, used to recompute residuals
/// without going through the solver's own kernels.
struct SparseRows {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseRows {
    fn new(h: &Mat<c64>) -> Self {
        let rows = (0..h.nrows())
            .map(|i| {
                (0..h.ncols())
                    .filter_map(|j| {
                        let z = h[(i, j)];
                        (z != c64::new(0.0, 0.0)).then_some((j, z))
                    })
                    .collect()
            })
            .collect();
        SparseRows { rows }
    }

    fn residual(&self, e: Complex64, psi: &[Complex64]) -> f64 {
        self.rows
            .iter()
            .zip(psi)
            .map(|(row, &p)| {
                let hp: Complex64 = row.iter().map(|&(j, z)| z * psi[j]).sum();
                (hp - e * p).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Independent check of a [`Spectrum`] against the matrix it claims to
/// decompose.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub max_residual: f64,
    /// max_k |‖ψ_k‖₂ − 1|.
    pub max_norm_deviation: f64,
    pub residual_bound: f64,
    pub residual_violations: Vec<usize>,
    pub norm_violations: Vec<usize>,
    /// Eigenpairs whose eigenvalue condition 1/|ψᵀψ| exceeds
    /// [`DEFECTIVE_CONDITION`]; only evaluated for symmetric H.
    pub near_defective: Vec<usize>,
    /// |Σ E_k − tr H|.
    pub trace_error: f64,
    /// Shape mismatches between eigenvalues, eigenvectors and H.
    pub pairing_defects: Vec<String>,
}

impl SpectrumReport {
    pub fn is_clean(&self) -> bool {
        self.residual_violations.is_empty()
            && self.norm_violations.is_empty()
            && self.pairing_defects.is_empty()
    }
}

pub fn validate_spectrum(h: &Mat<c64>, spectrum: &Spectrum) -> SpectrumReport {
    let n = h.nrows();
    let mut pairing_defects = vec![];
    if h.ncols() != n {
        pairing_defects.push(format!("matrix is {}x{}", n, h.ncols()));
    }
    if spectrum.eigenvalues.len() != n {
        pairing_defects.push(format!("{} eigenvalues for dimension {n}", spectrum.eigenvalues.len()));
    }
    if spectrum.eigenvectors.len() != spectrum.eigenvalues.len() {
        pairing_defects.push(format!(
            "{} eigenvectors for {} eigenvalues",
            spectrum.eigenvectors.len(),
            spectrum.eigenvalues.len()
        ));
    }
    for (k, psi) in spectrum.eigenvectors.iter().enumerate() {
        if psi.len() != n {
            pairing_defects.push(format!("eigenvector {k} has length {}", psi.len()));
        }
    }

    let h_norm = frobenius_norm(h);
    let bound = spectrum.tol * h_norm;
    let sparse = SparseRows::new(h);
    let symmetric = is_symmetric(h);

    let mut report = SpectrumReport {
        max_residual: 0.0,
        max_norm_deviation: 0.0,
        residual_bound: bound,
        residual_violations: vec![],
        norm_violations: vec![],
        near_defective: vec![],
        trace_error: 0.0,
        pairing_defects,
    };
    if !report.pairing_defects.is_empty() {
        return report;
    }

    for (k, (&e, psi)) in spectrum.eigenvalues.iter().zip(&spectrum.eigenvectors).enumerate() {
        let r = sparse.residual(e, psi);
        report.max_residual = report.max_residual.max(r);
        if r > bound || !r.is_finite() {
            report.residual_violations.push(k);
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let dev = (norm - 1.0).abs();
        report.max_norm_deviation = report.max_norm_deviation.max(dev);
        if dev > 1e-12 {
            report.norm_violations.push(k);
        }
        if symmetric {
            let pairing: Complex64 = psi.iter().map(|z| z * z).sum();
            let cond = norm * norm / pairing.norm();
            if cond.is_nan() || cond > DEFECTIVE_CONDITION {
                report.near_defective.push(k);
            }
        }
    }
    let sum: Complex64 = spectrum.eigenvalues.iter().sum();
    report.trace_error = (sum - trace(h)).norm();
    report
}

fn is_symmetric(h: &Mat<c64>) -> bool {
    let n = h.nrows();
    h.ncols() == n && (0..n).all(|i| (0..i).all(|j| h[(i, j)] == h[(j, i)]))
}

/// Largest distance in a greedy nearest-neighbour matching of two equally
/// sized point multisets. Returns `None` when the sizes differ.
pub fn max_matching_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let (best, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[best] = true;
        worst = worst.max(d);
    }
    Some(worst)
}
