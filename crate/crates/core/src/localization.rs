//! Per-eigenstate localization diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::Spectrum;
use crate::{Error, Result};

/// Normalization tolerance accepted by [`fractal_dimension`].
pub const NORM_TOL: f64 = 1e-10;

/// Inverse participation ratio Σ|φ|⁴.
pub fn ipr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|z| z.norm_sqr().powi(2)).sum()
}

/// Finite-size fractal dimension Γ = −ln(Σ|φ|⁴)/ln L.
///
/// The state must already be normalized; `num_sites` must equal its length.
pub fn fractal_dimension(amplitudes: &[Complex64], num_sites: usize) -> Result<f64> {
    if amplitudes.len() != num_sites {
        return Err(Error::InvalidInput(format!(
            "state has {} amplitudes, expected L = {num_sites}",
            amplitudes.len()
        )));
    }
    if num_sites < 2 {
        return Err(Error::InvalidInput("fractal dimension needs L >= 2".into()));
    }
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidInput(format!("state is not normalized (norm = {norm})")));
    }
    Ok((-ipr(amplitudes).ln() / (num_sites as f64).ln()).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDiagnostics {
    pub eigenvalue: Complex64,
    pub gamma_fractal: f64,
    pub ipr: f64,
    pub profile: Option<Vec<f64>>,
}

/// Γ and IPR for every state of a spectrum, in spectrum order.
pub fn diagnose(spectrum: &Spectrum) -> Result<Vec<StateDiagnostics>> {
    spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.eigenvectors)
        .map(|(&eigenvalue, psi)| {
            Ok(StateDiagnostics {
                eigenvalue,
                gamma_fractal: fractal_dimension(psi, psi.len())?,
                ipr: ipr(psi),
                profile: None,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Localized,
    Extended,
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub loc: f64,
    pub ext: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { loc: 0.3, ext: 0.7 }
    }
}

impl Thresholds {
    pub fn new(loc: f64, ext: f64) -> Result<Self> {
        if !(0.0 < loc && loc < ext && ext < 1.0) {
            return Err(Error::InvalidInput(format!(
                "thresholds must satisfy 0 < loc < ext < 1, got ({loc}, {ext})"
            )));
        }
        Ok(Thresholds { loc, ext })
    }

    pub fn classify(&self, gamma: f64) -> Phase {
        if gamma < self.loc {
            Phase::Localized
        } else if gamma > self.ext {
            Phase::Extended
        } else {
            Phase::Critical
        }
    }
}

pub fn classify_states(spectrum: &Spectrum, thresholds: Thresholds) -> Result<Vec<Phase>> {
    Ok(diagnose(spectrum)?.iter().map(|d| thresholds.classify(d.gamma_fractal)).collect())
}

/// Per-site weights |φ|² of one state, indexed by flat site index.
pub fn spatial_profile(spectrum: &Spectrum, index: usize) -> Result<Vec<(usize, f64)>> {
    let psi = spectrum.eigenvectors.get(index).ok_or(Error::IndexOutOfRange {
        index,
        lo: 0,
        hi: spectrum.len().saturating_sub(1),
    })?;
    Ok(psi.iter().map(|z| z.norm_sqr()).enumerate().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn uniform_state_is_fully_extended() {
        let n = 64;
        let psi = vec![c(1.0 / (n as f64).sqrt()); n];
        assert_abs_diff_eq!(fractal_dimension(&psi, n).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn single_site_is_localized() {
        let mut psi = vec![c(0.0); 10];
        psi[3] = Complex64::new(0.0, 1.0);
        assert_eq!(fractal_dimension(&psi, 10).unwrap(), 0.0);
    }

    #[test]
    fn two_equal_sites() {
        let mut psi = vec![c(0.0); 16];
        psi[0] = c(0.5f64.sqrt());
        psi[9] = c(-(0.5f64.sqrt()));
        assert_abs_diff_eq!(ipr(&psi), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(fractal_dimension(&psi, 16).unwrap(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn rejects_unnormalized() {
        let psi = vec![c(1.0); 4];
        assert!(fractal_dimension(&psi, 4).is_err());
        assert!(fractal_dimension(&[c(1.0)], 2).is_err());
    }

    #[test]
    fn thresholds() {
        let t = Thresholds::new(0.3, 0.7).unwrap();
        assert_eq!(t.classify(0.05), Phase::Localized);
        assert_eq!(t.classify(0.95), Phase::Extended);
        assert_eq!(t.classify(0.5), Phase::Critical);
        assert!(Thresholds::new(0.7, 0.3).is_err());
        assert!(Thresholds::new(0.0, 0.3).is_err());
    }

    #[test]
    fn profile_of_single_site_state() {
        let spectrum = Spectrum {
            eigenvalues: vec![c(1.0), c(2.0)],
            eigenvectors: vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
            residuals: vec![0.0, 0.0],
            tol: 1e-8,
            h_norm: 1.0,
            params: None,
        };
        let profile = spatial_profile(&spectrum, 1).unwrap();
        assert_eq!(profile, vec![(0, 0.0), (1, 1.0)]);
        assert!(spatial_profile(&spectrum, 2).is_err());
        let labels = classify_states(&spectrum, Thresholds::default()).unwrap();
        assert_eq!(labels, vec![Phase::Localized, Phase::Localized]);
    }
}
