//! Localization physics of the non-Hermitian Su-Schrieffer-Heeger chain with a
//! mosaic quasiperiodic on-site potential.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: parameters and the dense complex-symmetric Hamiltonian.
//! - [`eigen`]: full eigendecomposition with certified residuals.
//! - [`localization`]: fractal dimension, IPR, spatial profiles, phase labels.
//! - [`lyapunov`]: quasicell transfer matrices, finite-size and closed-form
//!   Lyapunov exponents, LE fields over complex-energy grids.
//! - [`rings`]: mobility-ring boundaries (closed forms for κ = 1, 2 and a
//!   numeric contour for any κ).
//! - [`sweep`]: checkpointed parameter sweeps producing phase diagrams.
//! - [`io`] and [`plot`]: configuration files, CSV/JSON serialization, SVG.

pub mod contour;
pub mod eigen;
pub mod error;
pub mod io;
pub mod localization;
pub mod lyapunov;
pub mod model;
pub mod plot;
pub mod rings;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use eigen::{eigendecompose, solve, validate_spectrum, Spectrum, SpectrumReport};
pub use localization::{
    classify_states, fractal_dimension, ipr, spatial_profile, Phase, StateDiagnostics, Thresholds,
};
pub use lyapunov::{
    analytic_le, asymptotic_le, finite_le, le_grid, quasicell_transfer, ComplexGrid, LeField,
    LeGrid, LeResult, MatrixNorm, TransferSettings,
};
pub use model::{build_hamiltonian, potential_at, Boundary, ModelParams, SiteIndex, Sublattice};
pub use rings::{
    count_components, count_populated_components, encloses, numeric_boundary, ring_k1, ring_k2,
    NumericBoundary, RingCurve, RingMethod,
};
pub use sweep::{run_sweep, slice_complex_plane, SweepGrid, SweepOptions, SweepParameter, SweepRecord};

/// Crate version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
