//! Pseudospectral simulation of the Benjamin–Bona–Mahony equation
//!
//! ```text
//! u_t + u_x - u_xxt + u u_x + L_γ(u) = f
//! ```
//!
//! on a periodic interval, where the damping operator `L_γ` acts diagonally in
//! Fourier space with a nonnegative symbol `γ_k`. The crate provides the
//! spectral machinery, damping families, energy norms and decay diagnostics,
//! the exact linear propagator, four time-stepping schemes with fixed-point
//! solvers, and an experiment runner with CSV output.
//!
//! Batch work (preset matrices, exhaustive pair searches) runs on rayon when
//! the `parallel` feature is enabled and falls back to plain iterators
//! otherwise.

pub mod damping;
pub mod error;
pub mod fixed_point;
pub mod linear;
pub mod norms;
pub mod parallel;
pub mod runner;
pub mod spectral;
pub mod stepping;

pub use damping::{DampingFamily, DampingSymbol, InverseSum, KConvention, Subadditivity, Tail};
pub use error::{Error, Result};
pub use linear::LinearPropagator;
pub use norms::DiagnosticsRecord;
pub use spectral::{Grid, SpectralField};
pub use stepping::{SchemeKind, StepConfig, StepResult};
