//! Dry-run validation and damping predicate report.

use std::fmt;

use crate::damping::{DampingFamily, DampingSymbol, InverseSum, KConvention, Subadditivity};
use crate::error::{Error, Result};
use crate::norms::{h1_norm_sq, inv_gamma_norm_sq};

use super::config::SimulationConfig;

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub size: usize,
    pub steps: usize,
    pub family: DampingFamily,
    pub convention: KConvention,
    pub inverse_sum: InverseSum,
    pub subadditivity: Subadditivity,
    /// `(N, ρ_N)` against the reference symbol `β ≡ 1`; `None` when the
    /// damping vanishes on some `|k| >= N`.
    pub rho: Vec<(usize, Option<f64>)>,
    pub initial_h1_sq: f64,
    /// `|f|²_{1/γ}`; outer `None` without forcing, inner `None` when the
    /// forcing has energy where the damping vanishes.
    pub forcing_size: Option<Option<f64>>,
}

/// Cutoffs `0, 1, 2, 4, …, M/2`.
fn rho_cutoffs(size: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut n = 1;
    while n <= size / 2 {
        out.push(n);
        n *= 2;
    }
    out
}

/// Builds every object the run needs without stepping, and evaluates the
/// damping predicates.
pub fn check(cfg: &SimulationConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let gamma = cfg.damping.build(&grid)?;
    let u0 = cfg.initial.build(&grid)?;
    let forcing = cfg.forcing.build(&grid)?;
    let beta = DampingSymbol::constant(&grid, 1.0)?;
    let mut rho = Vec::new();
    for n in rho_cutoffs(grid.size()) {
        match gamma.rho(&beta, n) {
            Ok(r) => rho.push((n, Some(r))),
            Err(Error::ZeroDamping { .. }) => rho.push((n, None)),
            Err(e) => return Err(e),
        }
    }
    let forcing_size = match &forcing {
        None => None,
        Some(f) => match inv_gamma_norm_sq(f, &gamma) {
            Ok(v) => Some(Some(v)),
            Err(Error::ForcingOutsideDampedBand { .. }) => Some(None),
            Err(e) => return Err(e),
        },
    };
    Ok(CheckReport {
        name: cfg.name.clone(),
        size: grid.size(),
        steps: cfg.steps()?,
        family: gamma.family().clone(),
        convention: gamma.convention(),
        inverse_sum: gamma.inverse_sum(),
        subadditivity: gamma.subadditivity_constant(),
        rho,
        initial_h1_sq: h1_norm_sq(&u0),
        forcing_size,
    })
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "config {}: ok ({} nodes, {} steps)",
            self.name, self.size, self.steps
        )?;
        let conv = match self.convention {
            KConvention::IndexK => "mode index |k|",
            KConvention::PhysicalK => "wavenumber 2πk/P",
        };
        writeln!(f, "damping {} (evaluated at {conv})", self.family)?;
        match self.inverse_sum.grid_sum {
            Some(s) => write!(f, "inverse sum on grid: {s:.6e}")?,
            None => write!(f, "inverse sum on grid: infinite (symbol vanishes)")?,
        }
        match self.inverse_sum.analytic_converges {
            Some(true) => writeln!(f, "; full series converges")?,
            Some(false) => writeln!(f, "; full series diverges")?,
            None => writeln!(f, "; full series unknown")?,
        }
        match self.subadditivity {
            Subadditivity::Finite(c) => writeln!(f, "subadditivity constant: {c:.6}")?,
            Subadditivity::Unbounded => writeln!(f, "subadditivity constant: none finite")?,
        }
        writeln!(f, "rho_N against beta = 1:")?;
        for (n, r) in &self.rho {
            match r {
                Some(r) => writeln!(f, "  N = {n:>5}  rho = {r:.6e}")?,
                None => writeln!(f, "  N = {n:>5}  rho = inf")?,
            }
        }
        writeln!(f, "initial |u|^2_H1 = {:.6e}", self.initial_h1_sq)?;
        match self.forcing_size {
            None => writeln!(f, "forcing: none"),
            Some(Some(v)) => writeln!(f, "forcing |f|^2_(1/gamma) = {v:.6e}"),
            Some(None) => writeln!(f, "forcing: energy outside the damped band"),
        }
    }
}
