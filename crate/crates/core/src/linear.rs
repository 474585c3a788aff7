//! Exact solution of the linear damped equation
//!
//! ```text
//! u_t - u_txx + u_x + L_γ(u) = 0,   û_k(t) = exp(-μ_k t) û_k(0),
//! μ_k = (γ_k + iκ_k) / (1 + κ_k²),
//! ```
//!
//! and the decay bounds it satisfies. The Nyquist slot uses a zero
//! derivative symbol, consistent with the time steppers.

use num_complex::Complex64;

use crate::damping::DampingSymbol;
use crate::error::{Error, Result};
use crate::norms::{h1_norm_sq, mean_value, weighted_sq};
use crate::spectral::{Grid, SpectralField};

#[derive(Clone, Debug)]
pub struct LinearPropagator {
    grid: Grid,
    rates: Vec<Complex64>,
}

impl LinearPropagator {
    pub fn new(gamma: &DampingSymbol) -> Self {
        let grid = gamma.grid().clone();
        let rates = (0..grid.size())
            .map(|i| {
                Complex64::new(gamma.values()[i], grid.derivative_wavenumber_at(i))
                    / grid.h1_weight_at(i)
            })
            .collect();
        Self { grid, rates }
    }

    /// Per-slot rates `μ_k`.
    pub fn rates(&self) -> &[Complex64] {
        &self.rates
    }

    pub fn evolve(&self, u0: &SpectralField, t: f64) -> Result<SpectralField> {
        if u0.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        if t == 0.0 {
            return Ok(u0.clone());
        }
        Ok(u0.map_slots(|i, c| (-self.rates[i] * t).exp() * c))
    }
}

/// `u0` evolved to time `t` under the linear damped equation.
pub fn linear_evolve(u0: &SpectralField, gamma: &DampingSymbol, t: f64) -> Result<SpectralField> {
    LinearPropagator::new(gamma).evolve(u0, t)
}

/// Upper bound on `|u(t)|²_{H¹}` for the linear flow:
///
/// ```text
/// min( e^{-s} (s / 2t)^s |u0|²_{δ(s)},  |u0|²_{H¹} ),   δ(s)_k = (1+κ_k²)^{s+1} / γ_k^s.
/// ```
///
/// For `s != 1` the symbol must lie in `[0, 1]`.
pub fn h1_decay_bound(u0: &SpectralField, gamma: &DampingSymbol, s: f64, t: f64) -> Result<f64> {
    if u0.grid() != gamma.grid() {
        return Err(Error::GridMismatch);
    }
    if t.is_nan() || t <= 0.0 {
        return Err(Error::invalid(format!("decay bound needs t > 0, got {t}")));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("decay bound needs s > 0, got {s}")));
    }
    if s != 1.0 && gamma.values().iter().any(|&g| g > 1.0) {
        return Err(Error::BoundUnavailable(format!(
            "s = {s} requires a damping symbol with values in [0, 1]"
        )));
    }
    let weight = gamma.derived_weight(s);
    for (i, c) in u0.coeffs().iter().enumerate() {
        if c.norm_sqr() > 0.0 && weight[i].is_infinite() {
            return Err(Error::BoundUnavailable(format!(
                "damping vanishes on active mode {}",
                u0.grid().mode(i)
            )));
        }
    }
    let weighted = weighted_sq(u0, |i| {
        if weight[i].is_finite() {
            weight[i]
        } else {
            0.0
        }
    });
    let decay = (-s).exp() * (s / (2.0 * t)).powf(s) * weighted;
    Ok(decay.min(h1_norm_sq(u0)))
}

/// Mean of the solution at time `t`: `e^{-γ_0 t} ū(0)`.
pub fn mean_decay(u0: &SpectralField, gamma: &DampingSymbol, t: f64) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    Ok((-gamma.at(0) * t).exp() * mean_value(u0))
}
