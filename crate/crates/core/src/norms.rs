//! Energy norms, the decay ratio `G`, and the inequality checkers for the
//! damped energy space. All norms are evaluated on coefficients.

use crate::damping::{DampingSymbol, Subadditivity};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Below this `|u|²_{H¹}` the ratio `G` is reported as undefined.
pub const G_UNDEFINED_BELOW: f64 = 1e-28;

/// Snapshot of the diagnostics at one time level.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub h1_sq: f64,
    pub gamma_sq: f64,
    /// `|u|_γ / |u|_{H¹}`; `None` for a numerically zero field.
    pub g: Option<f64>,
    pub mean: f64,
    pub sup_norm: f64,
    pub l1_coeffs: f64,
    pub fp_iterations: usize,
    pub fp_residual: f64,
}

impl DiagnosticsRecord {
    pub fn measure(
        t: f64,
        u: &SpectralField,
        gamma: &DampingSymbol,
        fp_iterations: usize,
        fp_residual: f64,
    ) -> Result<Self> {
        let h1_sq = h1_norm_sq(u);
        let gamma_sq = gamma_seminorm_sq(u, gamma)?;
        Ok(Self {
            t,
            h1_sq,
            gamma_sq,
            g: ratio(gamma_sq, h1_sq),
            mean: mean_value(u),
            sup_norm: sup_norm(u),
            l1_coeffs: l1_coeffs(u),
            fp_iterations,
            fp_residual,
        })
    }
}

fn ratio(gamma_sq: f64, h1_sq: f64) -> Option<f64> {
    (h1_sq >= G_UNDEFINED_BELOW).then(|| (gamma_sq / h1_sq).sqrt())
}

fn check_grid(u: &SpectralField, gamma: &DampingSymbol) -> Result<()> {
    if u.grid() == gamma.grid() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `Σ_k w_k |û_k|²` for an arbitrary per-slot weight.
pub fn weighted_sq(u: &SpectralField, weight: impl Fn(usize) -> f64) -> f64 {
    u.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| weight(i) * c.norm_sqr())
        .sum()
}

/// `|u|²_{H¹} = Σ (1 + κ_k²) |û_k|²`.
pub fn h1_norm_sq(u: &SpectralField) -> f64 {
    let grid = u.grid();
    weighted_sq(u, |i| grid.h1_weight_at(i))
}

/// `|u|²_γ = Σ γ_k |û_k|²`.
pub fn gamma_seminorm_sq(u: &SpectralField, gamma: &DampingSymbol) -> Result<f64> {
    check_grid(u, gamma)?;
    Ok(weighted_sq(u, |i| gamma.values()[i]))
}

/// `|f|²_{1/γ} = Σ |f̂_k|² / γ_k` over modes where `f̂_k ≠ 0`.
pub fn inv_gamma_norm_sq(f: &SpectralField, gamma: &DampingSymbol) -> Result<f64> {
    check_grid(f, gamma)?;
    let mut acc = 0.0;
    for (i, c) in f.coeffs().iter().enumerate() {
        let a = c.norm_sqr();
        if a == 0.0 {
            continue;
        }
        let g = gamma.values()[i];
        if g == 0.0 {
            return Err(Error::ForcingOutsideDampedBand {
                mode: f.grid().mode(i),
            });
        }
        acc += a / g;
    }
    Ok(acc)
}

/// `G = |u|_γ / |u|_{H¹}`; `None` when the field is numerically zero.
pub fn g_ratio(u: &SpectralField, gamma: &DampingSymbol) -> Result<Option<f64>> {
    Ok(ratio(gamma_seminorm_sq(u, gamma)?, h1_norm_sq(u)))
}

/// Spatial mean, i.e. the real part of `û_0`.
pub fn mean_value(u: &SpectralField) -> f64 {
    let c = u.coeffs()[0];
    debug_assert!(c.im.abs() < 1e-12);
    c.re
}

/// `max_j |u(x_j)|` over grid nodes.
pub fn sup_norm(u: &SpectralField) -> f64 {
    u.values().into_iter().map(f64::abs).fold(0.0, f64::max)
}

/// `Σ_k |û_k|`.
pub fn l1_coeffs(u: &SpectralField) -> f64 {
    u.coeffs().iter().map(|c| c.norm()).sum()
}

/// Margin `C |u|_γ - ‖u‖_∞` of the embedding into `L^∞`, with
/// `C = (Σ 1/γ_k)^{1/2}`. Nonnegative up to round-off.
pub fn embedding_check(u: &SpectralField, gamma: &DampingSymbol) -> Result<f64> {
    check_grid(u, gamma)?;
    let inv = gamma
        .inverse_sum()
        .grid_sum
        .ok_or(Error::InfiniteInverseSum)?;
    Ok(inv.sqrt() * gamma_seminorm_sq(u, gamma)?.sqrt() - sup_norm(u))
}

/// Exact product of two fields band-limited to `|k| <= M/3`, truncated back
/// to that band (2/3 rule on both sides of the multiplication).
pub fn dealiased_product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.same_grid(v)?;
    let grid = u.grid();
    let cutoff = (grid.size() / 3) as i64;
    let a = u.truncated(cutoff).values();
    let b = v.truncated(cutoff).values();
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(SpectralField::from_values(grid, &prod)?.truncated(cutoff))
}

/// Margin `C (|u|_γ ‖v̂‖₁ + |v|_γ ‖û‖₁) - |uv|_γ` of the algebra inequality,
/// with the product formed by [`dealiased_product`].
pub fn algebra_check(
    u: &SpectralField,
    v: &SpectralField,
    gamma: &DampingSymbol,
    constant: Subadditivity,
) -> Result<f64> {
    let c = constant.constant()?;
    check_grid(u, gamma)?;
    let uv = dealiased_product(u, v)?;
    let lhs = gamma_seminorm_sq(&uv, gamma)?.sqrt();
    let rhs = c
        * (gamma_seminorm_sq(u, gamma)?.sqrt() * l1_coeffs(v)
            + gamma_seminorm_sq(v, gamma)?.sqrt() * l1_coeffs(u));
    Ok(rhs - lhs)
}
