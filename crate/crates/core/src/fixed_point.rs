//! Fixed-point solvers for `v = Φ(v)`: plain Picard iteration and the
//! first-order extrapolated variant
//!
//! ```text
//! Δ¹v = Φ(v) - v,   Δ²v = Φ(Φ(v)) - 2Φ(v) + v,
//! α = -⟨Δ¹v, Δ²v⟩ / ⟨Δ²v, Δ²v⟩,   v ← v + α Δ¹v.
//! ```
//!
//! Both stop when `‖Φ(v) - v‖ <= ε` in the l² norm and return `Φ(v)` for the
//! iterate `v` that passed the test. That value is already computed by the
//! stopping test, and for the time steppers it satisfies the linear part of
//! the scheme exactly (in particular the mean-mode recursion).

use crate::spectral::SpectralField;

/// Minimal real inner-product space needed by the solvers.
pub trait Iterate: Clone {
    /// `a·self + b·other`.
    fn axpby(&self, a: f64, other: &Self, b: f64) -> Self;
    fn dot(&self, other: &Self) -> f64;

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl Iterate for SpectralField {
    fn axpby(&self, a: f64, other: &Self, b: f64) -> Self {
        let o = other.coeffs();
        self.map_slots(|i, c| c * a + o[i] * b)
    }

    /// Real and imaginary parts concatenated.
    fn dot(&self, other: &Self) -> f64 {
        self.inner(other)
    }
}

impl Iterate for Vec<f64> {
    fn axpby(&self, a: f64, other: &Self, b: f64) -> Self {
        self.iter().zip(other).map(|(x, y)| a * x + b * y).collect()
    }

    fn dot(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(x, y)| x * y).sum()
    }
}

/// `‖Δ²v‖` below this triggers a plain Picard update.
pub const EXTRAPOLATION_FLOOR: f64 = 1e-28;

#[derive(Clone, Debug)]
pub struct Outcome<V> {
    pub value: V,
    /// Number of updates `v^m → v^{m+1}` performed.
    pub iterations: usize,
    /// `‖Φ(v) - v‖` at the returned iterate.
    pub residual: f64,
    pub converged: bool,
    /// Total applications of `Φ`.
    pub map_evals: usize,
}

pub fn picard<V, F>(mut map: F, start: V, epsilon: f64, max_iter: usize) -> Outcome<V>
where
    V: Iterate,
    F: FnMut(&V) -> V,
{
    let mut v = start;
    let mut iterations = 0;
    let mut map_evals = 0;
    loop {
        let next = map(&v);
        map_evals += 1;
        let residual = next.axpby(1.0, &v, -1.0).norm();
        if residual <= epsilon || iterations >= max_iter || !residual.is_finite() {
            return Outcome {
                value: next,
                iterations,
                residual,
                converged: residual <= epsilon,
                map_evals,
            };
        }
        v = next;
        iterations += 1;
    }
}

pub fn extrapolated<V, F>(mut map: F, start: V, epsilon: f64, max_iter: usize) -> Outcome<V>
where
    V: Iterate,
    F: FnMut(&V) -> V,
{
    let mut v = start;
    let mut iterations = 0;
    let mut map_evals = 0;
    loop {
        let phi = map(&v);
        map_evals += 1;
        let d1 = phi.axpby(1.0, &v, -1.0);
        let residual = d1.norm();
        if residual <= epsilon || iterations >= max_iter || !residual.is_finite() {
            return Outcome {
                value: phi,
                iterations,
                residual,
                converged: residual <= epsilon,
                map_evals,
            };
        }
        let phi2 = map(&phi);
        map_evals += 1;
        // Φ²v - 2Φv + v = (Φ²v - Φv) - Δ¹v
        let d2 = phi2.axpby(1.0, &phi, -1.0).axpby(1.0, &d1, -1.0);
        let dd = d2.dot(&d2);
        v = if dd.sqrt() < EXTRAPOLATION_FLOOR || !dd.is_finite() {
            phi
        } else {
            let alpha = -d1.dot(&d2) / dd;
            v.axpby(1.0, &d1, alpha)
        };
        iterations += 1;
    }
}
