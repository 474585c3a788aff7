//! Periodic grid, Fourier transforms and the spectral operators used by the
//! schemes.
//!
//! Coefficients are stored in FFT order: slot `i < M/2` holds mode `k = i`,
//! slot `i >= M/2` holds mode `k = i - M`. Slot `M/2` is the Nyquist mode
//! `k = -M/2`. Coefficients are Fourier-series coefficients relative to the
//! grid origin,
//!
//! ```text
//! û_k = (1/M) Σ_j u(x_j) exp(-2πi jk/M),   u(x_j) = Σ_k û_k exp(2πi jk/M),
//! ```
//!
//! so every coefficient-space norm needs no period factor.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative tolerance used when validating Hermitian symmetry of user input.
const HERMITIAN_TOL: f64 = 1e-12;

/// Uniform periodic grid `x_j = x0 + j P / M`.
#[derive(Clone)]
pub struct Grid {
    period: f64,
    origin: f64,
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("period", &self.period)
            .field("origin", &self.origin)
            .field("size", &self.size)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.period == other.period && self.origin == other.origin && self.size == other.size
    }
}

impl Grid {
    pub fn new(period: f64, origin: f64, size: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::invalid(format!(
                "period must be positive, got {period}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::invalid(format!(
                "origin must be finite, got {origin}"
            )));
        }
        if size < 4 || !size.is_power_of_two() {
            return Err(Error::invalid(format!(
                "grid size must be a power of two >= 4, got {size}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            period,
            origin,
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.size as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.period / self.size as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.size).map(|j| self.node(j)).collect()
    }

    /// Largest mode magnitude on the grid, `M/2`.
    pub fn max_mode(&self) -> i64 {
        (self.size / 2) as i64
    }

    /// Storage slot of the Nyquist mode `k = -M/2`.
    pub fn nyquist_index(&self) -> usize {
        self.size / 2
    }

    /// Integer mode index stored at slot `i`.
    pub fn mode(&self, i: usize) -> i64 {
        if i < self.size / 2 {
            i as i64
        } else {
            i as i64 - self.size as i64
        }
    }

    /// Storage slot of mode `k`, for `-M/2 <= k < M/2`.
    pub fn index(&self, k: i64) -> Option<usize> {
        let half = self.max_mode();
        if k < -half || k >= half {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.size as i64) as usize)
        }
    }

    /// Physical wavenumber `κ_k = 2πk/P`.
    pub fn wavenumber(&self, k: i64) -> f64 {
        2.0 * PI * k as f64 / self.period
    }

    /// Physical wavenumber at storage slot `i`.
    pub fn wavenumber_at(&self, i: usize) -> f64 {
        self.wavenumber(self.mode(i))
    }

    /// Wavenumber used by odd-order derivative symbols: `κ_k`, except zero at
    /// the Nyquist slot.
    pub fn derivative_wavenumber_at(&self, i: usize) -> f64 {
        if i == self.nyquist_index() {
            0.0
        } else {
            self.wavenumber_at(i)
        }
    }

    /// `1 + κ_k²` at slot `i`.
    pub fn h1_weight_at(&self, i: usize) -> f64 {
        let kappa = self.wavenumber_at(i);
        1.0 + kappa * kappa
    }

    /// Forward transform of real nodal values to normalized, exactly Hermitian
    /// coefficients.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.size, "nodal array length mismatch");
        let scale = 1.0 / self.size as f64;
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        for c in &mut buf {
            *c *= scale;
        }
        symmetrize(&mut buf);
        buf
    }

    /// Inverse transform; the imaginary round-off of Hermitian input is dropped.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.size, "coefficient array length mismatch");
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

/// Forces `c[-k] = conj(c[k])` and real mean/Nyquist coefficients.
fn symmetrize(c: &mut [Complex64]) {
    let m = c.len();
    c[0].im = 0.0;
    c[m / 2].im = 0.0;
    for i in 1..m / 2 {
        let avg = 0.5 * (c[i] + c[m - i].conj());
        c[i] = avg;
        c[m - i] = avg.conj();
    }
}

/// Fourier coefficients of a real periodic function on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.size()],
        }
    }

    /// Builds a field from FFT-ordered coefficients. The input must be
    /// Hermitian to within a relative `1e-12`; it is then symmetrized exactly.
    pub fn from_coeffs(grid: &Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        let m = grid.size();
        if coeffs.len() != m {
            return Err(Error::invalid(format!(
                "expected {m} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::invalid("non-finite coefficient"));
        }
        let scale = coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        let tol = HERMITIAN_TOL * scale;
        let asymmetric = coeffs[0].im.abs() > tol
            || coeffs[m / 2].im.abs() > tol
            || (1..m / 2).any(|i| (coeffs[i] - coeffs[m - i].conj()).norm() > tol);
        if asymmetric {
            return Err(Error::invalid("coefficients are not Hermitian-symmetric"));
        }
        symmetrize(&mut coeffs);
        Ok(Self {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Internal constructor for coefficient arrays that are Hermitian by
    /// construction.
    pub(crate) fn from_raw(grid: &Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.size());
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    /// Trigonometric interpolant of real nodal values.
    pub fn from_values(grid: &Grid, values: &[f64]) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::invalid(format!(
                "expected {} nodal values, got {}",
                grid.size(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite nodal value"));
        }
        Ok(Self::from_raw(grid, grid.forward(values)))
    }

    /// Samples `f` at the grid nodes and interpolates.
    pub fn sample<F: Fn(f64) -> f64>(grid: &Grid, f: F) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().into_iter().map(f).collect();
        Self::from_values(grid, &values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// FFT-ordered coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of mode `k`; zero outside the grid's mode range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.grid
            .index(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    /// Nodal values `u(x_j)`.
    pub fn values(&self) -> Vec<f64> {
        self.grid.inverse(&self.coeffs)
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Applies a per-slot multiplier. The multiplier must be odd-Hermitian
    /// in the sense `m(-k) = conj(m(k))` for the result to stay real.
    pub(crate) fn map_slots<F: Fn(usize, Complex64) -> Complex64>(&self, f: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f(i, c))
            .collect();
        Self::from_raw(&self.grid, coeffs)
    }

    /// Spectral derivative `iκ_k û_k`; the Nyquist mode is zeroed.
    pub fn derivative(&self) -> Self {
        self.map_slots(|i, c| Complex64::new(0.0, self.grid.derivative_wavenumber_at(i)) * c)
    }

    /// `(1 - ∂_xx)^{-1}`, i.e. division by `1 + κ_k²`.
    pub fn helmholtz_inverse(&self) -> Self {
        self.map_slots(|i, c| c / self.grid.h1_weight_at(i))
    }

    /// Zeroes every mode with `|k| > cutoff`.
    pub fn truncated(&self, cutoff: i64) -> Self {
        self.map_slots(|i, c| {
            if self.grid.mode(i).abs() > cutoff {
                Complex64::new(0.0, 0.0)
            } else {
                c
            }
        })
    }

    /// Coefficients of `u u_x = ½ (u²)_x`, computed pseudospectrally. With
    /// `dealias` the 2/3 rule is applied before and after squaring.
    pub fn nonlinear_term(&self, dealias: bool) -> Self {
        let cutoff = (self.grid.size() / 3) as i64;
        let source = if dealias {
            self.truncated(cutoff)
        } else {
            self.clone()
        };
        let squares: Vec<f64> = source.values().into_iter().map(|v| v * v).collect();
        let mut square = Self::from_raw(&self.grid, self.grid.forward(&squares));
        if dealias {
            square = square.truncated(cutoff);
        }
        square
            .map_slots(|i, c| Complex64::new(0.0, 0.5 * self.grid.derivative_wavenumber_at(i)) * c)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_slots(|_, c| c * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        self.map_slots(|i, c| c + other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        self.map_slots(|i, c| c - other.coeffs[i])
    }

    /// Discrete l² norm of the coefficient vector.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// l² distance between coefficient vectors.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Real coefficient inner product `Σ_k Re(û_k conj(v̂_k))`, which equals the
    /// spatial mean of `u v`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(p: f64, x0: f64, m: usize) -> Grid {
        Grid::new(p, x0, m).unwrap()
    }

    #[test]
    fn paper_grid_and_wavenumbers() {
        let g = grid(100.0, -50.0, 1024);
        assert_eq!(g.size(), 1024);
        assert_abs_diff_eq!(g.node(0), -50.0);
        assert_abs_diff_eq!(g.node(512), 0.0, epsilon = 1e-12);

        let g = grid(2.0 * PI, 0.0, 4);
        let kappas: Vec<f64> = (-2..2).map(|k| g.wavenumber(k)).collect();
        for (kap, expect) in kappas.iter().zip([-2.0, -1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*kap, expect, epsilon = 1e-15);
        }
        for k in 1..2 {
            assert_eq!(g.wavenumber(-k), -g.wavenumber(k));
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            Grid::new(100.0, -50.0, 1000),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            Grid::new(100.0, -50.0, 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            Grid::new(0.0, 0.0, 8),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            Grid::new(-1.0, 0.0, 8),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn index_and_mode_are_inverse() {
        let g = grid(1.0, 0.0, 16);
        for i in 0..16 {
            assert_eq!(g.index(g.mode(i)), Some(i));
        }
        assert_eq!(g.mode(g.nyquist_index()), -8);
        assert_eq!(g.index(8), None);
    }

    #[test]
    fn constant_samples_to_mean_mode() {
        let g = grid(100.0, -50.0, 64);
        let u = SpectralField::sample(&g, |_| 1.0).unwrap();
        assert_abs_diff_eq!(u.coeff(0).re, 1.0, epsilon = 1e-15);
        for i in 1..64 {
            assert!(u.coeffs()[i].norm() < 1e-15);
        }
    }

    #[test]
    fn sine_samples_to_single_mode() {
        let g = grid(2.0 * PI, 0.0, 16);
        let u = SpectralField::sample(&g, |x| x.sin()).unwrap();
        assert!((u.coeff(1) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((u.coeff(-1) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        for k in -8i64..8 {
            if k.abs() != 1 {
                assert!(u.coeff(k).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gaussian_matches_naive_dft() {
        let g = grid(100.0, -50.0, 256);
        let sigma = 7.0;
        let f = |x: f64| (-(x * x) / (sigma * sigma)).exp();
        let u = SpectralField::sample(&g, f).unwrap();
        let m = g.size();
        let values: Vec<f64> = g.nodes().into_iter().map(f).collect();
        for i in 0..m {
            let k = g.mode(i) as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let theta = -2.0 * PI * k * j as f64 / m as f64;
                acc += Complex64::from_polar(*v, theta);
            }
            acc /= m as f64;
            assert!((acc - u.coeffs()[i]).norm() < 1e-12, "mode {k}");
        }
    }

    #[test]
    fn derivative_of_sine_and_constant() {
        let p = 10.0;
        let g = grid(p, 0.0, 32);
        let k1 = g.wavenumber(1);
        let u = SpectralField::sample(&g, |x| (k1 * x).sin()).unwrap();
        let du = u.derivative();
        let expect = SpectralField::sample(&g, |x| k1 * (k1 * x).cos()).unwrap();
        assert!(du.l2_distance(&expect) < 1e-14);

        let c = SpectralField::sample(&g, |_| 3.0).unwrap();
        assert!(c.derivative().l2_norm() == 0.0);
    }

    #[test]
    fn derivative_zeroes_nyquist() {
        let g = grid(1.0, 0.0, 8);
        let u = SpectralField::sample(&g, |x| (8.0 * PI * x).cos()).unwrap();
        assert!(u.coeff(-4).norm() > 0.9);
        assert_eq!(u.derivative().coeff(-4), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn helmholtz_inverse_examples() {
        let g = grid(2.0 * PI, 0.0, 8);
        let c = SpectralField::sample(&g, |_| 2.5).unwrap();
        assert_eq!(c.helmholtz_inverse(), c);

        let s = SpectralField::sample(&g, |x| x.cos()).unwrap();
        let h = s.helmholtz_inverse();
        assert_abs_diff_eq!(h.coeff(1).re, 0.25, epsilon = 1e-15);

        let back = h.map_slots(|i, c| c * g.h1_weight_at(i));
        assert!(back.l2_distance(&s) < 1e-14);
    }

    #[test]
    fn nonlinear_term_of_cosine() {
        let p = 7.0;
        let g = grid(p, 0.0, 16);
        let k1 = g.wavenumber(1);
        let u = SpectralField::sample(&g, |x| (k1 * x).cos()).unwrap();
        let n = u.nonlinear_term(false);
        let expect = SpectralField::sample(&g, |x| -0.5 * k1 * (2.0 * k1 * x).sin()).unwrap();
        assert!(n.l2_distance(&expect) < 1e-14);
        for k in -8i64..8 {
            if k.abs() != 2 {
                assert!(n.coeff(k).norm() < 1e-15);
            }
        }
        assert_eq!(
            SpectralField::zeros(&g).nonlinear_term(false).l2_norm(),
            0.0
        );
    }

    #[test]
    fn from_coeffs_validates() {
        let g = grid(1.0, 0.0, 8);
        let mut c = vec![Complex64::new(0.0, 0.0); 8];
        c[1] = Complex64::new(1.0, 2.0);
        assert!(SpectralField::from_coeffs(&g, c.clone()).is_err());
        c[7] = Complex64::new(1.0, -2.0);
        assert!(SpectralField::from_coeffs(&g, c.clone()).is_ok());
        c[0] = Complex64::new(1.0, 0.5);
        assert!(SpectralField::from_coeffs(&g, c).is_err());
        assert!(SpectralField::from_coeffs(&g, vec![Complex64::default(); 4]).is_err());
    }
}
