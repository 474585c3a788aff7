#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use dbbm_core::{Grid, SpectralField};

/// Random real field with coefficients decaying like `(1+|k|)^{-decay}`,
/// supported on `|k| <= band` (no Nyquist content).
pub fn random_field<R: Rng>(rng: &mut R, grid: &Grid, band: usize, decay: f64) -> SpectralField {
    let m = grid.size();
    let band = band.min(m / 2 - 1);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
    coeffs[0] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
    for k in 1..=band {
        let scale = (1.0 + k as f64).powf(-decay);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        coeffs[k] = c;
        coeffs[m - k] = c.conj();
    }
    SpectralField::from_coeffs(grid, coeffs).expect("hermitian by construction")
}

/// Same as [`random_field`] with the mean removed.
pub fn random_zero_mean<R: Rng>(
    rng: &mut R,
    grid: &Grid,
    band: usize,
    decay: f64,
) -> SpectralField {
    let u = random_field(rng, grid, band, decay);
    let mut c = u.into_coeffs();
    c[0] = Complex64::new(0.0, 0.0);
    SpectralField::from_coeffs(grid, c).unwrap()
}
