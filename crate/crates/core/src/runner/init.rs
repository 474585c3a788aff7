//! Initial data.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

use super::config::read_column;

/// Solitary wave `-3(1-c) sech²(½√((c-1)/c) (x-d))` of speed `c > 1`
/// centred at `d`.
pub fn soliton(grid: &Grid, speed: f64, position: f64) -> Result<SpectralField> {
    if !(speed.is_finite() && speed > 1.0) {
        return Err(Error::invalid(format!(
            "soliton speed must be > 1, got {speed}"
        )));
    }
    if !position.is_finite() {
        return Err(Error::invalid("soliton position must be finite"));
    }
    let amp = 3.0 * (speed - 1.0);
    let rate = 0.5 * ((speed - 1.0) / speed).sqrt();
    SpectralField::sample(grid, |x| {
        let s = 1.0 / (rate * (x - position)).cosh();
        amp * s * s
    })
}

/// `e^{-x²/σ²}`.
pub fn gaussian(grid: &Grid, width: f64) -> Result<SpectralField> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::invalid(format!(
            "gaussian width must be > 0, got {width}"
        )));
    }
    SpectralField::sample(grid, |x| (-(x * x) / (width * width)).exp())
}

/// `sin(2πx/P)`, the fundamental mode of the grid.
pub fn sine(grid: &Grid) -> Result<SpectralField> {
    let p = grid.period();
    SpectralField::sample(grid, |x| (2.0 * PI * x / p).sin())
}

/// Nodal values read from a file, one per line or as `x u` rows.
pub fn from_file(grid: &Grid, path: &Path) -> Result<SpectralField> {
    let values = read_column(path)?;
    if values.len() != grid.size() {
        return Err(Error::invalid(format!(
            "{}: expected {} nodal values, found {}",
            path.display(),
            grid.size(),
            values.len()
        )));
    }
    SpectralField::from_values(grid, &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::mean_value;
    use approx::assert_abs_diff_eq;

    #[test]
    fn soliton_peak_and_mean() {
        let g = Grid::new(128.0, -64.0, 1024).unwrap();
        let vals = soliton(&g, 1.5, 10.0).unwrap().values();
        let j = g.nodes().iter().position(|&x| x == 10.0).unwrap();
        assert_abs_diff_eq!(vals[j], 1.5, epsilon = 1e-12);
        assert!(vals.iter().all(|&v| v <= 1.5 + 1e-12));

        let g = Grid::new(100.0, -50.0, 1024).unwrap();
        let u = soliton(&g, 1.5, 10.0).unwrap();
        let vals = u.values();
        // Trapezoidal rule on the periodic grid.
        let trap = vals.iter().sum::<f64>() * g.spacing() / g.period();
        assert_abs_diff_eq!(mean_value(&u), trap, epsilon = 1e-12);
        assert!(soliton(&g, 1.0, 0.0).is_err());
        assert!(soliton(&g, 0.5, 0.0).is_err());
    }

    #[test]
    fn gaussian_and_sine() {
        let g = Grid::new(2.0 * PI, -PI, 32).unwrap();
        let u = gaussian(&g, 0.7).unwrap();
        assert_abs_diff_eq!(u.values()[16], 1.0, epsilon = 1e-14);
        assert!(gaussian(&g, 0.0).is_err());

        let g = Grid::new(3.0, 0.0, 16).unwrap();
        let s = sine(&g).unwrap();
        for i in 0..16 {
            let k = g.mode(i);
            let c = s.coeffs()[i];
            let expect = match k {
                1 => -0.5,
                -1 => 0.5,
                _ => 0.0,
            };
            assert_abs_diff_eq!(c.re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(c.im, expect, epsilon = 1e-15);
        }
    }

    #[test]
    fn nodal_file() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(1.0, 0.0, 4).unwrap();
        let path = dir.path().join("u.txt");
        std::fs::write(&path, "0 1\n0.25 2\n0.5 3\n0.75 4\n").unwrap();
        assert_eq!(
            from_file(&g, &path).unwrap().values(),
            vec![1.0, 2.0, 3.0, 4.0]
        );
        std::fs::write(&path, "1\n2\n").unwrap();
        assert!(from_file(&g, &path).is_err());
        std::fs::write(&path, "1\nx\n3\n4\n").unwrap();
        assert!(matches!(
            from_file(&g, &path),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
