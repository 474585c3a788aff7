//! Damping symbols `γ_k` and the analytic predicates evaluated on them.
//!
//! Each family records whether its formula consumes the integer mode index
//! `|k|` or the physical wavenumber `κ_k = 2πk/P`. Power laws discretize
//! `-Δ` and `Δ²` and therefore use `κ_k`; the decaying and band-limited
//! families are defined on the integer index.

use std::fmt;

use crate::error::{Error, Result};
use crate::parallel;
use crate::spectral::Grid;

/// Which variable a family formula is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KConvention {
    IndexK,
    PhysicalK,
}

/// Tail of a band-limited symbol beyond the cutoff `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail {
    None,
    Exp(f64),
    Poly(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DampingFamily {
    Constant { level: f64 },
    Power { exponent: u32 },
    PolyDecay { alpha: f64 },
    ExpDecay,
    BandLimited { cutoff: usize },
    BandLimitedExp { cutoff: usize, rate: f64 },
    BandLimitedPoly { cutoff: usize, rate: f64 },
    Custom,
}

impl DampingFamily {
    pub fn convention(&self) -> KConvention {
        match self {
            DampingFamily::Power { .. } => KConvention::PhysicalK,
            _ => KConvention::IndexK,
        }
    }

    /// Whether `Σ_{k∈ℤ} 1/γ_k` converges for the untruncated family. `None`
    /// when unknown (custom symbols). The mean mode of power laws is
    /// excluded, so `Power` reports convergence for `p >= 2`.
    pub fn inverse_sum_converges(&self) -> Option<bool> {
        match self {
            DampingFamily::Power { exponent } => Some(*exponent >= 2),
            // 1/γ_k is constant or grows with |k|.
            DampingFamily::Constant { .. }
            | DampingFamily::PolyDecay { .. }
            | DampingFamily::ExpDecay
            | DampingFamily::BandLimited { .. }
            | DampingFamily::BandLimitedExp { .. }
            | DampingFamily::BandLimitedPoly { .. } => Some(false),
            DampingFamily::Custom => None,
        }
    }
}

impl fmt::Display for DampingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DampingFamily::Constant { level } => write!(f, "constant:{level}"),
            DampingFamily::Power { exponent } => write!(f, "power:{exponent}"),
            DampingFamily::PolyDecay { alpha } => write!(f, "polydecay:{alpha}"),
            DampingFamily::ExpDecay => write!(f, "expdecay"),
            DampingFamily::BandLimited { cutoff } => write!(f, "band:{cutoff}"),
            DampingFamily::BandLimitedExp { cutoff, rate } => write!(f, "band_exp:{cutoff}:{rate}"),
            DampingFamily::BandLimitedPoly { cutoff, rate } => {
                write!(f, "band_poly:{cutoff}:{rate}")
            }
            DampingFamily::Custom => write!(f, "custom"),
        }
    }
}

/// Nonnegative even Fourier multiplier `γ_k`, stored in FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct DampingSymbol {
    grid: Grid,
    values: Vec<f64>,
    family: DampingFamily,
}

/// Grid truncation of `Σ 1/γ_k`, with the family's analytic verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseSum {
    /// `None` when some `γ_k` vanishes on the grid.
    pub grid_sum: Option<f64>,
    pub analytic_converges: Option<bool>,
}

/// Smallest `C` with `√γ_{k+j} <= C (√γ_k + √γ_j)` over grid pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Subadditivity {
    Finite(f64),
    Unbounded,
}

impl Subadditivity {
    pub fn constant(self) -> Result<f64> {
        match self {
            Subadditivity::Finite(c) => Ok(c),
            Subadditivity::Unbounded => Err(Error::NoFiniteConstant),
        }
    }
}

impl DampingSymbol {
    fn from_family<F: Fn(i64, f64) -> f64>(grid: &Grid, family: DampingFamily, f: F) -> Self {
        let values = (0..grid.size())
            .map(|i| f(grid.mode(i).abs(), grid.wavenumber_at(i).abs()))
            .collect();
        Self {
            grid: grid.clone(),
            values,
            family,
        }
    }

    /// Weak damping `γ_k = γ`.
    pub fn constant(grid: &Grid, level: f64) -> Result<Self> {
        if !(level.is_finite() && level >= 0.0) {
            return Err(Error::invalid(format!(
                "constant damping must be >= 0, got {level}"
            )));
        }
        Ok(Self::from_family(
            grid,
            DampingFamily::Constant { level },
            |_, _| level,
        ))
    }

    /// `γ_k = κ_k^p` for even `p`; `p = 2` is the Laplacian, `p = 4` the
    /// bilaplacian.
    pub fn power(grid: &Grid, exponent: u32) -> Result<Self> {
        if exponent == 0 || !exponent.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "power exponent must be a positive even integer, got {exponent}"
            )));
        }
        Ok(Self::from_family(
            grid,
            DampingFamily::Power { exponent },
            |_, kappa| kappa.powi(exponent as i32),
        ))
    }

    /// `γ_k = (1 + |k|)^{-α}`.
    pub fn poly_decay(grid: &Grid, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!(
                "decay exponent must be > 0, got {alpha}"
            )));
        }
        Ok(Self::from_family(
            grid,
            DampingFamily::PolyDecay { alpha },
            |k, _| (1.0 + k as f64).powf(-alpha),
        ))
    }

    /// `γ_k = e^{-|k|}`.
    pub fn exp_decay(grid: &Grid) -> Self {
        Self::from_family(grid, DampingFamily::ExpDecay, |k, _| (-(k as f64)).exp())
    }

    /// Indicator of `|k| <= N`, optionally continued beyond `N` by an
    /// exponential `e^{-a(|k|-N)}` or polynomial `(1 + |k| - N)^{-a}` tail.
    pub fn band_limited(grid: &Grid, cutoff: usize, tail: Tail) -> Result<Self> {
        if cutoff as i64 > grid.max_mode() {
            return Err(Error::invalid(format!(
                "band cutoff {cutoff} exceeds M/2 = {}",
                grid.max_mode()
            )));
        }
        let n = cutoff as i64;
        let check_rate = |a: f64| {
            if a.is_finite() && a > 0.0 {
                Ok(a)
            } else {
                Err(Error::invalid(format!("tail rate must be > 0, got {a}")))
            }
        };
        Ok(match tail {
            Tail::None => Self::from_family(grid, DampingFamily::BandLimited { cutoff }, |k, _| {
                if k <= n {
                    1.0
                } else {
                    0.0
                }
            }),
            Tail::Exp(a) => {
                let rate = check_rate(a)?;
                Self::from_family(
                    grid,
                    DampingFamily::BandLimitedExp { cutoff, rate },
                    |k, _| {
                        if k <= n {
                            1.0
                        } else {
                            (-rate * (k - n) as f64).exp()
                        }
                    },
                )
            }
            Tail::Poly(a) => {
                let rate = check_rate(a)?;
                Self::from_family(
                    grid,
                    DampingFamily::BandLimitedPoly { cutoff, rate },
                    |k, _| {
                        if k <= n {
                            1.0
                        } else {
                            (1.0 + (k - n) as f64).powf(-rate)
                        }
                    },
                )
            }
        })
    }

    /// Arbitrary symbol given in FFT order; must be nonnegative and even.
    pub fn custom(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        let m = grid.size();
        if values.len() != m {
            return Err(Error::invalid(format!(
                "expected {m} symbol values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid(format!(
                "symbol value at mode {} is negative or non-finite",
                grid.mode(i)
            )));
        }
        if let Some(i) = (1..m / 2).find(|&i| values[i] != values[m - i]) {
            return Err(Error::invalid(format!("symbol is not even at mode {i}")));
        }
        Ok(Self {
            grid: grid.clone(),
            values,
            family: DampingFamily::Custom,
        })
    }

    /// Custom symbol from values at modes `0..=M/2`, mirrored to negative modes.
    pub fn from_half_spectrum(grid: &Grid, half: &[f64]) -> Result<Self> {
        let m = grid.size();
        if half.len() != m / 2 + 1 {
            return Err(Error::invalid(format!(
                "expected {} values for modes 0..={}, got {}",
                m / 2 + 1,
                m / 2,
                half.len()
            )));
        }
        let values = (0..m)
            .map(|i| half[grid.mode(i).unsigned_abs() as usize])
            .collect();
        Self::custom(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// FFT-ordered values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn family(&self) -> &DampingFamily {
        &self.family
    }

    pub fn convention(&self) -> KConvention {
        self.family.convention()
    }

    /// `γ_k`; zero outside the grid range.
    pub fn at(&self, k: i64) -> f64 {
        self.grid.index(k).map(|i| self.values[i]).unwrap_or(0.0)
    }

    /// Grid truncation of `Σ_k 1/γ_k`.
    pub fn inverse_sum(&self) -> InverseSum {
        let grid_sum = if self.values.contains(&0.0) {
            None
        } else {
            Some(self.values.iter().map(|g| 1.0 / g).sum())
        };
        InverseSum {
            grid_sum,
            analytic_converges: self.family.inverse_sum_converges(),
        }
    }

    /// Exhaustive search for the smallest subadditivity constant over all
    /// `(k, j)` with `k`, `j`, `k + j` inside `[-M/2, M/2)`.
    ///
    /// Pairs with `γ_k = γ_j = γ_{k+j} = 0` are skipped; if `γ_k = γ_j = 0`
    /// but `γ_{k+j} > 0`, no finite constant exists.
    pub fn subadditivity_constant(&self) -> Subadditivity {
        let half = self.grid.max_mode();
        let sqrt: Vec<f64> = self.values.iter().map(|g| g.sqrt()).collect();
        let at = |k: i64| sqrt[self.grid.index(k).expect("mode in range")];
        let m = self.grid.size();
        let best = parallel::max_over_range(m, |ik| {
            let k = ik as i64 - half;
            let sk = at(k);
            let mut best = f64::NEG_INFINITY;
            for j in -half..half {
                let s = k + j;
                if s < -half || s >= half {
                    continue;
                }
                let denom = sk + at(j);
                let num = at(s);
                if denom == 0.0 {
                    if num > 0.0 {
                        return f64::INFINITY;
                    }
                    continue;
                }
                best = best.max(num / denom);
            }
            best
        });
        if best.is_infinite() && best > 0.0 {
            Subadditivity::Unbounded
        } else {
            Subadditivity::Finite(best.max(0.0))
        }
    }

    /// `ρ_N = max_{|k| >= N} β_k / γ_k` over grid modes.
    pub fn rho(&self, beta: &DampingSymbol, n: usize) -> Result<f64> {
        if self.grid != beta.grid {
            return Err(Error::GridMismatch);
        }
        let mut rho = f64::NEG_INFINITY;
        for (i, (&g, &b)) in self.values.iter().zip(&beta.values).enumerate() {
            let k = self.grid.mode(i);
            if k.unsigned_abs() < n as u64 {
                continue;
            }
            if g == 0.0 {
                return Err(Error::ZeroDamping { mode: k });
            }
            rho = rho.max(b / g);
        }
        if rho == f64::NEG_INFINITY {
            return Err(Error::invalid(format!("no grid modes with |k| >= {n}")));
        }
        Ok(rho)
    }

    /// Weight `(1 + κ_k²)^{s+1} / γ_k^s`; `+∞` where `γ_k = 0`.
    pub fn derived_weight(&self, s: f64) -> Vec<f64> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                if g == 0.0 {
                    f64::INFINITY
                } else {
                    self.grid.h1_weight_at(i).powf(s + 1.0) / g.powf(s)
                }
            })
            .collect()
    }
}
