//! Flat `key = value` run configuration.
//!
//! ```text
//! # soliton under laplacian damping
//! name = soliton_lap
//! period = 100
//! origin = -50
//! size = 1024
//! damping = power:2
//! initial = soliton:1.5:10
//! scheme = sanz-serna
//! dt = 0.01
//! t_final = 30
//! ```
//!
//! Every key is optional; missing keys take the values of
//! [`SimulationConfig::default`]. Relative file paths inside `custom:` specs
//! are resolved against the directory of the config file.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::damping::{DampingSymbol, Tail};
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};
use crate::stepping::{SchemeKind, StepConfig};

use super::init;

#[derive(Clone, Debug, PartialEq)]
pub enum DampingSpec {
    Constant(f64),
    Power(u32),
    PolyDecay(f64),
    ExpDecay,
    Band(usize),
    BandExp(usize, f64),
    BandPoly(usize, f64),
    /// One value per line for modes `0..=M/2`.
    Custom(PathBuf),
}

impl DampingSpec {
    pub fn build(&self, grid: &Grid) -> Result<DampingSymbol> {
        match self {
            DampingSpec::Constant(g) => DampingSymbol::constant(grid, *g),
            DampingSpec::Power(p) => DampingSymbol::power(grid, *p),
            DampingSpec::PolyDecay(a) => DampingSymbol::poly_decay(grid, *a),
            DampingSpec::ExpDecay => Ok(DampingSymbol::exp_decay(grid)),
            DampingSpec::Band(n) => DampingSymbol::band_limited(grid, *n, Tail::None),
            DampingSpec::BandExp(n, a) => DampingSymbol::band_limited(grid, *n, Tail::Exp(*a)),
            DampingSpec::BandPoly(n, a) => DampingSymbol::band_limited(grid, *n, Tail::Poly(*a)),
            DampingSpec::Custom(path) => {
                let half = read_column(path)?;
                DampingSymbol::from_half_spectrum(grid, &half)
            }
        }
    }

    fn resolve(&mut self, base: &Path) {
        if let DampingSpec::Custom(p) = self {
            *p = resolve_path(base, p);
        }
    }
}

impl fmt::Display for DampingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DampingSpec::Constant(g) => write!(f, "constant:{g}"),
            DampingSpec::Power(p) => write!(f, "power:{p}"),
            DampingSpec::PolyDecay(a) => write!(f, "polydecay:{a}"),
            DampingSpec::ExpDecay => write!(f, "expdecay"),
            DampingSpec::Band(n) => write!(f, "band:{n}"),
            DampingSpec::BandExp(n, a) => write!(f, "band_exp:{n}:{a}"),
            DampingSpec::BandPoly(n, a) => write!(f, "band_poly:{n}:{a}"),
            DampingSpec::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

impl FromStr for DampingSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (head, rest) = split_head(s);
        let args: Vec<&str> = rest.map(|r| r.split(':').collect()).unwrap_or_default();
        let spec = match (head, args.as_slice()) {
            ("constant", [g]) => DampingSpec::Constant(num(g)?),
            ("power", [p]) => DampingSpec::Power(num(p)?),
            ("polydecay", [a]) => DampingSpec::PolyDecay(num(a)?),
            ("expdecay", []) => DampingSpec::ExpDecay,
            ("band", [n]) => DampingSpec::Band(num(n)?),
            ("band_exp", [n, a]) => DampingSpec::BandExp(num(n)?, num(a)?),
            ("band_poly", [n, a]) => DampingSpec::BandPoly(num(n)?, num(a)?),
            ("custom", _) if rest.is_some_and(|r| !r.is_empty()) => {
                DampingSpec::Custom(PathBuf::from(rest.unwrap_or_default()))
            }
            _ => return Err(format!("unrecognized damping spec `{s}`")),
        };
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    Soliton {
        speed: f64,
        position: f64,
    },
    Gaussian {
        width: f64,
    },
    Sine,
    /// Nodal values, one per line (or `x u` pairs).
    Custom(PathBuf),
}

impl InitialSpec {
    pub fn build(&self, grid: &Grid) -> Result<SpectralField> {
        match self {
            InitialSpec::Soliton { speed, position } => init::soliton(grid, *speed, *position),
            InitialSpec::Gaussian { width } => init::gaussian(grid, *width),
            InitialSpec::Sine => init::sine(grid),
            InitialSpec::Custom(path) => init::from_file(grid, path),
        }
    }
}

impl fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialSpec::Soliton { speed, position } => write!(f, "soliton:{speed}:{position}"),
            InitialSpec::Gaussian { width } => write!(f, "gaussian:{width}"),
            InitialSpec::Sine => write!(f, "sine"),
            InitialSpec::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

impl FromStr for InitialSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (head, rest) = split_head(s);
        let args: Vec<&str> = rest.map(|r| r.split(':').collect()).unwrap_or_default();
        Ok(match (head, args.as_slice()) {
            ("soliton", [c, d]) => InitialSpec::Soliton {
                speed: num(c)?,
                position: num(d)?,
            },
            ("gaussian", [w]) => InitialSpec::Gaussian { width: num(w)? },
            ("sine", []) => InitialSpec::Sine,
            ("custom", _) if rest.is_some_and(|r| !r.is_empty()) => {
                InitialSpec::Custom(PathBuf::from(rest.unwrap_or_default()))
            }
            _ => return Err(format!("unrecognized initial datum `{s}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ForcingSpec {
    None,
    /// Time-independent nodal values, same format as a custom initial datum.
    Custom(PathBuf),
}

impl ForcingSpec {
    pub fn build(&self, grid: &Grid) -> Result<Option<SpectralField>> {
        match self {
            ForcingSpec::None => Ok(None),
            ForcingSpec::Custom(path) => init::from_file(grid, path).map(Some),
        }
    }
}

impl fmt::Display for ForcingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForcingSpec::None => write!(f, "none"),
            ForcingSpec::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

impl FromStr for ForcingSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match split_head(s) {
            ("none", None) => Ok(ForcingSpec::None),
            ("custom", Some(p)) if !p.is_empty() => Ok(ForcingSpec::Custom(PathBuf::from(p))),
            _ => Err(format!("unrecognized forcing `{s}`")),
        }
    }
}

/// What to do when a fixed-point solve hits its iteration cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NonConvergence {
    #[default]
    Abort,
    Continue,
}

impl fmt::Display for NonConvergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonConvergence::Abort => "abort",
            NonConvergence::Continue => "continue",
        })
    }
}

impl FromStr for NonConvergence {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "abort" => Ok(NonConvergence::Abort),
            "continue" => Ok(NonConvergence::Continue),
            _ => Err(format!("expected `abort` or `continue`, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub name: String,
    pub period: f64,
    pub origin: f64,
    pub size: usize,
    pub damping: DampingSpec,
    pub scheme: SchemeKind,
    pub step: StepConfig,
    pub t_final: f64,
    pub initial: InitialSpec,
    pub forcing: ForcingSpec,
    /// Record diagnostics every this many steps (the final step is always recorded).
    pub record_every: usize,
    pub snapshot_times: Vec<f64>,
    pub output_dir: Option<PathBuf>,
    pub on_nonconvergence: NonConvergence,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            period: 100.0,
            origin: -50.0,
            size: 1024,
            damping: DampingSpec::Power(2),
            scheme: SchemeKind::SanzSerna,
            step: StepConfig::default(),
            t_final: 30.0,
            initial: InitialSpec::Soliton {
                speed: 1.5,
                position: 10.0,
            },
            forcing: ForcingSpec::None,
            record_every: 1,
            snapshot_times: Vec::new(),
            output_dir: None,
            on_nonconvergence: NonConvergence::Abort,
        }
    }
}

const KEYS: &[&str] = &[
    "name",
    "period",
    "origin",
    "size",
    "damping",
    "scheme",
    "dt",
    "t_final",
    "fp_epsilon",
    "fp_max_iter",
    "accelerate",
    "dealias",
    "nonlinear",
    "initial",
    "forcing",
    "record_every",
    "snapshot_times",
    "output_dir",
    "on_nonconvergence",
];

impl SimulationConfig {
    /// Parses config text. Relative `custom:` paths are joined onto `base`
    /// when given.
    pub fn parse_str(text: &str, base: Option<&Path>) -> Result<Self> {
        Self::parse_inner(text, base, None)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse_inner(&text, Some(base), Some(path))
    }

    fn parse_inner(text: &str, base: Option<&Path>, path: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| Error::Parse {
                path: path.map(Path::to_path_buf),
                line,
                msg,
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if seen.contains(&key) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            seen.push(key);
            cfg.set(key, value).map_err(err)?;
        }
        if let Some(base) = base {
            cfg.resolve_paths(base);
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "name" => self.name = value.to_string(),
            "period" => self.period = num(value)?,
            "origin" => self.origin = num(value)?,
            "size" => self.size = num(value)?,
            "damping" => self.damping = value.parse()?,
            "scheme" => self.scheme = value.parse().map_err(|e: Error| e.to_string())?,
            "dt" => self.step.dt = num(value)?,
            "t_final" => self.t_final = num(value)?,
            "fp_epsilon" => self.step.fp_epsilon = num(value)?,
            "fp_max_iter" => self.step.fp_max_iter = num(value)?,
            "accelerate" => self.step.accelerate = flag(value)?,
            "dealias" => self.step.dealias = flag(value)?,
            "nonlinear" => self.step.nonlinear = flag(value)?,
            "initial" => self.initial = value.parse()?,
            "forcing" => self.forcing = value.parse()?,
            "record_every" => self.record_every = num(value)?,
            "snapshot_times" => {
                self.snapshot_times = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(num)
                    .collect::<std::result::Result<_, _>>()?
            }
            "output_dir" => {
                self.output_dir = (!value.is_empty()).then(|| PathBuf::from(value));
            }
            "on_nonconvergence" => self.on_nonconvergence = value.parse()?,
            _ => unreachable!("key list checked by caller"),
        }
        Ok(())
    }

    fn resolve_paths(&mut self, base: &Path) {
        self.damping.resolve(base);
        if let InitialSpec::Custom(p) = &mut self.initial {
            *p = resolve_path(base, p);
        }
        if let ForcingSpec::Custom(p) = &mut self.forcing {
            *p = resolve_path(base, p);
        }
        if let Some(p) = &mut self.output_dir {
            *p = resolve_path(base, p);
        }
    }

    /// Serializes to the text format read by [`SimulationConfig::parse_str`].
    pub fn to_text(&self) -> String {
        let times: Vec<String> = self.snapshot_times.iter().map(f64::to_string).collect();
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("name", self.name.clone());
        put("period", self.period.to_string());
        put("origin", self.origin.to_string());
        put("size", self.size.to_string());
        put("damping", self.damping.to_string());
        put("scheme", self.scheme.to_string());
        put("dt", self.step.dt.to_string());
        put("t_final", self.t_final.to_string());
        put("fp_epsilon", self.step.fp_epsilon.to_string());
        put("fp_max_iter", self.step.fp_max_iter.to_string());
        put("accelerate", self.step.accelerate.to_string());
        put("dealias", self.step.dealias.to_string());
        put("nonlinear", self.step.nonlinear.to_string());
        put("initial", self.initial.to_string());
        put("forcing", self.forcing.to_string());
        put("record_every", self.record_every.to_string());
        put("snapshot_times", times.join(", "));
        if let Some(dir) = &self.output_dir {
            put("output_dir", dir.display().to_string());
        }
        put("on_nonconvergence", self.on_nonconvergence.to_string());
        out
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.period, self.origin, self.size)
    }

    /// Number of time steps; `t_final` must be a whole multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        let ratio = self.t_final / self.step.dt;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::invalid(format!(
                "t_final = {} is not a positive multiple of dt = {}",
                self.t_final, self.step.dt
            )));
        }
        Ok(n as usize)
    }

    /// Checks scalar invariants; does not touch custom files.
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        {
            return Err(Error::invalid(format!(
                "run name `{}` must be nonempty and use only [A-Za-z0-9_.-]",
                self.name
            )));
        }
        self.step.validate()?;
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::invalid(format!(
                "t_final must be > 0, got {}",
                self.t_final
            )));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every must be >= 1"));
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|t| !(**t >= 0.0 && **t <= self.t_final))
        {
            return Err(Error::invalid(format!(
                "snapshot time {t} outside [0, {}]",
                self.t_final
            )));
        }
        self.grid()?;
        self.steps()?;
        Ok(())
    }
}

/// Command-line overrides applied on top of a parsed config.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub scheme: Option<SchemeKind>,
    pub accelerate: bool,
    pub dealias: bool,
    pub fp_epsilon: Option<f64>,
}

impl Overrides {
    /// Applies the overrides; a shortened `t_final` drops snapshot times
    /// beyond it.
    pub fn apply(&self, cfg: &mut SimulationConfig) {
        if let Some(dt) = self.dt {
            cfg.step.dt = dt;
        }
        if let Some(t) = self.t_final {
            cfg.t_final = t;
            cfg.snapshot_times.retain(|&s| s <= t);
        }
        if let Some(s) = self.scheme {
            cfg.scheme = s;
        }
        if self.accelerate {
            cfg.step.accelerate = true;
        }
        if self.dealias {
            cfg.step.dealias = true;
        }
        if let Some(e) = self.fp_epsilon {
            cfg.step.fp_epsilon = e;
        }
    }
}

fn split_head(s: &str) -> (&str, Option<&str>) {
    match s.trim().split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (s.trim(), None),
    }
}

fn num<T: FromStr>(s: &str) -> std::result::Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid number `{s}`"))
}

fn flag(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

fn resolve_path(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Reads one number per line; blank lines and `#` comments are skipped. With
/// several whitespace-separated columns the last one is taken.
pub(crate) fn read_column(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        let Some(last) = content.split_whitespace().last() else {
            continue;
        };
        let v = last.parse::<f64>().map_err(|_| Error::Parse {
            path: Some(path.to_path_buf()),
            line: idx + 1,
            msg: format!("invalid number `{last}`"),
        })?;
        out.push(v);
    }
    Ok(out)
}
