//! Parameter matrices of the reference experiments.
//!
//! Unless stated otherwise every preset uses a soliton of speed 1.5 centred
//! at `x = 10` on the period-100 box `[-50, 50)` with 1024 nodes, the
//! Sanz-Serna scheme, `Δt = 0.01` and `t_final = 30`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::config::{DampingSpec, InitialSpec, SimulationConfig};

pub const PRESET_NAMES: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];

/// Tail rate of the smoothed band-limited symbols.
pub const BAND_TAIL_RATE: f64 = 3.0;

fn base(name: &str, damping: DampingSpec) -> SimulationConfig {
    SimulationConfig {
        name: name.to_string(),
        damping,
        ..SimulationConfig::default()
    }
}

fn band_family(prefix: &str, cutoffs: &[usize], initial: InitialSpec) -> Vec<SimulationConfig> {
    let mut out = Vec::new();
    for &n in cutoffs {
        for (tag, spec) in [
            ("band", DampingSpec::Band(n)),
            ("band_poly", DampingSpec::BandPoly(n, BAND_TAIL_RATE)),
            ("band_exp", DampingSpec::BandExp(n, BAND_TAIL_RATE)),
        ] {
            let mut cfg = base(&format!("{prefix}_{tag}_{n}"), spec);
            cfg.initial = initial.clone();
            out.push(cfg);
        }
    }
    out
}

/// Width of the gaussian datum: one tenth of the largest mode index.
pub fn gaussian_width(size: usize) -> f64 {
    (size / 2) as f64 / 10.0
}

pub fn preset(name: &str) -> Result<Vec<SimulationConfig>> {
    let cfgs = match name {
        "fig1" => {
            let mut cfg = base("fig1", DampingSpec::Power(2));
            cfg.snapshot_times = vec![0.0, 5.0, 10.0, 20.0, 30.0];
            vec![cfg]
        }
        "fig2" => vec![
            base("fig2_constant", DampingSpec::Constant(1.0)),
            base("fig2_laplacian", DampingSpec::Power(2)),
            base("fig2_bilaplacian", DampingSpec::Power(4)),
        ],
        "fig3" => vec![
            base("fig3_polydecay_1", DampingSpec::PolyDecay(1.0)),
            base("fig3_polydecay_3", DampingSpec::PolyDecay(3.0)),
            base("fig3_expdecay", DampingSpec::ExpDecay),
        ],
        "fig4" => {
            let max_mode = SimulationConfig::default().size / 2;
            let soliton = SimulationConfig::default().initial;
            band_family("fig4", &[max_mode / 4, max_mode / 16], soliton)
        }
        "fig5" => {
            let width = gaussian_width(SimulationConfig::default().size);
            let cutoffs = [
                (0.75 * width).round() as usize,
                (1.5 * width).round() as usize,
            ];
            band_family("fig5", &cutoffs, InitialSpec::Gaussian { width })
        }
        "fig6" => {
            let mut out = Vec::new();
            for (tag, period) in [("pi", PI), ("2pi", 2.0 * PI), ("3pi", 3.0 * PI)] {
                for (dtag, p) in [("laplacian", 2), ("bilaplacian", 4)] {
                    let mut cfg = base(&format!("fig6_{tag}_{dtag}"), DampingSpec::Power(p));
                    cfg.period = period;
                    cfg.origin = 0.0;
                    cfg.initial = InitialSpec::Sine;
                    cfg.t_final = 10.0;
                    out.push(cfg);
                }
            }
            out
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown preset `{other}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(cfgs)
}
