//! The simulation loop and its run-time invariant checks.

use crate::error::Result;
use crate::norms::{h1_norm_sq, inv_gamma_norm_sq, DiagnosticsRecord, G_UNDEFINED_BELOW};
use crate::parallel;
use crate::spectral::SpectralField;
use crate::stepping::{energy_residual, SchemeKind, Stepper};

use super::config::{NonConvergence, SimulationConfig};

/// Relative tolerance for the per-step `H¹` monotonicity check.
pub const MONOTONICITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Snapshot {
    /// Time of the stored step (nearest step to the requested time).
    pub t: f64,
    pub field: SpectralField,
}

/// Run-level summary. Invariant checks that do not apply to the run are
/// `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunMetadata {
    pub scheme: SchemeKind,
    /// Whether the scheme carries an exact discrete energy identity.
    pub certified: bool,
    pub steps_taken: usize,
    pub total_fp_iterations: usize,
    pub total_map_evals: usize,
    pub max_fp_iterations: usize,
    pub nonconverged_steps: usize,
    /// Largest `|energy residual|` over all steps.
    pub max_energy_residual: f64,
    /// Steps where `|u|²_{H¹}` grew by more than [`MONOTONICITY_TOL`];
    /// checked for unforced runs of certified schemes.
    pub h1_increases: Option<usize>,
    /// Largest deviation of the mean from its scalar recursion.
    pub max_mean_recursion_error: f64,
    /// `max_n |h_n - e^{-2∫G²} h_0| / h_0` with a trapezoidal integral of
    /// `G²`; unforced runs only.
    pub g_identity_error: Option<f64>,
    /// `min_n (B_n - h_n)` for the product bound `B_n = h_0 Π 1/(1+2ΔtG_j²)`;
    /// unforced backward-Euler runs only.
    pub product_bound_margin: Option<f64>,
    /// `min_n (B_n - h_n)` for the forced bound
    /// `B(t) = e^{-∫G²} h_0 + ∫ e^{-∫_s^t G²} |f|²_{1/γ} ds`; forced runs
    /// whose forcing lies in the damped band only.
    pub forced_bound_margin: Option<f64>,
    pub aborted: Option<String>,
}

#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub config: SimulationConfig,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: SpectralField,
    pub meta: RunMetadata,
}

impl TimeSeries {
    pub fn last(&self) -> &DiagnosticsRecord {
        self.records
            .last()
            .expect("series always holds the initial record")
    }
}

fn g_squared(gamma_sq: f64, h1_sq: f64) -> f64 {
    if h1_sq >= G_UNDEFINED_BELOW {
        gamma_sq / h1_sq
    } else {
        0.0
    }
}

/// Integrates a validated configuration from `t = 0` to `t_final`.
///
/// A step that fails to converge under the abort policy ends the run early;
/// the partial series is returned with `meta.aborted` set.
pub fn run(cfg: &SimulationConfig) -> Result<TimeSeries> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let gamma = cfg.damping.build(&grid)?;
    let u0 = cfg.initial.build(&grid)?;
    let forcing = cfg.forcing.build(&grid)?;
    let f = forcing.as_ref();
    let stepper = Stepper::new(cfg.scheme, &gamma, &cfg.step)?;
    let n_steps = cfg.steps()?;
    let dt = cfg.step.dt;

    let mut snap_steps: Vec<usize> = cfg
        .snapshot_times
        .iter()
        .map(|t| ((t / dt).round() as usize).min(n_steps))
        .collect();
    snap_steps.sort_unstable();
    snap_steps.dedup();
    let mut snapshots = Vec::new();
    let mut take_snapshot = |n: usize, u: &SpectralField| {
        if snap_steps.binary_search(&n).is_ok() {
            snapshots.push(Snapshot {
                t: n as f64 * dt,
                field: u.clone(),
            });
        }
    };

    let first = DiagnosticsRecord::measure(0.0, &u0, &gamma, 0, 0.0)?;
    let h0 = first.h1_sq;
    let mut records = vec![first.clone()];
    take_snapshot(0, &u0);

    let kind = cfg.scheme;
    let unforced = f.is_none();
    let gamma0 = gamma.at(0);
    let mean_factor = kind.mean_factor(gamma0, dt);
    let mean_gain = dt / (1.0 + kind.theta() * dt * gamma0);
    let f0 = f.map_or(0.0, |f| f.coeff(0).re);
    let forcing_size = match f {
        Some(f) => inv_gamma_norm_sq(f, &gamma).ok(),
        None => None,
    };

    let mut meta = RunMetadata {
        scheme: kind,
        certified: kind.is_energy_certified(),
        steps_taken: 0,
        total_fp_iterations: 0,
        total_map_evals: 0,
        max_fp_iterations: 0,
        nonconverged_steps: 0,
        max_energy_residual: 0.0,
        h1_increases: (unforced && kind.is_energy_certified()).then_some(0),
        max_mean_recursion_error: 0.0,
        g_identity_error: unforced.then_some(0.0),
        product_bound_margin: (unforced && kind == SchemeKind::BackwardEuler)
            .then_some(f64::INFINITY),
        forced_bound_margin: forcing_size.map(|_| f64::INFINITY),
        aborted: None,
    };

    let mut u = u0;
    let mut h_prev = h0;
    let mut mean_prev = first.mean;
    let mut g2_prev = g_squared(first.gamma_sq, h0);
    let mut g2_integral = 0.0;
    let mut product = h0;
    let mut forced_integral = 0.0;

    for n in 0..n_steps {
        let res = stepper.step(&u, f)?;
        meta.total_fp_iterations += res.iterations;
        meta.total_map_evals += res.map_evals;
        meta.max_fp_iterations = meta.max_fp_iterations.max(res.iterations);
        if !res.converged {
            meta.nonconverged_steps += 1;
            if cfg.on_nonconvergence == NonConvergence::Abort {
                meta.aborted = Some(format!(
                    "fixed-point solve did not converge at step {} (t = {}): residual {:e} after {} iterations",
                    n + 1,
                    (n + 1) as f64 * dt,
                    res.residual,
                    res.iterations
                ));
                break;
            }
        }
        let next = res.next;
        let er = energy_residual(kind, &u, &next, f, &gamma, dt)?;
        meta.max_energy_residual = meta.max_energy_residual.max(er.value.abs());

        let h = h1_norm_sq(&next);
        let gamma_sq = crate::norms::gamma_seminorm_sq(&next, &gamma)?;
        let mean = next.coeff(0).re;
        let predicted_mean = mean_factor * mean_prev + mean_gain * f0;
        meta.max_mean_recursion_error = meta
            .max_mean_recursion_error
            .max((mean - predicted_mean).abs());

        if let Some(count) = &mut meta.h1_increases {
            if h > h_prev * (1.0 + MONOTONICITY_TOL) {
                *count += 1;
            }
        }

        let g2 = g_squared(gamma_sq, h);
        let increment = 0.5 * dt * (g2_prev + g2);
        g2_integral += increment;
        if let Some(err) = &mut meta.g_identity_error {
            if h0 > 0.0 {
                let predicted = (-2.0 * g2_integral).exp() * h0;
                *err = err.max((h - predicted).abs() / h0);
            }
        }
        if let Some(margin) = &mut meta.product_bound_margin {
            product /= 1.0 + 2.0 * dt * g2;
            *margin = margin.min(product - h);
        }
        if let (Some(margin), Some(size)) = (&mut meta.forced_bound_margin, forcing_size) {
            let decay = (-increment).exp();
            forced_integral = decay * forced_integral + 0.5 * dt * (decay * size + size);
            let bound = (-g2_integral).exp() * h0 + forced_integral;
            *margin = margin.min(bound - h);
        }

        u = next;
        h_prev = h;
        mean_prev = mean;
        g2_prev = g2;
        meta.steps_taken = n + 1;

        let step_no = n + 1;
        if step_no % cfg.record_every == 0 || step_no == n_steps {
            records.push(DiagnosticsRecord::measure(
                step_no as f64 * dt,
                &u,
                &gamma,
                res.iterations,
                res.residual,
            )?);
        }
        take_snapshot(step_no, &u);
    }

    Ok(TimeSeries {
        config: cfg.clone(),
        records,
        snapshots,
        final_state: u,
        meta,
    })
}

/// Runs independent configurations, in parallel when the `parallel` feature
/// is enabled. Results keep the input order.
pub fn run_batch(configs: &[SimulationConfig]) -> Vec<Result<TimeSeries>> {
    parallel::map(configs, run)
}

pub fn run_batch_sequential(configs: &[SimulationConfig]) -> Vec<Result<TimeSeries>> {
    parallel::map_sequential(configs, run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::{DampingSpec, ForcingSpec, InitialSpec};
    use crate::stepping::StepConfig;

    fn small(scheme: SchemeKind, damping: DampingSpec) -> SimulationConfig {
        SimulationConfig {
            name: "t".into(),
            period: 40.0,
            origin: -20.0,
            size: 128,
            damping,
            scheme,
            step: StepConfig {
                dt: 0.05,
                fp_epsilon: 1e-12,
                ..StepConfig::default()
            },
            t_final: 2.0,
            initial: InitialSpec::Soliton {
                speed: 1.5,
                position: 0.0,
            },
            ..SimulationConfig::default()
        }
    }

    #[test]
    fn zero_datum_stays_zero() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.txt");
        std::fs::write(&path, "0\n".repeat(128)).unwrap();
        let mut cfg = small(SchemeKind::SanzSerna, DampingSpec::Constant(1.0));
        cfg.initial = InitialSpec::Custom(path);
        let ts = run(&cfg).unwrap();
        assert!(ts
            .records
            .iter()
            .all(|r| r.h1_sq == 0.0 && r.sup_norm == 0.0 && r.g.is_none()));
        assert_eq!(ts.meta.g_identity_error, Some(0.0));
    }

    #[test]
    fn records_times_and_snapshots() {
        let mut cfg = small(SchemeKind::BackwardEuler, DampingSpec::Constant(0.5));
        cfg.record_every = 7;
        cfg.snapshot_times = vec![0.0, 1.0, 2.0];
        let ts = run(&cfg).unwrap();
        let times: Vec<f64> = ts.records.iter().map(|r| r.t).collect();
        assert_eq!(times.first(), Some(&0.0));
        assert!(times.windows(2).all(|w| w[1] > w[0]));
        assert!((times.last().unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(ts.records.len(), 1 + 40 / 7 + 1);
        assert_eq!(ts.snapshots.len(), 3);
        assert_eq!(ts.meta.steps_taken, 40);
        assert!(ts.meta.aborted.is_none());
    }

    #[test]
    fn certified_runs_pass_their_checks() {
        for kind in [SchemeKind::BackwardEuler, SchemeKind::SanzSerna] {
            let ts = run(&small(kind, DampingSpec::Constant(1.0))).unwrap();
            let m = &ts.meta;
            assert!(m.certified);
            assert_eq!(m.h1_increases, Some(0));
            assert!(
                m.max_energy_residual < 1e-10,
                "{kind}: {}",
                m.max_energy_residual
            );
            assert!(m.max_mean_recursion_error < 1e-12);
            assert!(m.g_identity_error.unwrap() < 0.05);
        }
        let ts = run(&small(
            SchemeKind::BackwardEuler,
            DampingSpec::Constant(1.0),
        ))
        .unwrap();
        assert!(ts.meta.product_bound_margin.unwrap() >= -1e-10);
        let ts = run(&small(
            SchemeKind::CrankNicolson,
            DampingSpec::Constant(1.0),
        ))
        .unwrap();
        assert!(!ts.meta.certified);
        assert_eq!(ts.meta.h1_increases, None);
    }

    #[test]
    fn abort_and_continue_policies() {
        let mut cfg = small(SchemeKind::SanzSerna, DampingSpec::Power(2));
        cfg.step.fp_max_iter = 1;
        let ts = run(&cfg).unwrap();
        assert!(ts.meta.aborted.is_some());
        assert_eq!(ts.meta.steps_taken, 0);
        assert_eq!(ts.records.len(), 1);

        cfg.on_nonconvergence = NonConvergence::Continue;
        let ts = run(&cfg).unwrap();
        assert!(ts.meta.aborted.is_none());
        assert_eq!(ts.meta.nonconverged_steps, 40);
    }

    #[test]
    fn forced_run_respects_bound() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        let grid = small(SchemeKind::SanzSerna, DampingSpec::Constant(1.0))
            .grid()
            .unwrap();
        let vals: Vec<String> = grid
            .nodes()
            .iter()
            .map(|x| format!("{}", 0.1 + 0.2 * (std::f64::consts::PI * x / 20.0).cos()))
            .collect();
        std::fs::write(&path, vals.join("\n")).unwrap();
        let mut cfg = small(SchemeKind::SanzSerna, DampingSpec::Constant(1.0));
        cfg.forcing = ForcingSpec::Custom(path);
        let ts = run(&cfg).unwrap();
        assert!(ts.meta.max_mean_recursion_error < 1e-12);
        assert!(ts.meta.forced_bound_margin.unwrap() > 0.0);
        assert!(ts.meta.g_identity_error.is_none());
        assert!(ts.meta.max_energy_residual < 1e-10);
    }

    #[test]
    fn batch_matches_sequential() {
        let cfgs = vec![
            small(SchemeKind::SanzSerna, DampingSpec::Constant(1.0)),
            small(SchemeKind::SanzSerna, DampingSpec::Power(2)),
        ];
        let a = run_batch(&cfgs);
        let b = run_batch_sequential(&cfgs);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.as_ref().unwrap().records, y.as_ref().unwrap().records);
        }
    }
}
