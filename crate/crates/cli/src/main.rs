use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dbbm_core::runner::{self, output, Overrides, SimulationConfig, TimeSeries};
use dbbm_core::SchemeKind;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "dbbm", version, about = "Damped BBM pseudospectral simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single configuration file.
    Run {
        config: PathBuf,
        /// Output directory (defaults to the config's output_dir, then `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run every configuration of a named preset.
    Preset {
        /// One of fig1 ... fig6.
        name: String,
        /// Output directory (defaults to `out/<name>`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Validate a configuration and report damping properties without running.
    Check {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    tfinal: Option<f64>,
    /// forward-euler, backward-euler, sanz-serna or crank-nicolson.
    #[arg(long)]
    scheme: Option<SchemeKind>,
    /// Use the extrapolated fixed-point update.
    #[arg(long)]
    accelerate: bool,
    /// Apply the 2/3 rule to the nonlinear term.
    #[arg(long)]
    dealias: bool,
    /// Fixed-point residual tolerance.
    #[arg(long)]
    eps: Option<f64>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides {
            dt: a.dt,
            t_final: a.tfinal,
            scheme: a.scheme,
            accelerate: a.accelerate,
            dealias: a.dealias,
            fp_epsilon: a.eps,
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

fn config_error(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        msg: format!("config error: {e}"),
    }
}

fn failure(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        msg: format!("error: {e}"),
    }
}

/// Loads, overrides and fully builds a configuration so that every input
/// problem surfaces before any stepping.
fn load(path: &Path, overrides: Overrides) -> Result<SimulationConfig, Failure> {
    let mut cfg = SimulationConfig::from_file(path).map_err(config_error)?;
    overrides.apply(&mut cfg);
    prepare(&cfg)?;
    Ok(cfg)
}

fn prepare(cfg: &SimulationConfig) -> Result<(), Failure> {
    cfg.validate().map_err(config_error)?;
    let grid = cfg.grid().map_err(config_error)?;
    cfg.damping.build(&grid).map_err(config_error)?;
    cfg.initial.build(&grid).map_err(config_error)?;
    cfg.forcing.build(&grid).map_err(config_error)?;
    Ok(())
}

fn report(series: &TimeSeries, dir: &Path) -> Result<bool, Failure> {
    output::write_run(series, dir).map_err(failure)?;
    let last = series.last();
    let m = &series.meta;
    println!(
        "{}: t = {} |u|^2_H1 = {:.6e} mean = {:.6e} fp iterations = {}{}",
        series.config.name,
        last.t,
        last.h1_sq,
        last.mean,
        m.total_fp_iterations,
        if m.certified {
            ""
        } else {
            " (non-certified scheme)"
        }
    );
    if let Some(msg) = &m.aborted {
        eprintln!("{}: aborted: {msg}", series.config.name);
        return Ok(false);
    }
    Ok(true)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            out,
            overrides,
        } => {
            let cfg = load(&config, overrides.into())?;
            let dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let series = runner::run(&cfg).map_err(failure)?;
            if !report(&series, &dir)? {
                return Err(Failure {
                    code: EXIT_NONCONVERGENCE,
                    msg: "run aborted on non-convergence".into(),
                });
            }
        }
        Command::Preset {
            name,
            out,
            overrides,
        } => {
            let overrides: Overrides = overrides.into();
            let mut cfgs = runner::preset(&name).map_err(config_error)?;
            for cfg in &mut cfgs {
                overrides.apply(cfg);
                prepare(cfg)?;
            }
            let dir = out.unwrap_or_else(|| Path::new("out").join(&name));
            let mut all_ok = true;
            for result in runner::run_batch(&cfgs) {
                let series = result.map_err(failure)?;
                all_ok &= report(&series, &dir)?;
            }
            if !all_ok {
                return Err(Failure {
                    code: EXIT_NONCONVERGENCE,
                    msg: "at least one run aborted on non-convergence".into(),
                });
            }
        }
        Command::Check { config, overrides } => {
            let cfg = load(&config, overrides.into())?;
            let rep = runner::check(&cfg).map_err(config_error)?;
            print!("{rep}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
