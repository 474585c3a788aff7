//! CSV time series, physical-space snapshots and run metadata.
//!
//! All numbers are written with 17 significant digits, so files are
//! bit-stable for identical runs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::norms::DiagnosticsRecord;
use crate::spectral::SpectralField;

use super::sim::{RunMetadata, TimeSeries};

pub const CSV_HEADER: &str = "t,h1_sq,gamma_sq,G,mean,sup_norm,l1_coeffs,fp_iterations,fp_residual";

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let g = r.g.map(sci).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            sci(r.t),
            sci(r.h1_sq),
            sci(r.gamma_sq),
            g,
            sci(r.mean),
            sci(r.sup_norm),
            sci(r.l1_coeffs),
            r.fp_iterations,
            sci(r.fp_residual)
        );
    }
    out
}

pub fn write_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    fs::write(path, csv_string(&series.records)).map_err(|e| Error::io(path, e))
}

/// Rows `x u`, one per grid node.
pub fn snapshot_string(field: &SpectralField) -> String {
    let grid = field.grid();
    let mut out = String::with_capacity(grid.size() * 48);
    for (x, u) in grid.nodes().iter().zip(field.values()) {
        let _ = writeln!(out, "{} {}", sci(*x), sci(u));
    }
    out
}

pub fn write_snapshot(field: &SpectralField, path: &Path) -> Result<()> {
    fs::write(path, snapshot_string(field)).map_err(|e| Error::io(path, e))
}

pub fn meta_string(meta: &RunMetadata) -> String {
    let opt = |v: Option<f64>| v.map_or("n/a".to_string(), sci);
    let mut out = String::new();
    let _ = writeln!(out, "scheme = {}", meta.scheme);
    let _ = writeln!(
        out,
        "energy_identity = {}",
        if meta.certified {
            "certified"
        } else {
            "non-certified"
        }
    );
    let _ = writeln!(out, "steps_taken = {}", meta.steps_taken);
    let _ = writeln!(out, "total_fp_iterations = {}", meta.total_fp_iterations);
    let _ = writeln!(out, "total_map_evals = {}", meta.total_map_evals);
    let _ = writeln!(out, "max_fp_iterations = {}", meta.max_fp_iterations);
    let _ = writeln!(out, "nonconverged_steps = {}", meta.nonconverged_steps);
    let _ = writeln!(
        out,
        "max_energy_residual = {}",
        sci(meta.max_energy_residual)
    );
    let _ = writeln!(
        out,
        "h1_increases = {}",
        meta.h1_increases.map_or("n/a".into(), |c| c.to_string())
    );
    let _ = writeln!(
        out,
        "max_mean_recursion_error = {}",
        sci(meta.max_mean_recursion_error)
    );
    let _ = writeln!(out, "g_identity_error = {}", opt(meta.g_identity_error));
    let _ = writeln!(
        out,
        "product_bound_margin = {}",
        opt(meta.product_bound_margin)
    );
    let _ = writeln!(
        out,
        "forced_bound_margin = {}",
        opt(meta.forced_bound_margin)
    );
    let _ = writeln!(out, "aborted = {}", meta.aborted.as_deref().unwrap_or("no"));
    out
}

/// Writes `<name>.csv`, `<name>.meta.txt`, `<name>.cfg` and one
/// `<name>_t<time>.dat` per snapshot into `dir`; returns the paths written.
pub fn write_run(series: &TimeSeries, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = &series.config.name;
    let mut written = Vec::new();

    let csv = dir.join(format!("{name}.csv"));
    write_csv(series, &csv)?;
    written.push(csv);

    let meta = dir.join(format!("{name}.meta.txt"));
    fs::write(&meta, meta_string(&series.meta)).map_err(|e| Error::io(&meta, e))?;
    written.push(meta);

    let cfg = dir.join(format!("{name}.cfg"));
    series.config.write_file(&cfg)?;
    written.push(cfg);

    for snap in &series.snapshots {
        let path = dir.join(format!("{name}_t{}.dat", snap.t));
        write_snapshot(&snap.field, &path)?;
        written.push(path);
    }
    Ok(written)
}
