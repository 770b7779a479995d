use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use log::{info, warn};

use nhp_core::diagnostics::{convergence_sweep, ConvergenceReport};
use nhp_core::{DiagnosticsError, NikishinSystem, Precision, Scalar};

use super::{ensure_dir, write_json, Prepared};
use crate::{exit, CliError, CliResult};

/// Fraction of solved indices below which a sweep exits with the partial-failure code.
pub const SWEEP_SUCCESS_RATIO: f64 = 0.8;

/// Runs the sweep and writes convergence.csv, convergence.json and
/// exterior_counts.json into `out`. Returns the report and the exit code.
pub fn sweep(p: &Prepared, out: &Path) -> CliResult<(ConvergenceReport, i32)> {
    let spec = p.cfg.sweep_spec().map_err(CliError::config)?;
    let report = match p.precision {
        Precision::Exact => run(&p.system, &spec)?,
        _ => run(&p.float_system()?, &spec)?,
    };
    for f in &report.failures {
        warn!("n = {}: {}", f.n, f.error);
    }
    ensure_dir(out)?;
    let csv_path = out.join("convergence.csv");
    let file = File::create(&csv_path).map_err(|e| CliError::new(exit::FAILURE, e))?;
    report.write_csv(BufWriter::new(file)).map_err(|e| CliError::new(exit::FAILURE, e))?;
    write_json(&out.join("convergence.json"), &report)?;
    write_json(&out.join("exterior_counts.json"), &report.exterior)?;
    info!("solved {}/{} indices; wrote {}", report.solved, report.attempted, csv_path.display());
    let code = if report.success_ratio() >= SWEEP_SUCCESS_RATIO { exit::OK } else { exit::PARTIAL_SWEEP };
    Ok((report, code))
}

fn run<T: Scalar>(system: &NikishinSystem<T>, spec: &nhp_core::diagnostics::SweepSpec) -> CliResult<ConvergenceReport> {
    convergence_sweep(system, spec).map_err(|e| match e {
        DiagnosticsError::InvalidSweep(_) => CliError::config(e),
        other => CliError::new(exit::FAILURE, other),
    })
}
