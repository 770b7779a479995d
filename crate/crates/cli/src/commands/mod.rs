mod solve;
mod sweep;
mod verify;

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use nhp_core::{BigFloat, InterpolationScheme, MultiIndex, NikishinSystem, Precision, Rational, Scalar};

use crate::config::RunConfig;
use crate::{exit, CliError, CliResult};

pub use solve::{solve, IndexSummary};
pub use sweep::{sweep, SWEEP_SUCCESS_RATIO};
pub use verify::{verify, CheckResult, CheckStatus, VerifyReport};

/// Validated configuration with the exact system already built.
pub struct Prepared {
    pub cfg: RunConfig,
    pub precision: Precision,
    pub indices: Vec<MultiIndex>,
    pub schemes: Vec<InterpolationScheme>,
    pub system: NikishinSystem<Rational>,
}

impl Prepared {
    pub fn new(cfg: RunConfig) -> CliResult<Self> {
        let precision = cfg.precision().map_err(CliError::config)?;
        let indices = cfg.indices().map_err(CliError::config)?;
        let schemes = cfg.schemes(indices.len()).map_err(CliError::config)?;
        let system = cfg.system().map_err(CliError::config)?;
        Ok(Prepared { cfg, precision, indices, schemes, system })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::new(RunConfig::load(path).map_err(CliError::config)?)
    }

    pub fn float_system(&self) -> CliResult<NikishinSystem<BigFloat>> {
        self.system.convert::<BigFloat>(self.precision).map_err(|e| CliError::new(exit::FAILURE, e))
    }
}

/// Values at or below this count as zero: nothing in exact mode, about half the
/// working bits otherwise.
pub fn tolerance(prec: Precision) -> f64 {
    match prec {
        Precision::Exact => 0.0,
        Precision::Float(bits) => 2f64.powi(-(bits as i32) / 2),
    }
}

pub fn negligible<T: Scalar>(v: &T, prec: Precision) -> bool {
    match prec {
        Precision::Exact => v.is_zero(),
        _ => v.to_f64().abs() <= tolerance(prec),
    }
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::new(exit::FAILURE, e))?;
    text.push('\n');
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(|e| CliError::new(exit::FAILURE, e))
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(|e| CliError::new(exit::FAILURE, e))
}
