//! Command implementations behind the `photon-purify` binary.
//!
//! Exit codes are a stable contract: 0 success, 1 invariant failure,
//! 2 configuration error, 3 I/O error.

mod numfmt;
mod run;
mod svg;
mod sweep;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use numfmt::{fmt_num, SIGNIFICANT_DIGITS};
pub use run::{cmd_run, RunReport};
pub use svg::render_comparison_svg;
pub use sweep::{cmd_sweep, evaluate_grid, write_csv, write_json, SweepRow, CSV_HEADER};
pub use verify::{cmd_verify, CheckOutcome, VerifyOptions, VerifyReport};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "PHOTON_PURIFY_SEED";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invariant check failed: {}", .0.join(", "))]
    InvariantFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvariantFailed(_) => 1,
            CliError::ConfigInvalid(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::ConfigInvalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub p: f64,
    #[serde(default)]
    pub phase: f64,
}

impl Default for InputSpec {
    fn default() -> Self {
        InputSpec { p: 0.5, phase: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input1: InputSpec,
    pub input2: InputSpec,
    pub cutoff: u32,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input1: InputSpec::default(),
            input2: InputSpec::default(),
            cutoff: crate::fock::DEFAULT_CUTOFF,
            output_format: OutputFormat::Table,
        }
    }
}

/// Inline flags; each one present replaces the file value.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub phase1: Option<f64>,
    pub phase2: Option<f64>,
    pub cutoff: Option<u32>,
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &RunOverrides) {
        if let Some(v) = o.p1 {
            self.input1.p = v;
        }
        if let Some(v) = o.p2 {
            self.input2.p = v;
        }
        if let Some(v) = o.phase1 {
            self.input1.phase = v;
        }
        if let Some(v) = o.phase2 {
            self.input2.phase = v;
        }
        if let Some(v) = o.cutoff {
            self.cutoff = v;
        }
        if let Some(v) = o.format {
            self.output_format = v;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check_p("input1.p", self.input1.p)?;
        check_p("input2.p", self.input2.p)?;
        check_finite("input1.phase", self.input1.phase)?;
        check_finite("input2.phase", self.input2.phase)?;
        check_cutoff(self.cutoff)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        GridRange { start, stop, steps }
    }

    pub fn single(value: f64) -> Self {
        GridRange::new(value, value, 1)
    }

    /// Evenly spaced points, both ends included; `steps == 1` gives `start`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.start];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last as f64
                }
            })
            .collect()
    }

    fn validate(&self, name: &str, unit_interval: bool) -> Result<(), CliError> {
        if self.steps < 1 {
            return Err(CliError::ConfigInvalid(format!(
                "{name}.steps must be >= 1"
            )));
        }
        check_finite(name, self.start)?;
        check_finite(name, self.stop)?;
        if self.start > self.stop {
            return Err(CliError::ConfigInvalid(format!(
                "{name}: start {} > stop {}",
                self.start, self.stop
            )));
        }
        if unit_interval {
            check_p(name, self.start)?;
            check_p(name, self.stop)?;
        }
        Ok(())
    }
}

/// Grid sweep description. With `diagonal` set, input 2 mirrors input 1
/// and the `p2_range`/`phase2_range` entries are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub p1_range: GridRange,
    pub p2_range: GridRange,
    pub phase1_range: GridRange,
    pub phase2_range: GridRange,
    pub diagonal: bool,
    pub cutoff: u32,
    pub output_format: OutputFormat,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p1_range: GridRange::new(0.0, 1.0, 101),
            p2_range: GridRange::new(0.0, 1.0, 101),
            phase1_range: GridRange::single(0.0),
            phase2_range: GridRange::single(0.0),
            diagonal: true,
            cutoff: crate::fock::DEFAULT_CUTOFF,
            output_format: OutputFormat::Csv,
            out: None,
            plot: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.p1_range.validate("p1_range", true)?;
        self.phase1_range.validate("phase1_range", false)?;
        if !self.diagonal {
            self.p2_range.validate("p2_range", true)?;
            self.phase2_range.validate("phase2_range", false)?;
        }
        if self.output_format == OutputFormat::Table {
            return Err(CliError::ConfigInvalid(
                "sweep writes csv or json, not table".into(),
            ));
        }
        check_cutoff(self.cutoff)
    }
}

fn check_p(name: &str, p: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CliError::ConfigInvalid(format!(
            "{name} = {p} is outside [0, 1]"
        )))
    }
}

fn check_finite(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::ConfigInvalid(format!("{name} is not finite")))
    }
}

fn check_cutoff(cutoff: u32) -> Result<(), CliError> {
    if cutoff >= 2 {
        Ok(())
    } else {
        Err(CliError::ConfigInvalid(format!(
            "cutoff {cutoff} must be >= 2"
        )))
    }
}

/// Reads a JSON config file; an unreadable file is an I/O error, a
/// malformed one a configuration error.
pub fn load_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::ConfigInvalid(format!("{}: {e}", path.display())))
}

/// `--seed`, else `PHOTON_PURIFY_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::ConfigInvalid(format!("{SEED_ENV}={v:?} is not a u64"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
