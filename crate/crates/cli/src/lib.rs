//! Experiment runner for `randspace-core`: TOML configs in, CSV/JSON reports out.

pub mod config;
pub mod number;
pub mod report;
pub mod run;

use std::path::{Path, PathBuf};

use randspace_core::LogBase;
use thiserror::Error;

pub use config::{ConfigError, ExperimentConfig, Kind};
pub use report::{emit, Cell, Check, Format, Report};
pub use run::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub base: Option<LogBase>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub dump_trajectories: bool,
}

/// Loads the config (if any), applies overrides, runs, and writes files when
/// an output directory is set.
pub fn execute(
    kind: Kind,
    config: Option<&Path>,
    overrides: &Overrides,
) -> Result<(Report, Vec<PathBuf>), CliError> {
    let mut cfg = match config {
        Some(p) => ExperimentConfig::load(p)?,
        None if kind == Kind::Gallery => ExperimentConfig::default(),
        None => return Err(ConfigError::Missing("--config".into()).into()),
    };
    if overrides.seed.is_some() {
        cfg.seed = overrides.seed;
    }
    if overrides.base.is_some() {
        cfg.base = overrides.base;
    }
    if overrides.out.is_some() {
        cfg.output.dir = overrides.out.clone();
    }
    if overrides.format.is_some() {
        cfg.output.format = overrides.format;
    }
    cfg.output.raw_trajectories |= overrides.dump_trajectories;
    let report = run(kind, &cfg)?;
    let written = match &cfg.output.dir {
        Some(dir) => emit(&report, dir, cfg.output.format.unwrap_or_default())?,
        None => Vec::new(),
    };
    Ok((report, written))
}
