//! Batch front end: reads a problem document, runs its tasks and writes a
//! report. See `docs/FORMATS.md` for both file formats.

pub mod document;
pub mod report;
pub mod tasks;

use std::path::{Path, PathBuf};

use mfcalc::invariants::PairingNormalization;
use rayon::prelude::*;

pub use document::Problem;
pub use report::Report;
pub use tasks::Overrides;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{at}: {msg}")]
    Document { at: String, msg: String },
    #[error("pairing calibration failed: {0}")]
    Calibration(mfcalc::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Calibration(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub overrides: Overrides,
    pub parallel: bool,
}

pub fn run_problem(problem: &Problem, opts: &RunOptions) -> Result<Report, CliError> {
    let norm = PairingNormalization::calibrate().map_err(CliError::Calibration)?;
    let exec = |(i, t)| tasks::execute(problem, &norm, opts.overrides, i, t);
    let outcomes = if opts.parallel {
        problem.tasks.par_iter().enumerate().map(exec).collect()
    } else {
        problem.tasks.iter().enumerate().map(exec).collect()
    };
    Ok(Report::new(problem, &norm, opts.overrides, outcomes))
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), msg: e.to_string() })?;
    Problem::from_json(&text)
}

/// Exit code: 0 when every task is ok, 1 when a task failed or errored, 2 for
/// an unreadable or invalid document.
pub fn exit_code(report: &Report) -> i32 {
    if report.all_ok() {
        0
    } else {
        1
    }
}
