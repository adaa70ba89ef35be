//! Command-line front end: workspace files, check runner and reports.

pub mod examples;
pub mod model;
pub mod run;
pub mod workspace;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use thiserror::Error;

use qsyslab_core::diagram::check_equation;
use qsyslab_core::Tolerance;

pub use model::{resolve, Model};
pub use run::{run_all, Report, ReportBody, ReportHeader};
pub use workspace::{parse_workspace, Workspace};

/// Tolerance used when neither `--tol` nor `QSYSLAB_TOL` is given.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors that stop a command before any verdict. All map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed workspace at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("invalid workspace at `{path}`: {message}")]
    Resolve { path: String, message: String },

    #[error("unknown equation `{0}`")]
    UnknownEquation(String),

    #[error("unknown example `{0}`; run `qsyslab examples --list`")]
    UnknownExample(String),

    #[error(transparent)]
    Core(#[from] qsyslab_core::Error),

    #[error("cannot serialize report: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub fn tolerance(flag: Option<f64>) -> Result<Tolerance, CliError> {
    Ok(Tolerance::new(flag.unwrap_or(DEFAULT_TOL))?)
}

pub fn load(path: &Path) -> Result<Model, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    resolve(&parse_workspace(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// `verify`: runs every check, prints a summary and optionally writes a
/// JSON report. Returns 0 when every check passes and 1 otherwise.
pub fn verify(path: &Path, tol: Option<f64>, report: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let tol = tolerance(tol)?;
    let model = load(path)?;
    let body = run_all(&model, tol);
    let _ = out.write_all(run::summary(&body).as_bytes());
    if let Some(report_path) = report {
        let generated_at_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let full = Report {
            header: ReportHeader {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                input: path.display().to_string(),
                generated_at_unix,
            },
            body: body.clone(),
        };
        write_file(report_path, &(serde_json::to_string_pretty(&full)? + "\n"))?;
    }
    Ok(if body.passed { 0 } else { 1 })
}

/// `check-eq`: evaluates one named equation. Returns 0 or 1.
pub fn check_eq(path: &Path, name: &str, tol: Option<f64>, out: &mut dyn Write) -> Result<i32, CliError> {
    let tol = tolerance(tol)?;
    let model = load(path)?;
    let (lhs, rhs) = model
        .equations
        .get(name)
        .ok_or_else(|| CliError::UnknownEquation(name.into()))?;
    let r = check_equation(lhs, rhs, &model.env, tol)?;
    let _ = writeln!(out, "{name}: {r}");
    Ok(if r.passed { 0 } else { 1 })
}

pub fn list_examples(out: &mut dyn Write) {
    for (name, description) in examples::EXAMPLES {
        let _ = writeln!(out, "{name:<20} {description}");
    }
}

pub fn emit_example(name: &str, path: &Path) -> Result<(), CliError> {
    let ws = examples::example(name).ok_or_else(|| CliError::UnknownExample(name.into()))?;
    write_file(path, &(serde_json::to_string_pretty(&ws)? + "\n"))
}
