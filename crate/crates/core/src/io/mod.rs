//! File formats: scenario and constants files (TOML), reference rows and
//! reports (CSV), reports (JSON).

mod atomic;
mod constants_file;
mod report;
mod rows;
mod scenario;

pub use atomic::write_atomic;
pub use constants_file::{read_constants_file, write_constants_file, ConstantsSpec, EquipmentSpec};
pub use report::{
    daily_csv, format_sig6, hourly_csv, period_csv, periods_csv, sweep_csv, ReportFormat,
    Resolution, CSV_HOURLY_HEADER,
};
pub use rows::{read_reference_rows, write_reference_rows};
pub use scenario::{
    load_scenario, parse_scenario, FarmSpec, OutputSpec, Scenario, ScenarioFile, ScheduleSpec,
    SweepSpec,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum IoError {
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
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: ModelError },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}
