//! Command-line front end: `simulate`, `sweep`, `calibrate` and `validate`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::calibration::{
    builtin_reference_table, fit_constants, reported_pct, validate, ReferenceRow, ValidationReport,
    MAX_ERROR_PCT, MAX_ERROR_PCT_TIGHT,
};
use crate::io::{
    daily_csv, hourly_csv, load_scenario, period_csv, periods_csv, read_constants_file,
    read_reference_rows, sweep_csv, write_atomic, write_constants_file, ReportFormat, Resolution,
    Scenario,
};
use crate::model::{FarmConfig, SimDate};
use crate::simulator::{
    simulate_day, simulate_month, simulate_month_days, simulate_year, sweep_herd_sizes,
    sweep_milking_units, weekly_slices,
};

#[derive(Debug, Parser)]
#[command(
    name = "dairy-abm",
    version,
    about = "Dairy farm electricity consumption simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one farm and emit a report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Date as MM-DD; overrides the scenario's date.
        #[arg(long)]
        date: Option<String>,
        #[arg(long, value_enum)]
        resolution: Option<Resolution>,
        #[arg(long, value_enum)]
        format: Option<ReportFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Constants file replacing the scenario's constants.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Average-day consumption across herd sizes or milking-unit counts.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', conflicts_with = "milking_units")]
        herd_sizes: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        milking_units: Option<Vec<u32>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Fit the per-litre constants to a reference table and write them out.
    Calibrate {
        /// Reference rows CSV (herd_size,dssed_kwh,abm_kwh,error_pct); defaults to the built-in table.
        #[arg(long)]
        rows: Option<PathBuf>,
        /// Scenario supplying milking units, modes and milk yield; defaults to the case-study farm.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "constants.toml")]
        out: PathBuf,
    },
    /// Compare the model with the reference table's DSSED column.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        rows: Option<PathBuf>,
        #[arg(long)]
        constants: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("validation: {0}")]
    Validation(String),
    #[error("{stage}: {message}")]
    Runtime {
        stage: &'static str,
        message: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Runtime { .. } => 4,
        }
    }

    fn runtime(stage: &'static str, err: impl std::fmt::Display) -> Self {
        CliError::Runtime {
            stage,
            message: err.to_string(),
        }
    }
}

/// Runs a parsed command, writing human-readable output to `stdout`.
pub fn run(cli: Cli, stdout: &mut String) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            date,
            resolution,
            format,
            out,
            constants,
        } => {
            let scenario = scenario(&config, constants.as_deref())?;
            let date = match date {
                Some(d) => Some(
                    d.parse::<SimDate>()
                        .map_err(|e| CliError::Usage(format!("--date: {e}")))?,
                ),
                None => scenario.date,
            };
            let resolution = resolution
                .or(scenario.output.resolution)
                .unwrap_or(Resolution::Daily);
            let format = format
                .or(scenario.output.format)
                .unwrap_or(ReportFormat::Csv);
            let body = render_simulation(&scenario.config, date, resolution, format)?;
            emit(
                out.or(scenario.output.path.clone()).as_deref(),
                &body,
                stdout,
            )
        }
        Command::Sweep {
            config,
            herd_sizes,
            milking_units,
            out,
            constants,
        } => {
            let scenario = scenario(&config, constants.as_deref())?;
            let listed = herd_sizes.iter().chain(milking_units.iter()).flatten();
            if listed.clone().any(|&v| v == 0) {
                return Err(CliError::Usage("sweep values must be at least 1".into()));
            }
            let (axis, points) = match (herd_sizes, milking_units) {
                (Some(sizes), _) => ("herd_size", sweep_herd_sizes(&scenario.config, &sizes)),
                (None, Some(units)) => (
                    "milking_units",
                    sweep_milking_units(&scenario.config, &units),
                ),
                (None, None) if !scenario.sweep.herd_sizes.is_empty() => (
                    "herd_size",
                    sweep_herd_sizes(&scenario.config, &scenario.sweep.herd_sizes),
                ),
                (None, None) if !scenario.sweep.milking_units.is_empty() => (
                    "milking_units",
                    sweep_milking_units(&scenario.config, &scenario.sweep.milking_units),
                ),
                (None, None) => {
                    return Err(CliError::Usage(
                        "sweep needs --herd-sizes, --milking-units or a [sweep] section".into(),
                    ))
                }
            };
            let points = points.map_err(|e| CliError::runtime("sweep", e))?;
            let body = sweep_csv(axis, &points).map_err(|e| CliError::runtime("sweep", e))?;
            emit(
                out.or(scenario.output.path.clone()).as_deref(),
                &body,
                stdout,
            )
        }
        Command::Calibrate { rows, config, out } => {
            let rows = reference_rows(rows.as_deref())?;
            let base = match config {
                Some(path) => scenario(&path, None)?.config,
                None => FarmConfig::table1(),
            };
            let fit = fit_constants(&rows, &base).map_err(|e| CliError::runtime("calibrate", e))?;
            writeln!(stdout, "herd_size,target_abm_kwh,fitted_kwh,residual_pct").unwrap();
            let mut fitted = base.clone();
            fitted.constants = fit.constants.clone();
            for row in &rows {
                let model = crate::simulator::average_day_closed_form(
                    &fitted.with_herd_size(row.herd_size),
                )
                .map_err(|e| CliError::runtime("calibrate", e))?;
                writeln!(
                    stdout,
                    "{},{},{:.3},{:.3}",
                    row.herd_size,
                    row.abm_kwh,
                    model.value(),
                    fit.residuals[&row.herd_size]
                )
                .unwrap();
            }
            writeln!(stdout, "max_residual_pct,{:.4}", fit.max_residual_pct).unwrap();
            write_constants_file(&out, &fit.constants)
                .map_err(|e| CliError::runtime("output", e))?;
            writeln!(stdout, "wrote {}", out.display()).unwrap();
            Ok(())
        }
        Command::Validate {
            config,
            rows,
            constants,
        } => {
            let scenario = scenario(&config, constants.as_deref())?;
            let rows = reference_rows(rows.as_deref())?;
            let report =
                validate(&scenario.config, &rows).map_err(|e| CliError::runtime("validate", e))?;
            stdout.push_str(&render_validation(&report));
            if report.within_max_error {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "max error {:.1} % exceeds {MAX_ERROR_PCT} %",
                    report.max_model_error_reported_pct
                )))
            }
        }
    }
}

fn scenario(path: &Path, constants: Option<&Path>) -> Result<Scenario, CliError> {
    let mut scenario = load_scenario(path).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(file) = constants {
        scenario.config.constants =
            read_constants_file(file).map_err(|e| CliError::Config(e.to_string()))?;
        scenario
            .config
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(scenario)
}

fn reference_rows(path: Option<&Path>) -> Result<Vec<ReferenceRow>, CliError> {
    match path {
        Some(p) => read_reference_rows(p).map_err(|e| CliError::Config(e.to_string())),
        None => Ok(builtin_reference_table()),
    }
}

fn render_simulation(
    config: &FarmConfig,
    date: Option<SimDate>,
    resolution: Resolution,
    format: ReportFormat,
) -> Result<String, CliError> {
    let need_date = || {
        date.ok_or_else(|| {
            CliError::Usage("--date MM-DD is required (or set `date` in the scenario)".into())
        })
    };
    let json = |v: Result<String, serde_json::Error>| v.map(|s| s + "\n").map_err(ser);
    match resolution {
        Resolution::Hourly | Resolution::Daily => {
            let day = simulate_day(config, need_date()?).map_err(sim)?;
            match (format, resolution) {
                (ReportFormat::Json, _) => json(serde_json::to_string_pretty(&day)),
                (ReportFormat::Csv, Resolution::Hourly) => hourly_csv(&[day]).map_err(ser),
                (ReportFormat::Csv, _) => daily_csv(&[day]).map_err(ser),
            }
        }
        Resolution::Weekly => {
            let days = simulate_month_days(config, need_date()?.month()).map_err(sim)?;
            let weeks = weekly_slices(&days);
            match format {
                ReportFormat::Json => json(serde_json::to_string_pretty(&weeks)),
                ReportFormat::Csv => periods_csv(&weeks).map_err(ser),
            }
        }
        Resolution::Monthly => {
            let month = simulate_month(config, need_date()?.month()).map_err(sim)?;
            match format {
                ReportFormat::Json => json(serde_json::to_string_pretty(&month)),
                ReportFormat::Csv => period_csv(&month).map_err(ser),
            }
        }
        Resolution::Yearly => {
            let year = simulate_year(config).map_err(sim)?;
            match format {
                ReportFormat::Json => json(serde_json::to_string_pretty(&year)),
                ReportFormat::Csv => period_csv(&year).map_err(ser),
            }
        }
    }
}

fn sim(e: impl std::fmt::Display) -> CliError {
    CliError::runtime("simulate", e)
}

fn ser(e: impl std::fmt::Display) -> CliError {
    CliError::runtime("output", e)
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut String) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_atomic(path, body.as_bytes()).map_err(|e| CliError::runtime("output", e))
        }
        None => {
            stdout.push_str(body);
            Ok(())
        }
    }
}

pub fn render_validation(report: &ValidationReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:>9} {:>10} {:>10} {:>8} {:>8} {:>10} {:>8}",
        "herd_size", "dssed_kwh", "table_abm", "printed", "table", "model_kwh", "model"
    )
    .unwrap();
    for r in &report.rows {
        writeln!(
            s,
            "{:>9} {:>10.3} {:>10.3} {:>7.1}% {:>7.1}% {:>10.3} {:>7.1}%",
            r.herd_size,
            r.dssed_kwh,
            r.table_abm_kwh,
            r.printed_error_pct,
            reported_pct(r.table_error_pct),
            r.model_kwh,
            reported_pct(r.model_error_pct),
        )
        .unwrap();
    }
    let mismatches = report.printed_error_mismatches();
    if mismatches.is_empty() {
        writeln!(s, "table error column: all rows match the printed values").unwrap();
    } else {
        writeln!(
            s,
            "table error column: mismatch for herd sizes {mismatches:?}"
        )
        .unwrap();
    }
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    writeln!(
        s,
        "max model error: {:.1} % ({:.4} % exact)",
        report.max_model_error_reported_pct, report.max_model_error_pct
    )
    .unwrap();
    writeln!(
        s,
        "  <= {MAX_ERROR_PCT} %: {}",
        verdict(report.within_max_error)
    )
    .unwrap();
    writeln!(
        s,
        "  <= {MAX_ERROR_PCT_TIGHT} %: {}",
        verdict(report.within_tight_max_error)
    )
    .unwrap();
    s
}
