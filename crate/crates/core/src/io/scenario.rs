use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_constants_file, ConstantsSpec, IoError, ReportFormat, Resolution};
use crate::model::{
    ConstantsTable, FarmConfig, MilkCoolingMode, ScheduleParams, SimDate, WaterHeatingMode,
    DEFAULT_MILK_PER_COW_PER_DAY,
};

/// Scenario file as written on disk (TOML). Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Simulation date, `MM-DD`.
    #[serde(default)]
    pub date: Option<String>,
    /// Constants file applied over the shipped defaults, relative to the scenario file.
    #[serde(default)]
    pub constants_file: Option<PathBuf>,
    pub farm: FarmSpec,
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    /// Inline overrides, applied after `constants_file`.
    #[serde(default)]
    pub constants: Option<ConstantsSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FarmSpec {
    pub herd_size_cows: u32,
    pub milking_units: u32,
    pub water_heating: WaterHeatingMode,
    pub milk_cooling: MilkCoolingMode,
    #[serde(default)]
    pub milk_per_cow_per_day_litres: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub row_time_minutes: Option<f64>,
    pub max_session_hours: Option<f64>,
    pub cooling_tail_hours: Option<f64>,
    pub water_heating_base_hours: Option<f64>,
    pub water_heating_hours_per_cow: Option<f64>,
    pub post_milking_hours: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub herd_sizes: Vec<u32>,
    #[serde(default)]
    pub milking_units: Vec<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<ReportFormat>,
    pub resolution: Option<Resolution>,
}

/// A scenario with every default resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: FarmConfig,
    pub date: Option<SimDate>,
    pub sweep: SweepSpec,
    pub output: OutputSpec,
}

pub fn load_scenario(path: &Path) -> Result<Scenario, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_scenario(&text, path, base_dir)
}

/// Parses scenario text; `origin` is only used in error messages and
/// `base_dir` resolves a relative `constants_file`.
pub fn parse_scenario(text: &str, origin: &Path, base_dir: &Path) -> Result<Scenario, IoError> {
    let parse_err = |message: String| IoError::Parse {
        path: origin.to_path_buf(),
        message,
    };
    let file: ScenarioFile = toml::from_str(text).map_err(|e| parse_err(describe(&e)))?;

    let farm = &file.farm;
    if farm.herd_size_cows == 0 {
        return Err(parse_err("farm.herd_size_cows must be at least 1".into()));
    }
    if farm.milking_units == 0 {
        return Err(parse_err("farm.milking_units must be at least 1".into()));
    }
    let mpd = farm
        .milk_per_cow_per_day_litres
        .unwrap_or(DEFAULT_MILK_PER_COW_PER_DAY);
    if !(mpd.is_finite() && mpd > 0.0) {
        return Err(parse_err(format!(
            "farm.milk_per_cow_per_day_litres must be positive, got {mpd}"
        )));
    }

    let date = file
        .date
        .as_deref()
        .map(|d| d.parse::<SimDate>())
        .transpose()
        .map_err(|e| parse_err(format!("date: {e}")))?;

    let mut constants = match &file.constants_file {
        Some(rel) => read_constants_file(&base_dir.join(rel))?,
        None => ConstantsTable::calibrated(),
    };
    if let Some(spec) = &file.constants {
        constants = spec.apply(&constants);
    }

    let mut schedule = ScheduleParams::default();
    if let Some(s) = &file.schedule {
        let fields = [
            (&mut schedule.row_time_minutes, s.row_time_minutes),
            (&mut schedule.max_session_hours, s.max_session_hours),
            (&mut schedule.cooling_tail_hours, s.cooling_tail_hours),
            (
                &mut schedule.water_heating_base_hours,
                s.water_heating_base_hours,
            ),
            (
                &mut schedule.water_heating_hours_per_cow,
                s.water_heating_hours_per_cow,
            ),
            (&mut schedule.post_milking_hours, s.post_milking_hours),
        ];
        for (slot, value) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
    }

    let config = FarmConfig {
        herd_size: farm.herd_size_cows,
        milking_units: farm.milking_units,
        water_heating: farm.water_heating,
        milk_cooling: farm.milk_cooling,
        milk_per_cow_per_day: mpd,
        constants,
        schedule,
    };
    config.validate().map_err(|source| IoError::Invalid {
        path: origin.to_path_buf(),
        source,
    })?;

    let sweep = file.sweep.unwrap_or_default();
    if let Some(zero) = sweep.herd_sizes.iter().find(|&&n| n == 0) {
        return Err(parse_err(format!("sweep.herd_sizes contains {zero}")));
    }
    if let Some(zero) = sweep.milking_units.iter().find(|&&n| n == 0) {
        return Err(parse_err(format!("sweep.milking_units contains {zero}")));
    }
    Ok(Scenario {
        config,
        date,
        sweep,
        output: file.output.unwrap_or_default(),
    })
}

fn describe(e: &toml::de::Error) -> String {
    match e.span() {
        Some(span) => format!("{} (at byte {})", e.message(), span.start),
        None => e.message().to_string(),
    }
}
