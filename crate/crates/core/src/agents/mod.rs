//! The nine equipment agents: daily energy from the consumption equations,
//! spread over each agent's hours of activity.

mod profile;
mod schedule;

pub use profile::{distribute, HourlyProfile, HOURS_PER_DAY};
pub use schedule::{
    milking_session_duration, schedule_for, ActiveWindow, AgentSchedule, EVENING_MILKING_HOUR,
    MORNING_MILKING_HOUR,
};

use thiserror::Error;

use crate::model::{cumulative_consumption, AgentKind, EnergyKwh, FarmConfig, ModelError, SimDate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgentError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("agent has {0} to distribute but no active hours")]
    EmptySchedule(EnergyKwh),
    #[error("hourly slot must be non-negative, got {0}")]
    NegativeSlot(f64),
}

/// Energy one agent uses on `date`: the month-to-date consumption at the end
/// of `date` minus that at the end of the previous day.
///
/// The first day of a month differences against `df = 0`, so daily values
/// telescope to the full-month (`df = 1`) figure.
pub fn agent_daily_energy(
    kind: AgentKind,
    config: &FarmConfig,
    date: SimDate,
) -> Result<EnergyKwh, AgentError> {
    let days = f64::from(date.days_in_month());
    let today = f64::from(date.day()) / days;
    let yesterday = f64::from(date.day() - 1) / days;
    let end = cumulative_consumption(kind, config, today)?;
    let start = cumulative_consumption(kind, config, yesterday)?;
    Ok(EnergyKwh::from_difference(
        end.value() - start.value(),
        end.value(),
    )?)
}

/// Daily energy of `kind` on `date`, laid out over its schedule.
pub fn agent_hourly_profile(
    kind: AgentKind,
    config: &FarmConfig,
    date: SimDate,
) -> Result<HourlyProfile, AgentError> {
    let energy = agent_daily_energy(kind, config, date)?;
    distribute(energy, &schedule_for(kind, config))
}
