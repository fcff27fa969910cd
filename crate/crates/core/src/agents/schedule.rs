use serde::{Deserialize, Serialize};

use crate::model::{AgentKind, FarmConfig, ScheduleParams};

use super::profile::HOURS_PER_DAY;

/// Start of the morning milking session, hours after midnight.
pub const MORNING_MILKING_HOUR: f64 = 7.0;
/// Start of the evening milking session.
pub const EVENING_MILKING_HOUR: f64 = 17.0;

const DAY_HOURS: f64 = HOURS_PER_DAY as f64;

/// One period of activity: starts at `start_hour` (fractional hours after
/// midnight) and runs for `duration_hours`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveWindow {
    pub start_hour: f64,
    pub duration_hours: f64,
}

impl ActiveWindow {
    pub fn new(start_hour: f64, duration_hours: f64) -> Self {
        ActiveWindow {
            start_hour,
            duration_hours,
        }
    }

    /// `(start, end)` clamped to `[0, 24]`.
    pub fn clamped(&self) -> (f64, f64) {
        let start = self.start_hour.clamp(0.0, DAY_HOURS);
        let end = (self.start_hour + self.duration_hours).clamp(start, DAY_HOURS);
        (start, end)
    }

    pub fn contains(&self, hour: f64) -> bool {
        let (start, end) = self.clamped();
        hour >= start && hour < end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSchedule {
    active_windows: Vec<ActiveWindow>,
}

impl AgentSchedule {
    pub fn new(active_windows: Vec<ActiveWindow>) -> Self {
        AgentSchedule { active_windows }
    }

    pub fn always_on() -> Self {
        AgentSchedule::new(vec![ActiveWindow::new(0.0, DAY_HOURS)])
    }

    pub fn windows(&self) -> &[ActiveWindow] {
        &self.active_windows
    }

    /// Total active time within the day, after clamping at midnight.
    pub fn active_hours(&self) -> f64 {
        self.active_windows
            .iter()
            .map(|w| {
                let (start, end) = w.clamped();
                end - start
            })
            .sum()
    }

    /// Whether any part of clock hour `hour` is inside a window.
    pub fn touches_hour(&self, hour: usize) -> bool {
        let (lo, hi) = (hour as f64, hour as f64 + 1.0);
        self.active_windows.iter().any(|w| {
            let (start, end) = w.clamped();
            start < hi && end > lo
        })
    }
}

/// Length of one milking session: `ceil(n_c / n_mu)` rows at the configured
/// row time, capped so the two daily sessions never overlap.
pub fn milking_session_duration(
    herd_size: u32,
    milking_units: u32,
    params: &ScheduleParams,
) -> f64 {
    let rows = herd_size.div_ceil(milking_units.max(1));
    (f64::from(rows) * params.row_time_minutes / 60.0).min(params.max_session_hours)
}

pub fn schedule_for(kind: AgentKind, config: &FarmConfig) -> AgentSchedule {
    let params = &config.schedule;
    let session = milking_session_duration(config.herd_size, config.milking_units, params);
    let sessions = [MORNING_MILKING_HOUR, EVENING_MILKING_HOUR];
    let after_each = |duration: f64| {
        AgentSchedule::new(
            sessions
                .iter()
                .map(|&start| ActiveWindow::new(start + session, duration))
                .collect(),
        )
    };
    match kind {
        AgentKind::MilkHarvesting => AgentSchedule::new(
            sessions
                .iter()
                .map(|&start| ActiveWindow::new(start, session))
                .collect(),
        ),
        AgentKind::MilkCooling => AgentSchedule::new(
            sessions
                .iter()
                .map(|&start| ActiveWindow::new(start, session + params.cooling_tail_hours))
                .collect(),
        ),
        AgentKind::WaterHeating => after_each(
            params.water_heating_base_hours
                + params.water_heating_hours_per_cow * f64::from(config.herd_size),
        ),
        AgentKind::WashPump | AgentKind::Scraper | AgentKind::EffluentPump => {
            after_each(params.post_milking_hours)
        }
        AgentKind::Lights | AgentKind::Compressor | AgentKind::Other => AgentSchedule::always_on(),
    }
}
