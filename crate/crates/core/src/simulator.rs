//! Calendar stepping and aggregation of agent output into farm reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{agent_hourly_profile, AgentError, HourlyProfile};
use crate::model::{
    cumulative_consumption, AgentKind, EnergyKwh, FarmConfig, ModelError, SimDate, DAYS_IN_YEAR,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("invalid farm configuration: {0}")]
    Config(#[source] ModelError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("sweep needs at least one value")]
    EmptySweep,
}

/// One simulated day: every agent's hourly profile and the farm totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyReport {
    pub date: SimDate,
    pub per_agent: BTreeMap<AgentKind, HourlyProfile>,
    pub total_hourly: HourlyProfile,
    pub total: EnergyKwh,
}

impl DailyReport {
    pub fn agent_total(&self, kind: AgentKind) -> EnergyKwh {
        self.per_agent
            .get(&kind)
            .map(HourlyProfile::total)
            .unwrap_or_default()
    }

    pub fn summary(&self) -> DaySummary {
        DaySummary {
            date: self.date,
            total: self.total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DaySummary {
    pub date: SimDate,
    pub total: EnergyKwh,
}

/// Aggregate over a run of days (a week, month or the whole year).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    /// `"month-06"`, `"week-06-08"` or `"year"`.
    pub label: String,
    pub days: Vec<DaySummary>,
    pub per_agent_totals: BTreeMap<AgentKind, EnergyKwh>,
    pub total: EnergyKwh,
}

impl PeriodReport {
    fn from_days(label: String, days: &[DailyReport]) -> Self {
        let mut per_agent_totals: BTreeMap<AgentKind, EnergyKwh> = AgentKind::ALL
            .iter()
            .map(|&k| (k, EnergyKwh::ZERO))
            .collect();
        for day in days {
            for (kind, profile) in &day.per_agent {
                *per_agent_totals.entry(*kind).or_default() += profile.total();
            }
        }
        let total = per_agent_totals.values().sum();
        PeriodReport {
            label,
            days: days.iter().map(DailyReport::summary).collect(),
            per_agent_totals,
            total,
        }
    }

    /// Combines consecutive periods into one; totals add per agent.
    fn merge(label: String, parts: &[PeriodReport]) -> Self {
        let mut per_agent_totals: BTreeMap<AgentKind, EnergyKwh> = AgentKind::ALL
            .iter()
            .map(|&k| (k, EnergyKwh::ZERO))
            .collect();
        for part in parts {
            for (kind, e) in &part.per_agent_totals {
                *per_agent_totals.entry(*kind).or_default() += *e;
            }
        }
        let total = per_agent_totals.values().sum();
        PeriodReport {
            label,
            days: parts.iter().flat_map(|p| p.days.iter().copied()).collect(),
            per_agent_totals,
            total,
        }
    }
}

pub fn simulate_day(config: &FarmConfig, date: SimDate) -> Result<DailyReport, SimulationError> {
    config.validate().map_err(SimulationError::Config)?;
    day_unchecked(config, date)
}

fn day_unchecked(config: &FarmConfig, date: SimDate) -> Result<DailyReport, SimulationError> {
    let mut per_agent = BTreeMap::new();
    let mut total_hourly = HourlyProfile::zero();
    for kind in AgentKind::ALL {
        let profile = agent_hourly_profile(kind, config, date)?;
        total_hourly.accumulate(&profile);
        per_agent.insert(kind, profile);
    }
    let total = total_hourly.total();
    Ok(DailyReport {
        date,
        per_agent,
        total_hourly,
        total,
    })
}

/// Daily reports for every day of `month`.
pub fn simulate_month_days(
    config: &FarmConfig,
    month: u8,
) -> Result<Vec<DailyReport>, SimulationError> {
    config.validate().map_err(SimulationError::Config)?;
    SimDate::month_days(month)?
        .map(|date| day_unchecked(config, date))
        .collect()
}

pub fn simulate_month(config: &FarmConfig, month: u8) -> Result<PeriodReport, SimulationError> {
    let days = simulate_month_days(config, month)?;
    Ok(PeriodReport::from_days(format!("month-{month:02}"), &days))
}

/// The year as the merge of its twelve months; months are simulated in
/// parallel and merged in calendar order.
pub fn simulate_year(config: &FarmConfig) -> Result<PeriodReport, SimulationError> {
    config.validate().map_err(SimulationError::Config)?;
    let months = (1..=12u8)
        .into_par_iter()
        .map(|m| simulate_month(config, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PeriodReport::merge("year".to_string(), &months))
}

/// Splits consecutive days into 7-day slices; the last slice may be shorter.
pub fn weekly_slices(days: &[DailyReport]) -> Vec<PeriodReport> {
    days.chunks(7)
        .map(|chunk| PeriodReport::from_days(format!("week-{}", chunk[0].date), chunk))
        .collect()
}

/// Yearly total divided by 365.
pub fn average_day(config: &FarmConfig) -> Result<EnergyKwh, SimulationError> {
    let year = simulate_year(config)?;
    EnergyKwh::new(year.total.value() / f64::from(DAYS_IN_YEAR)).map_err(Into::into)
}

/// Average-day consumption for each herd size, in input order.
pub fn sweep_herd_sizes(
    base: &FarmConfig,
    sizes: &[u32],
) -> Result<Vec<(u32, EnergyKwh)>, SimulationError> {
    sweep(sizes, |n| base.with_herd_size(n))
}

/// Average-day consumption for each milking-unit count, in input order.
pub fn sweep_milking_units(
    base: &FarmConfig,
    units: &[u32],
) -> Result<Vec<(u32, EnergyKwh)>, SimulationError> {
    sweep(units, |n| base.with_milking_units(n))
}

fn sweep(
    values: &[u32],
    configure: impl Fn(u32) -> FarmConfig + Sync,
) -> Result<Vec<(u32, EnergyKwh)>, SimulationError> {
    if values.is_empty() {
        return Err(SimulationError::EmptySweep);
    }
    values
        .par_iter()
        .map(|&v| average_day(&configure(v)).map(|e| (v, e)))
        .collect()
}

/// Full-month consumption of each agent from the closed form: the
/// cumulative value at `df = 1` minus that at `df = 0`. Identical for every
/// month of the fixed calendar.
pub fn monthly_closed_form(
    config: &FarmConfig,
) -> Result<BTreeMap<AgentKind, EnergyKwh>, SimulationError> {
    config.validate().map_err(SimulationError::Config)?;
    AgentKind::ALL
        .iter()
        .map(|&kind| {
            let end = cumulative_consumption(kind, config, 1.0)?.value();
            let start = cumulative_consumption(kind, config, 0.0)?.value();
            Ok((kind, EnergyKwh::from_difference(end - start, end)?))
        })
        .collect()
}

/// Closed-form average day: twelve full months over 365 days.
pub fn average_day_closed_form(config: &FarmConfig) -> Result<EnergyKwh, SimulationError> {
    let month: EnergyKwh = monthly_closed_form(config)?.values().sum();
    EnergyKwh::new(12.0 * month.value() / f64::from(DAYS_IN_YEAR)).map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WaterHeatingMode;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn daily_report_covers_all_nine_agents() {
        let r = simulate_day(&FarmConfig::table1(), SimDate::new(6, 15).unwrap()).unwrap();
        assert_eq!(r.per_agent.len(), 9);
        assert!(AgentKind::ALL.iter().all(|k| r.per_agent.contains_key(k)));
    }

    #[test]
    fn total_hourly_is_slotwise_sum() {
        let r = simulate_day(&FarmConfig::table1(), SimDate::new(2, 3).unwrap()).unwrap();
        for hour in 0..24 {
            let sum: f64 = r.per_agent.values().map(|p| p[hour]).sum();
            assert!(rel_close(sum, r.total_hourly[hour], 1e-12));
        }
        let slot_sum: f64 = r.total_hourly.slots().iter().sum();
        assert!(rel_close(slot_sum, r.total.value(), 1e-9));
    }

    #[test]
    fn non_electric_removes_exactly_the_water_heating_share() {
        let electric = FarmConfig::table1();
        let mut other = electric.clone();
        other.water_heating = WaterHeatingMode::NonElectric;
        let date = SimDate::new(6, 15).unwrap();
        let e = simulate_day(&electric, date).unwrap();
        let n = simulate_day(&other, date).unwrap();
        let wh = e.agent_total(AgentKind::WaterHeating).value();
        assert!(wh > 0.0);
        assert!(rel_close(e.total.value() - wh, n.total.value(), 1e-9));
    }

    #[test]
    fn june_days_sum_to_month() {
        let cfg = FarmConfig::table1();
        let days = simulate_month_days(&cfg, 6).unwrap();
        assert_eq!(days.len(), 30);
        let month = simulate_month(&cfg, 6).unwrap();
        let sum: f64 = days.iter().map(|d| d.total.value()).sum();
        assert!(rel_close(sum, month.total.value(), 1e-9));
    }

    #[test]
    fn year_is_sum_of_months() {
        let cfg = FarmConfig::table1();
        let year = simulate_year(&cfg).unwrap();
        assert_eq!(year.days.len(), 365);
        let months: f64 = (1..=12)
            .map(|m| simulate_month(&cfg, m).unwrap().total.value())
            .sum();
        assert!(rel_close(months, year.total.value(), 1e-9));
        let agents: f64 = year.per_agent_totals.values().map(|e| e.value()).sum();
        assert!(rel_close(agents, year.total.value(), 1e-9));
    }

    #[test]
    fn weeks_partition_the_month() {
        let days = simulate_month_days(&FarmConfig::table1(), 1).unwrap();
        let weeks = weekly_slices(&days);
        assert_eq!(weeks.len(), 5);
        assert_eq!(weeks[4].days.len(), 3);
        assert_eq!(weeks[1].label, "week-01-08");
        let sum: f64 = weeks.iter().map(|w| w.total.value()).sum();
        let direct: f64 = days.iter().map(|d| d.total.value()).sum();
        assert!(rel_close(sum, direct, 1e-9));
    }

    #[test]
    fn average_day_matches_closed_form() {
        let cfg = FarmConfig::table1();
        let brute = average_day(&cfg).unwrap().value();
        let closed = average_day_closed_form(&cfg).unwrap().value();
        assert!(rel_close(brute, closed, 1e-9));
    }

    #[test]
    fn sweep_preserves_order_and_is_deterministic() {
        let cfg = FarmConfig::table1();
        let out = sweep_herd_sizes(&cfg, &[95, 35, 95]).unwrap();
        assert_eq!(
            out.iter().map(|p| p.0).collect::<Vec<_>>(),
            vec![95, 35, 95]
        );
        assert_eq!(out[0].1, out[2].1);
        assert!(out[0].1 > out[1].1);
        assert!(matches!(
            sweep_herd_sizes(&cfg, &[]),
            Err(SimulationError::EmptySweep)
        ));
    }

    #[test]
    fn milking_unit_sweep_only_moves_water_heating() {
        let cfg = FarmConfig::table1();
        let out = sweep_milking_units(&cfg, &[3, 40]).unwrap();
        let step = (out[1].1.value() - out[0].1.value()) * 365.0 / 12.0;
        assert!(rel_close(step, 37.0 * cfg.constants.wh_per_unit, 1e-6));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut cfg = FarmConfig::table1();
        cfg.herd_size = 0;
        assert!(matches!(
            simulate_day(&cfg, SimDate::new(1, 1).unwrap()),
            Err(SimulationError::Config(ModelError::ZeroHerd))
        ));
    }
}
