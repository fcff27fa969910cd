//! Domain types and the four consumption equations.
//!
//! Every equation returns the consumption accumulated from the start of the
//! month up to the day factor `df`; single-day figures are differences of
//! consecutive cumulative values (see [`crate::agents::agent_daily_energy`]).

mod calendar;
mod farm;
mod units;

pub use calendar::{day_factor, days_in_month, SimDate, DAYS_IN_YEAR};
pub use farm::{
    AgentKind, ConstantsTable, FarmConfig, MilkCoolingMode, ScheduleParams, WaterHeatingMode,
    DEFAULT_MILK_PER_COW_PER_DAY, ICE_BULK_TO_DX_RATIO, WH_BASE_KWH, WH_PER_COW_KWH,
    WH_PER_UNIT_KWH,
};
pub use units::EnergyKwh;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("month {0} is outside 1..=12")]
    InvalidMonth(u8),
    #[error("day {day} does not exist in month {month}")]
    InvalidDay { month: u8, day: u8 },
    #[error("cannot parse date {0:?}, expected MM-DD")]
    DateSyntax(String),
    #[error("energy must be a non-negative finite number, got {0}")]
    NegativeEnergy(f64),
    #[error("day factor {0} is outside [0, 1]")]
    DayFactorOutOfRange(f64),
    #[error("herd_size must be at least 1")]
    ZeroHerd,
    #[error("milking_units must be at least 1")]
    ZeroMilkingUnits,
    #[error("milk_per_cow_per_day must be positive, got {0}")]
    InvalidMilkYield(f64),
    #[error("per-litre coefficient must be non-negative, got {0}")]
    NegativeCoefficient(f64),
    #[error("constant {name} must be non-negative, got {value}")]
    NegativeConstant { name: String, value: f64 },
    #[error("no per-litre coefficient for agent {0}")]
    MissingCoefficient(AgentKind),
    #[error("agent {0} does not take an equipment per-litre coefficient")]
    UnexpectedCoefficient(AgentKind),
    #[error("schedule parameter {name} has invalid value {value}")]
    InvalidSchedule { name: String, value: f64 },
}

fn check_day_factor(df: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&df) {
        Ok(())
    } else {
        Err(ModelError::DayFactorOutOfRange(df))
    }
}

/// Water heating consumption: `df * (wh_base + n_mu * wh_per_unit) + n_c * wh_per_cow`.
///
/// Only the base and per-unit group is scaled by `df`. Returns zero when water
/// is heated by a non-electric source. `df = 0` is accepted and yields the
/// cow term alone.
pub fn water_heating_consumption(
    df: f64,
    herd_size: u32,
    milking_units: u32,
    mode: WaterHeatingMode,
    k: &ConstantsTable,
) -> Result<EnergyKwh, ModelError> {
    check_day_factor(df)?;
    if herd_size == 0 {
        return Err(ModelError::ZeroHerd);
    }
    if milking_units == 0 {
        return Err(ModelError::ZeroMilkingUnits);
    }
    match mode {
        WaterHeatingMode::NonElectric => Ok(EnergyKwh::ZERO),
        WaterHeatingMode::Electric => EnergyKwh::new(
            df * (k.wh_base + f64::from(milking_units) * k.wh_per_unit)
                + f64::from(herd_size) * k.wh_per_cow,
        ),
    }
}

/// Shared form of the harvesting, cooling and equipment equations:
/// `df * n_c * mpd * cpl`.
pub fn per_litre_consumption(
    df: f64,
    herd_size: u32,
    milk_per_cow_per_day: f64,
    cpl: f64,
) -> Result<EnergyKwh, ModelError> {
    check_day_factor(df)?;
    if herd_size == 0 {
        return Err(ModelError::ZeroHerd);
    }
    if !(milk_per_cow_per_day.is_finite() && milk_per_cow_per_day > 0.0) {
        return Err(ModelError::InvalidMilkYield(milk_per_cow_per_day));
    }
    if !(cpl.is_finite() && cpl >= 0.0) {
        return Err(ModelError::NegativeCoefficient(cpl));
    }
    EnergyKwh::new(df * f64::from(herd_size) * milk_per_cow_per_day * cpl)
}

/// Per-litre cooling coefficient for the configured cooling method.
pub fn cooling_cpl(mode: MilkCoolingMode, k: &ConstantsTable) -> f64 {
    match mode {
        MilkCoolingMode::DirectExpansion => k.cpl_cooling_dx,
        MilkCoolingMode::IceBulk => k.cpl_cooling_ib,
    }
}

/// Month-to-date consumption of one agent at day factor `df`.
pub fn cumulative_consumption(
    kind: AgentKind,
    config: &FarmConfig,
    df: f64,
) -> Result<EnergyKwh, ModelError> {
    let k = &config.constants;
    let cpl = match kind {
        AgentKind::WaterHeating => {
            return water_heating_consumption(
                df,
                config.herd_size,
                config.milking_units,
                config.water_heating,
                k,
            );
        }
        AgentKind::MilkHarvesting => k.cpl_harvest,
        AgentKind::MilkCooling => cooling_cpl(config.milk_cooling, k),
        other => k
            .cpl_for(other)
            .ok_or(ModelError::MissingCoefficient(other))?,
    };
    per_litre_consumption(df, config.herd_size, config.milk_per_cow_per_day, cpl)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_constants() -> ConstantsTable {
        ConstantsTable::uncalibrated()
    }

    #[test]
    fn water_heating_full_month_table1_farm() {
        let e =
            water_heating_consumption(1.0, 75, 8, WaterHeatingMode::Electric, &paper_constants())
                .unwrap();
        // 1.84 + 8 * 0.01345 + 75 * 0.075392
        assert!((e.value() - 7.602).abs() < 1e-9);
    }

    #[test]
    fn water_heating_half_month_scales_only_first_group() {
        let e =
            water_heating_consumption(0.5, 75, 8, WaterHeatingMode::Electric, &paper_constants())
                .unwrap();
        // 0.5 * (1.84 + 0.1076) + 5.6544
        assert!((e.value() - 6.6282).abs() < 1e-9);
    }

    #[test]
    fn non_electric_water_heating_is_zero() {
        for (df, n_c, n_mu) in [(1.0, 75, 8), (0.3, 1, 1), (0.0, 500, 40)] {
            let e = water_heating_consumption(
                df,
                n_c,
                n_mu,
                WaterHeatingMode::NonElectric,
                &ConstantsTable::calibrated(),
            )
            .unwrap();
            assert_eq!(e, EnergyKwh::ZERO);
        }
    }

    #[test]
    fn water_heating_at_zero_df_is_cow_term() {
        let k = paper_constants();
        let e = water_heating_consumption(0.0, 75, 8, WaterHeatingMode::Electric, &k).unwrap();
        assert_eq!(e.value(), 75.0 * k.wh_per_cow);
    }

    #[test]
    fn water_heating_slope_in_herd_is_per_cow_constant() {
        let k = paper_constants();
        let at = |n| {
            water_heating_consumption(0.7, n, 8, WaterHeatingMode::Electric, &k)
                .unwrap()
                .value()
        };
        assert!((at(76) - at(75) - k.wh_per_cow).abs() < 1e-12);
        assert!(((at(90) - at(40)) / 50.0 - k.wh_per_cow).abs() < 1e-12);
    }

    #[test]
    fn per_litre_examples() {
        let e = per_litre_consumption(1.0, 75, 22.0, 0.01).unwrap();
        assert!((e.value() - 16.5).abs() < 1e-12);
        assert_eq!(
            per_litre_consumption(0.4, 75, 22.0, 0.0).unwrap(),
            EnergyKwh::ZERO
        );
        let full = per_litre_consumption(1.0, 60, 18.0, 0.03).unwrap().value();
        let half = per_litre_consumption(0.5, 60, 18.0, 0.03).unwrap().value();
        assert!((half * 2.0 - full).abs() < 1e-12);
    }

    #[test]
    fn argument_errors() {
        let k = paper_constants();
        assert!(matches!(
            water_heating_consumption(1.5, 75, 8, WaterHeatingMode::Electric, &k),
            Err(ModelError::DayFactorOutOfRange(_))
        ));
        assert!(matches!(
            water_heating_consumption(0.5, 0, 8, WaterHeatingMode::Electric, &k),
            Err(ModelError::ZeroHerd)
        ));
        assert!(matches!(
            water_heating_consumption(0.5, 5, 0, WaterHeatingMode::Electric, &k),
            Err(ModelError::ZeroMilkingUnits)
        ));
        assert!(matches!(
            per_litre_consumption(0.5, 10, 0.0, 0.1),
            Err(ModelError::InvalidMilkYield(_))
        ));
        assert!(matches!(
            per_litre_consumption(0.5, 10, 20.0, -0.1),
            Err(ModelError::NegativeCoefficient(_))
        ));
        assert!(per_litre_consumption(-0.1, 10, 20.0, 0.1).is_err());
    }

    #[test]
    fn cooling_selector() {
        let mut k = paper_constants();
        k.cpl_cooling_dx = 0.02;
        k.cpl_cooling_ib = 0.015;
        assert_eq!(cooling_cpl(MilkCoolingMode::DirectExpansion, &k), 0.02);
        assert_eq!(cooling_cpl(MilkCoolingMode::IceBulk, &k), 0.015);
        assert_ne!(
            cooling_cpl(MilkCoolingMode::DirectExpansion, &k),
            cooling_cpl(MilkCoolingMode::IceBulk, &k)
        );
    }
}
