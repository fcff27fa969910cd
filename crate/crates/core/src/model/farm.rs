use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Printed base constant of the water heating equation (kWh).
pub const WH_BASE_KWH: f64 = 1.84;
/// Printed per-milking-unit constant of the water heating equation (kWh/unit).
pub const WH_PER_UNIT_KWH: f64 = 0.01345;
/// Printed per-cow constant of the water heating equation (kWh/cow).
pub const WH_PER_COW_KWH: f64 = 0.075392;

/// Default average milk yield, litres per cow per day.
pub const DEFAULT_MILK_PER_COW_PER_DAY: f64 = 22.0;

/// Ice-bank cooling coefficient relative to direct expansion until a
/// reference value is supplied.
pub const ICE_BULK_TO_DX_RATIO: f64 = 0.8;

/// The nine equipment agents of a farm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    WaterHeating,
    MilkHarvesting,
    MilkCooling,
    Lights,
    WashPump,
    Compressor,
    Scraper,
    EffluentPump,
    Other,
}

impl AgentKind {
    pub const ALL: [AgentKind; 9] = [
        AgentKind::WaterHeating,
        AgentKind::MilkHarvesting,
        AgentKind::MilkCooling,
        AgentKind::Lights,
        AgentKind::WashPump,
        AgentKind::Compressor,
        AgentKind::Scraper,
        AgentKind::EffluentPump,
        AgentKind::Other,
    ];

    /// Agents whose consumption follows the generic per-litre equation.
    pub const EQUIPMENT: [AgentKind; 6] = [
        AgentKind::Lights,
        AgentKind::WashPump,
        AgentKind::Compressor,
        AgentKind::Scraper,
        AgentKind::EffluentPump,
        AgentKind::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::WaterHeating => "water_heating",
            AgentKind::MilkHarvesting => "milk_harvesting",
            AgentKind::MilkCooling => "milk_cooling",
            AgentKind::Lights => "lights",
            AgentKind::WashPump => "wash_pump",
            AgentKind::Compressor => "compressor",
            AgentKind::Scraper => "scraper",
            AgentKind::EffluentPump => "effluent_pump",
            AgentKind::Other => "other",
        }
    }

    pub fn is_equipment(self) -> bool {
        AgentKind::EQUIPMENT.contains(&self)
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaterHeatingMode {
    Electric,
    /// Water heated from another source (oil, gas); the agent draws no electricity.
    NonElectric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MilkCoolingMode {
    #[serde(rename = "dx")]
    DirectExpansion,
    #[serde(rename = "ib")]
    IceBulk,
}

/// Coefficients of the four consumption equations.
///
/// The per-litre coefficients are not published and come from calibration;
/// see [`crate::calibration::fit_constants`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsTable {
    pub wh_base: f64,
    pub wh_per_unit: f64,
    pub wh_per_cow: f64,
    pub cpl_harvest: f64,
    pub cpl_cooling_dx: f64,
    pub cpl_cooling_ib: f64,
    /// Per-litre coefficient of each of the six equipment agents.
    pub cpl_other: BTreeMap<AgentKind, f64>,
}

impl ConstantsTable {
    /// Water heating constants as printed, every per-litre coefficient zero.
    pub fn uncalibrated() -> Self {
        ConstantsTable {
            wh_base: WH_BASE_KWH,
            wh_per_unit: WH_PER_UNIT_KWH,
            wh_per_cow: WH_PER_COW_KWH,
            cpl_harvest: 0.0,
            cpl_cooling_dx: 0.0,
            cpl_cooling_ib: 0.0,
            cpl_other: AgentKind::EQUIPMENT.iter().map(|&k| (k, 0.0)).collect(),
        }
    }

    /// The shipped constants: fitted to the built-in reference table for the
    /// Table 1 farm (8 units, electric water heating, DX cooling, 22 L/cow/day).
    ///
    /// `tests/calibration.rs` refits and checks these stay in sync.
    pub fn calibrated() -> Self {
        ConstantsTable {
            wh_base: CALIBRATED_WH_BASE,
            wh_per_unit: WH_PER_UNIT_KWH,
            wh_per_cow: WH_PER_COW_KWH,
            cpl_harvest: CALIBRATED_CPL[0],
            cpl_cooling_dx: CALIBRATED_CPL[1],
            cpl_cooling_ib: CALIBRATED_CPL[1] * ICE_BULK_TO_DX_RATIO,
            cpl_other: AgentKind::EQUIPMENT
                .iter()
                .zip(&CALIBRATED_CPL[2..])
                .map(|(&k, &v)| (k, v))
                .collect(),
        }
    }

    pub fn cpl_for(&self, kind: AgentKind) -> Option<f64> {
        self.cpl_other.get(&kind).copied()
    }

    /// Sum of every per-litre coefficient used in the given cooling mode.
    pub fn aggregate_cpl(&self, cooling: MilkCoolingMode) -> f64 {
        self.cpl_harvest + super::cooling_cpl(cooling, self) + self.cpl_other.values().sum::<f64>()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let scalars = [
            ("wh_base", self.wh_base),
            ("wh_per_unit", self.wh_per_unit),
            ("wh_per_cow", self.wh_per_cow),
            ("cpl_harvest", self.cpl_harvest),
            ("cpl_cooling_dx", self.cpl_cooling_dx),
            ("cpl_cooling_ib", self.cpl_cooling_ib),
        ];
        for (name, value) in scalars {
            check_non_negative(name, value)?;
        }
        for kind in AgentKind::EQUIPMENT {
            match self.cpl_other.get(&kind) {
                Some(&v) => check_non_negative(kind.name(), v)?,
                None => return Err(ModelError::MissingCoefficient(kind)),
            }
        }
        if let Some(kind) = self.cpl_other.keys().find(|k| !k.is_equipment()) {
            return Err(ModelError::UnexpectedCoefficient(*kind));
        }
        Ok(())
    }
}

impl Default for ConstantsTable {
    fn default() -> Self {
        ConstantsTable::calibrated()
    }
}

// Frozen output of `fit_constants(builtin_reference_table(), FarmConfig::table1())`.
const CALIBRATED_WH_BASE: f64 = 678.119_431_249_998_8;
// harvest, cooling dx, lights, wash pump, compressor, scraper, effluent pump, other
const CALIBRATED_CPL: [f64; 8] = [
    0.097_662_045_420_454_76,
    0.432_503_344_004_871,
    0.048_831_022_710_227_38,
    0.041_855_162_323_052_03,
    0.034_879_301_935_876_7,
    0.020_927_581_161_526_015,
    0.020_927_581_161_526_015,
    0.231_914_705_330_086_65,
];

fn check_non_negative(name: &str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::NegativeConstant {
            name: name.to_string(),
            value,
        })
    }
}

/// Shape parameters of the agents' daily activation windows.
///
/// These affect only the hourly profile, never daily totals.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleParams {
    /// Time to milk one row of `milking_units` cows.
    pub row_time_minutes: f64,
    /// Upper bound on one milking session so the 07:00 and 17:00 sessions never overlap.
    pub max_session_hours: f64,
    /// Extra cooling run time after each milking session (bulk tank pull-down).
    pub cooling_tail_hours: f64,
    pub water_heating_base_hours: f64,
    pub water_heating_hours_per_cow: f64,
    /// Run time of the wash pump, scraper and effluent pump after each session.
    pub post_milking_hours: f64,
}

impl Default for ScheduleParams {
    fn default() -> Self {
        ScheduleParams {
            row_time_minutes: 8.0,
            max_session_hours: 10.0,
            cooling_tail_hours: 2.0,
            water_heating_base_hours: 1.0,
            water_heating_hours_per_cow: 0.01,
            post_milking_hours: 0.5,
        }
    }
}

impl ScheduleParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("row_time_minutes", self.row_time_minutes),
            ("max_session_hours", self.max_session_hours),
            ("water_heating_base_hours", self.water_heating_base_hours),
            ("post_milking_hours", self.post_milking_hours),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::InvalidSchedule {
                    name: name.to_string(),
                    value,
                });
            }
        }
        if self.max_session_hours > 10.0 {
            return Err(ModelError::InvalidSchedule {
                name: "max_session_hours".to_string(),
                value: self.max_session_hours,
            });
        }
        for (name, value) in [
            ("cooling_tail_hours", self.cooling_tail_hours),
            (
                "water_heating_hours_per_cow",
                self.water_heating_hours_per_cow,
            ),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::InvalidSchedule {
                    name: name.to_string(),
                    value,
                });
            }
        }
        Ok(())
    }
}

/// Complete description of one farm scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct FarmConfig {
    pub herd_size: u32,
    pub milking_units: u32,
    pub water_heating: WaterHeatingMode,
    pub milk_cooling: MilkCoolingMode,
    /// Litres per cow per day.
    pub milk_per_cow_per_day: f64,
    pub constants: ConstantsTable,
    pub schedule: ScheduleParams,
}

impl FarmConfig {
    /// The case-study farm: 75 cows, 8 milking machines, electric water
    /// heating and DX cooling, with the shipped calibrated constants.
    pub fn table1() -> Self {
        FarmConfig {
            herd_size: 75,
            milking_units: 8,
            water_heating: WaterHeatingMode::Electric,
            milk_cooling: MilkCoolingMode::DirectExpansion,
            milk_per_cow_per_day: DEFAULT_MILK_PER_COW_PER_DAY,
            constants: ConstantsTable::calibrated(),
            schedule: ScheduleParams::default(),
        }
    }

    pub fn with_herd_size(&self, herd_size: u32) -> Self {
        FarmConfig {
            herd_size,
            ..self.clone()
        }
    }

    pub fn with_milking_units(&self, milking_units: u32) -> Self {
        FarmConfig {
            milking_units,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.herd_size == 0 {
            return Err(ModelError::ZeroHerd);
        }
        if self.milking_units == 0 {
            return Err(ModelError::ZeroMilkingUnits);
        }
        if !(self.milk_per_cow_per_day.is_finite() && self.milk_per_cow_per_day > 0.0) {
            return Err(ModelError::InvalidMilkYield(self.milk_per_cow_per_day));
        }
        self.constants.validate()?;
        self.schedule.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_is_valid() {
        FarmConfig::table1().validate().unwrap();
    }

    #[test]
    fn nine_agents_six_equipment() {
        assert_eq!(AgentKind::ALL.len(), 9);
        let equipment = AgentKind::ALL.iter().filter(|k| k.is_equipment()).count();
        assert_eq!(equipment, 6);
    }

    #[test]
    fn invalid_farm_fields_are_named() {
        let mut cfg = FarmConfig::table1();
        cfg.herd_size = 0;
        assert!(matches!(cfg.validate(), Err(ModelError::ZeroHerd)));

        let mut cfg = FarmConfig::table1();
        cfg.milking_units = 0;
        assert!(matches!(cfg.validate(), Err(ModelError::ZeroMilkingUnits)));

        let mut cfg = FarmConfig::table1();
        cfg.milk_per_cow_per_day = 0.0;
        assert!(matches!(
            cfg.validate(),
            Err(ModelError::InvalidMilkYield(_))
        ));
    }

    #[test]
    fn constants_table_requires_exactly_the_six_equipment_agents() {
        let mut k = ConstantsTable::uncalibrated();
        k.cpl_other.remove(&AgentKind::Lights);
        assert!(matches!(
            k.validate(),
            Err(ModelError::MissingCoefficient(AgentKind::Lights))
        ));

        let mut k = ConstantsTable::uncalibrated();
        k.cpl_other.insert(AgentKind::MilkCooling, 0.1);
        assert!(matches!(
            k.validate(),
            Err(ModelError::UnexpectedCoefficient(AgentKind::MilkCooling))
        ));

        let mut k = ConstantsTable::uncalibrated();
        k.cpl_harvest = -1.0;
        assert!(matches!(
            k.validate(),
            Err(ModelError::NegativeConstant { .. })
        ));
    }

    #[test]
    fn ice_bulk_default_is_fraction_of_dx() {
        let k = ConstantsTable::calibrated();
        assert!((k.cpl_cooling_ib - 0.8 * k.cpl_cooling_dx).abs() < 1e-15);
    }
}
