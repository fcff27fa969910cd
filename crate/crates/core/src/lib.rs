//! Agent-based model of dairy farm electricity consumption.
//!
//! Nine equipment agents (water heating, milk harvesting, milk cooling,
//! lights, wash pump, compressor, scraper, effluent pump and unmonitored
//! loads) each compute their energy for a calendar day from herd size,
//! milking units and milk yield, and spread it over the hours they run.
//! The [`simulator`] rolls days up into months and years and runs herd-size
//! sweeps; [`calibration`] fits the per-litre coefficients to published
//! reference values.

pub mod agents;
pub mod calibration;
pub mod cli;
pub mod io;
pub mod model;
pub mod simulator;

pub use agents::{AgentSchedule, HourlyProfile};
pub use model::{AgentKind, ConstantsTable, EnergyKwh, FarmConfig, SimDate};
pub use simulator::{DailyReport, PeriodReport};
