use std::ops::Index;

use serde::{Deserialize, Serialize};

use super::{AgentError, AgentSchedule};
use crate::model::EnergyKwh;

pub const HOURS_PER_DAY: usize = 24;

/// Energy per clock hour; slot `i` covers `[i:00, i+1:00)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HourlyProfile {
    slots: [f64; HOURS_PER_DAY],
}

impl HourlyProfile {
    pub fn zero() -> Self {
        HourlyProfile {
            slots: [0.0; HOURS_PER_DAY],
        }
    }

    pub fn from_slots(slots: [f64; HOURS_PER_DAY]) -> Result<Self, AgentError> {
        if let Some(bad) = slots.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(AgentError::NegativeSlot(*bad));
        }
        Ok(HourlyProfile { slots })
    }

    pub fn slots(&self) -> &[f64; HOURS_PER_DAY] {
        &self.slots
    }

    pub fn total(&self) -> EnergyKwh {
        self.slots
            .iter()
            .map(|&v| EnergyKwh::new(v).unwrap_or_default())
            .sum()
    }

    /// Slot-wise sum.
    pub fn accumulate(&mut self, other: &HourlyProfile) {
        for (a, b) in self.slots.iter_mut().zip(other.slots.iter()) {
            *a += b;
        }
    }
}

impl Index<usize> for HourlyProfile {
    type Output = f64;

    fn index(&self, hour: usize) -> &f64 {
        &self.slots[hour]
    }
}

/// Spreads `energy` uniformly per unit time over the schedule's windows,
/// clamped to the day. Partial hours get proportional shares.
pub fn distribute(
    energy: EnergyKwh,
    schedule: &AgentSchedule,
) -> Result<HourlyProfile, AgentError> {
    let mut profile = HourlyProfile::zero();
    if energy == EnergyKwh::ZERO {
        return Ok(profile);
    }
    let active = schedule.active_hours();
    if active <= 0.0 {
        return Err(AgentError::EmptySchedule(energy));
    }
    let rate = energy.value() / active;
    for window in schedule.windows() {
        let (start, end) = window.clamped();
        if end <= start {
            continue;
        }
        let first = start.floor() as usize;
        let last = (end.ceil() as usize).min(HOURS_PER_DAY);
        for hour in first..last {
            let lo = start.max(hour as f64);
            let hi = end.min(hour as f64 + 1.0);
            if hi > lo {
                profile.slots[hour] += rate * (hi - lo);
            }
        }
    }
    Ok(profile)
}
