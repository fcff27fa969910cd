use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::ModelError;

/// A non-negative amount of electrical energy in kilowatt-hours.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EnergyKwh(f64);

impl EnergyKwh {
    pub const ZERO: EnergyKwh = EnergyKwh(0.0);

    pub fn new(value: f64) -> Result<Self, ModelError> {
        if value.is_finite() && value >= 0.0 {
            Ok(EnergyKwh(value))
        } else {
            Err(ModelError::NegativeEnergy(value))
        }
    }

    /// Builds an energy from a value that is non-negative up to rounding noise;
    /// tiny negative residues from cancellation are flushed to zero.
    pub(crate) fn from_difference(value: f64, scale: f64) -> Result<Self, ModelError> {
        if value < 0.0 && value.abs() <= 1e-12 * scale.abs().max(1.0) {
            return Ok(EnergyKwh::ZERO);
        }
        EnergyKwh::new(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Add for EnergyKwh {
    type Output = EnergyKwh;

    fn add(self, rhs: EnergyKwh) -> EnergyKwh {
        EnergyKwh(self.0 + rhs.0)
    }
}

impl AddAssign for EnergyKwh {
    fn add_assign(&mut self, rhs: EnergyKwh) {
        self.0 += rhs.0;
    }
}

impl Sum for EnergyKwh {
    fn sum<I: Iterator<Item = EnergyKwh>>(iter: I) -> EnergyKwh {
        iter.fold(EnergyKwh::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a EnergyKwh> for EnergyKwh {
    fn sum<I: Iterator<Item = &'a EnergyKwh>>(iter: I) -> EnergyKwh {
        iter.copied().sum()
    }
}

impl fmt::Display for EnergyKwh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} kWh", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_non_finite() {
        assert!(EnergyKwh::new(-0.1).is_err());
        assert!(EnergyKwh::new(f64::NAN).is_err());
        assert!(EnergyKwh::new(f64::INFINITY).is_err());
        assert_eq!(EnergyKwh::new(0.0).unwrap(), EnergyKwh::ZERO);
    }

    #[test]
    fn cancellation_noise_is_flushed() {
        assert_eq!(
            EnergyKwh::from_difference(-1e-15, 10.0).unwrap(),
            EnergyKwh::ZERO
        );
        assert!(EnergyKwh::from_difference(-1e-3, 10.0).is_err());
    }

    #[test]
    fn sum_is_commutative() {
        let parts = [1.25, 3.5, 0.125, 7.0].map(|v| EnergyKwh::new(v).unwrap());
        let forward: EnergyKwh = parts.iter().sum();
        let backward: EnergyKwh = parts.iter().rev().sum();
        assert!((forward.value() - backward.value()).abs() <= 1e-9 * forward.value());
        assert_eq!(forward.value(), 11.875);
    }
}
