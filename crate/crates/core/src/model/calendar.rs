use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ModelError;

const DAYS_IN_MONTH: [u8; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/// Days in a year of the fixed non-leap calendar.
pub const DAYS_IN_YEAR: u32 = 365;

/// Number of days in `month` (1..=12) of a non-leap year.
pub fn days_in_month(month: u8) -> Result<u8, ModelError> {
    if (1..=12).contains(&month) {
        Ok(DAYS_IN_MONTH[usize::from(month - 1)])
    } else {
        Err(ModelError::InvalidMonth(month))
    }
}

/// A calendar position (month and day) in a fixed 365-day year.
///
/// Serialized as `"MM-DD"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimDate {
    month: u8,
    day: u8,
}

impl SimDate {
    pub fn new(month: u8, day: u8) -> Result<Self, ModelError> {
        let last = days_in_month(month)?;
        if day == 0 || day > last {
            return Err(ModelError::InvalidDay { month, day });
        }
        Ok(SimDate { month, day })
    }

    pub fn month(self) -> u8 {
        self.month
    }

    pub fn day(self) -> u8 {
        self.day
    }

    pub fn days_in_month(self) -> u8 {
        DAYS_IN_MONTH[usize::from(self.month - 1)]
    }

    /// All dates of `month` in order.
    pub fn month_days(month: u8) -> Result<impl Iterator<Item = SimDate>, ModelError> {
        let last = days_in_month(month)?;
        Ok((1..=last).map(move |day| SimDate { month, day }))
    }

    /// All 365 dates of the year in order.
    pub fn year_days() -> impl Iterator<Item = SimDate> {
        (1..=12u8).flat_map(|month| {
            (1..=DAYS_IN_MONTH[usize::from(month - 1)]).map(move |day| SimDate { month, day })
        })
    }
}

/// Fraction of the month elapsed at the end of `date`: day / days_in_month.
///
/// Always in (0, 1]; equals 1.0 on the last day of every month.
pub fn day_factor(date: SimDate) -> f64 {
    f64::from(date.day) / f64::from(date.days_in_month())
}

impl fmt::Display for SimDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}-{:02}", self.month, self.day)
    }
}

impl FromStr for SimDate {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::DateSyntax(s.to_string());
        let (m, d) = s.trim().split_once('-').ok_or_else(bad)?;
        let month = m.parse::<u8>().map_err(|_| bad())?;
        let day = d.parse::<u8>().map_err(|_| bad())?;
        SimDate::new(month, day)
    }
}

impl Serialize for SimDate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SimDate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn day_factor_examples() {
        assert_eq!(day_factor(SimDate::new(6, 15).unwrap()), 0.5);
        assert_eq!(day_factor(SimDate::new(1, 31).unwrap()), 1.0);
        let first = day_factor(SimDate::new(1, 1).unwrap());
        assert!((first - 0.032_258_064_516_129).abs() < 1e-12);
    }

    #[test]
    fn day_factor_is_one_on_every_last_day_and_increasing() {
        for month in 1..=12 {
            let days: Vec<_> = SimDate::month_days(month).unwrap().collect();
            assert_eq!(day_factor(*days.last().unwrap()), 1.0);
            for pair in days.windows(2) {
                assert!(day_factor(pair[1]) > day_factor(pair[0]));
            }
        }
    }

    #[test]
    fn fixed_non_leap_calendar() {
        assert_eq!(days_in_month(2).unwrap(), 28);
        assert!(SimDate::new(2, 29).is_err());
        assert_eq!(SimDate::year_days().count() as u32, DAYS_IN_YEAR);
    }

    #[test]
    fn invalid_dates_are_rejected() {
        assert!(matches!(
            SimDate::new(13, 1),
            Err(ModelError::InvalidMonth(13))
        ));
        assert!(matches!(
            SimDate::new(0, 1),
            Err(ModelError::InvalidMonth(0))
        ));
        assert!(matches!(
            SimDate::new(4, 31),
            Err(ModelError::InvalidDay { month: 4, day: 31 })
        ));
        assert!(SimDate::new(4, 0).is_err());
    }

    #[test]
    fn parses_and_prints_mm_dd() {
        let date: SimDate = "06-15".parse().unwrap();
        assert_eq!(date, SimDate::new(6, 15).unwrap());
        assert_eq!(date.to_string(), "06-15");
        assert_eq!("6-5".parse::<SimDate>().unwrap().to_string(), "06-05");
        assert!("june 15".parse::<SimDate>().is_err());
        assert!("06-31".parse::<SimDate>().is_err());
    }
}
