use serde::{Deserialize, Serialize};

use super::IoError;
use crate::model::{AgentKind, EnergyKwh};
use crate::simulator::{DailyReport, PeriodReport};

pub const CSV_HOURLY_HEADER: [&str; 4] = ["date", "hour", "agent", "kwh"];
const CSV_DAILY_HEADER: [&str; 3] = ["date", "agent", "kwh"];
const CSV_PERIOD_HEADER: [&str; 3] = ["period", "agent", "kwh"];
const TOTAL: &str = "total";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Hourly,
    Daily,
    Weekly,
    Monthly,
    Yearly,
}

/// `value` rounded to six significant digits, in plain decimal notation.
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 {
            "0".into()
        } else {
            value.to_string()
        };
    }
    let magnitude = value.abs().log10().floor() as i32;
    if magnitude >= 5 {
        let scale = 10f64.powi(magnitude - 5);
        format!("{:.0}", (value / scale).round() * scale)
    } else {
        let decimals = (5 - magnitude) as usize;
        let s = format!("{value:.decimals$}");
        // The rounding above can carry into a new digit (9.999995 -> 10.00000).
        let trimmed = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if trimmed == "-0" {
            "0".into()
        } else {
            trimmed
        }
    }
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, IoError> {
    let bytes = writer
        .into_inner()
        .map_err(|e| IoError::Csv(csv::Error::from(e.into_error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One row per agent per hour plus a `total` row per hour.
pub fn hourly_csv(days: &[DailyReport]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HOURLY_HEADER)?;
    for day in days {
        let date = day.date.to_string();
        for hour in 0..24 {
            let h = hour.to_string();
            for (kind, profile) in &day.per_agent {
                w.write_record([&date, &h, kind.name(), &format_sig6(profile[hour])])?;
            }
            w.write_record([&date, &h, TOTAL, &format_sig6(day.total_hourly[hour])])?;
        }
    }
    finish(w)
}

/// One row per agent per day plus a `total` row per day.
pub fn daily_csv(days: &[DailyReport]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_DAILY_HEADER)?;
    for day in days {
        let date = day.date.to_string();
        for kind in AgentKind::ALL {
            w.write_record([
                &date,
                kind.name(),
                &format_sig6(day.agent_total(kind).value()),
            ])?;
        }
        w.write_record([&date, TOTAL, &format_sig6(day.total.value())])?;
    }
    finish(w)
}

pub fn period_csv(report: &PeriodReport) -> Result<String, IoError> {
    periods_csv(std::slice::from_ref(report))
}

/// One row per agent per period plus a `total` row per period.
pub fn periods_csv(reports: &[PeriodReport]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_PERIOD_HEADER)?;
    for report in reports {
        for (kind, energy) in &report.per_agent_totals {
            w.write_record([&report.label, kind.name(), &format_sig6(energy.value())])?;
        }
        w.write_record([&report.label, TOTAL, &format_sig6(report.total.value())])?;
    }
    finish(w)
}

/// `<axis>,avg_day_kwh` rows, e.g. `herd_size,avg_day_kwh`.
pub fn sweep_csv(axis: &str, points: &[(u32, EnergyKwh)]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([axis, "avg_day_kwh"])?;
    for (value, energy) in points {
        w.write_record([value.to_string(), format_sig6(energy.value())])?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FarmConfig, SimDate};
    use crate::simulator::simulate_day;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(72.745_123_4), "72.7451");
        assert_eq!(format_sig6(0.001_234_567_8), "0.00123457");
        assert_eq!(format_sig6(1_234_567.0), "1234570");
        assert_eq!(format_sig6(3.0), "3");
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(9.999_999_9), "10");
    }

    #[test]
    fn hourly_csv_shape() {
        let day = simulate_day(&FarmConfig::table1(), SimDate::new(6, 15).unwrap()).unwrap();
        let text = hourly_csv(&[day]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "date,hour,agent,kwh");
        assert_eq!(lines.len(), 1 + 24 * 10);
        assert!(lines[1].starts_with("06-15,0,water_heating,"));
        assert!(lines[10].starts_with("06-15,0,total,"));
    }

    #[test]
    fn daily_csv_has_nine_agents_and_total() {
        let day = simulate_day(&FarmConfig::table1(), SimDate::new(6, 15).unwrap()).unwrap();
        let text = daily_csv(&[day]).unwrap();
        assert_eq!(text.lines().count(), 1 + 10);
        assert!(text.lines().last().unwrap().starts_with("06-15,total,"));
    }
}
