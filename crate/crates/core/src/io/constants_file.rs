use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{write_atomic, IoError};
use crate::model::{AgentKind, ConstantsTable};

/// Constants as stored on disk. Every field is optional; absent fields keep
/// the value of the table the spec is applied to.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wh_base_kwh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wh_per_unit_kwh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wh_per_cow_kwh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cpl_harvest_kwh_per_litre: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cpl_cooling_dx_kwh_per_litre: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cpl_cooling_ib_kwh_per_litre: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpl_equipment_kwh_per_litre: Option<EquipmentSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lights: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wash_pump: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compressor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scraper: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effluent_pump: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<f64>,
}

impl EquipmentSpec {
    fn entries(&self) -> [(AgentKind, Option<f64>); 6] {
        [
            (AgentKind::Lights, self.lights),
            (AgentKind::WashPump, self.wash_pump),
            (AgentKind::Compressor, self.compressor),
            (AgentKind::Scraper, self.scraper),
            (AgentKind::EffluentPump, self.effluent_pump),
            (AgentKind::Other, self.other),
        ]
    }
}

impl ConstantsSpec {
    /// A spec with every field set from `k`.
    pub fn from_table(k: &ConstantsTable) -> Self {
        let get = |kind| k.cpl_for(kind);
        ConstantsSpec {
            wh_base_kwh: Some(k.wh_base),
            wh_per_unit_kwh: Some(k.wh_per_unit),
            wh_per_cow_kwh: Some(k.wh_per_cow),
            cpl_harvest_kwh_per_litre: Some(k.cpl_harvest),
            cpl_cooling_dx_kwh_per_litre: Some(k.cpl_cooling_dx),
            cpl_cooling_ib_kwh_per_litre: Some(k.cpl_cooling_ib),
            cpl_equipment_kwh_per_litre: Some(EquipmentSpec {
                lights: get(AgentKind::Lights),
                wash_pump: get(AgentKind::WashPump),
                compressor: get(AgentKind::Compressor),
                scraper: get(AgentKind::Scraper),
                effluent_pump: get(AgentKind::EffluentPump),
                other: get(AgentKind::Other),
            }),
        }
    }

    /// Overwrites the fields of `base` that this spec sets.
    pub fn apply(&self, base: &ConstantsTable) -> ConstantsTable {
        let mut k = base.clone();
        let set = |slot: &mut f64, value: Option<f64>| {
            if let Some(v) = value {
                *slot = v;
            }
        };
        set(&mut k.wh_base, self.wh_base_kwh);
        set(&mut k.wh_per_unit, self.wh_per_unit_kwh);
        set(&mut k.wh_per_cow, self.wh_per_cow_kwh);
        set(&mut k.cpl_harvest, self.cpl_harvest_kwh_per_litre);
        set(&mut k.cpl_cooling_dx, self.cpl_cooling_dx_kwh_per_litre);
        set(&mut k.cpl_cooling_ib, self.cpl_cooling_ib_kwh_per_litre);
        if let Some(equipment) = &self.cpl_equipment_kwh_per_litre {
            for (kind, value) in equipment.entries() {
                if let Some(v) = value {
                    k.cpl_other.insert(kind, v);
                }
            }
        }
        k
    }
}

/// Reads a constants file over the shipped calibrated defaults.
pub fn read_constants_file(path: &Path) -> Result<ConstantsTable, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let spec: ConstantsSpec = toml::from_str(&text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })?;
    let table = spec.apply(&ConstantsTable::calibrated());
    table.validate().map_err(|source| IoError::Invalid {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(table)
}

pub fn write_constants_file(path: &Path, k: &ConstantsTable) -> Result<(), IoError> {
    let body = toml::to_string(&ConstantsSpec::from_table(k)).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let text =
        format!("# Consumption equation constants (kWh, kWh/unit, kWh/cow, kWh/litre).\n{body}");
    write_atomic(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("constants.toml");
        let mut k = ConstantsTable::calibrated();
        k.cpl_harvest = 0.123_456_789_012_345;
        write_constants_file(&path, &k).unwrap();
        assert_eq!(read_constants_file(&path).unwrap(), k);
    }

    #[test]
    fn partial_file_falls_back_to_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(
            &path,
            "wh_base_kwh = 2.0\n[cpl_equipment_kwh_per_litre]\nlights = 0.5\n",
        )
        .unwrap();
        let k = read_constants_file(&path).unwrap();
        let defaults = ConstantsTable::calibrated();
        assert_eq!(k.wh_base, 2.0);
        assert_eq!(k.cpl_for(AgentKind::Lights), Some(0.5));
        assert_eq!(k.cpl_harvest, defaults.cpl_harvest);
        assert_eq!(
            k.cpl_for(AgentKind::Other),
            defaults.cpl_for(AgentKind::Other)
        );
    }

    #[test]
    fn unknown_key_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "wh_bass_kwh = 2.0\n").unwrap();
        let err = read_constants_file(&path).unwrap_err().to_string();
        assert!(err.contains("wh_bass_kwh"), "{err}");
    }

    #[test]
    fn negative_value_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "cpl_harvest_kwh_per_litre = -1.0\n").unwrap();
        let err = read_constants_file(&path).unwrap_err().to_string();
        assert!(err.contains("cpl_harvest"), "{err}");
    }
}
