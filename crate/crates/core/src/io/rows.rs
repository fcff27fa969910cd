use std::path::Path;

use super::{write_atomic, IoError};
use crate::calibration::ReferenceRow;

/// Reads reference rows from CSV with header `herd_size,dssed_kwh,abm_kwh,error_pct`.
pub fn read_reference_rows(path: &Path) -> Result<Vec<ReferenceRow>, IoError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    reader
        .deserialize()
        .map(|row| {
            row.map_err(|e| IoError::Parse {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_reference_rows(path: &Path, rows: &[ReferenceRow]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| IoError::Csv(csv::Error::from(e.into_error())))?;
    write_atomic(path, &bytes)
}
