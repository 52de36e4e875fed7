use crate::data::Dataset;
use crate::error::{Error, Result};
use ndarray::Array2;
use std::path::Path;

/// Reads a headered CSV into a dataset. The label column is selected by
/// name; every other column becomes a feature, in file order. Labels may be
/// -1/+1 or 0/1 (0 is remapped to -1), but not a mixture of both schemes.
pub fn load_csv(path: &Path, label_column: &str) -> Result<Dataset> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?
        .clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| {
            Error::data(format!(
                "{}: no column named '{label_column}' in header",
                path.display()
            ))
        })?;
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();
    if names.is_empty() {
        return Err(Error::data(format!(
            "{}: no feature columns besides the label",
            path.display()
        )));
    }

    let mut rows: Vec<f64> = Vec::new();
    let mut raw_labels: Vec<f64> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
        if record.len() != headers.len() {
            return Err(Error::data(format!(
                "row {}: {} fields, header has {}",
                r + 2,
                record.len(),
                headers.len()
            )));
        }
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| {
                Error::data(format!(
                    "row {}, column '{}': cannot parse '{}' as a number",
                    r + 2,
                    &headers[j],
                    field
                ))
            })?;
            if j == label_idx {
                raw_labels.push(value);
            } else {
                if !value.is_finite() {
                    return Err(Error::data(format!(
                        "row {}, column '{}': non-finite value '{}'",
                        r + 2,
                        &headers[j],
                        field
                    )));
                }
                rows.push(value);
            }
        }
    }
    if raw_labels.is_empty() {
        return Err(Error::data(format!("{}: no data rows", path.display())));
    }

    let has_zero = raw_labels.contains(&0.0);
    let has_neg = raw_labels.contains(&-1.0);
    if has_zero && has_neg {
        return Err(Error::data(
            "mixed label conventions: found both 0 and -1".to_string(),
        ));
    }
    let mut y = Vec::with_capacity(raw_labels.len());
    for (r, &v) in raw_labels.iter().enumerate() {
        let label = if v == 1.0 {
            1
        } else if v == -1.0 || v == 0.0 {
            -1
        } else {
            return Err(Error::data(format!(
                "row {}: label {} is not -1, 0 or 1",
                r + 2,
                v
            )));
        };
        y.push(label);
    }

    let n = y.len();
    let x = Array2::from_shape_vec((n, names.len()), rows)
        .expect("row-major fill matches dimensions");
    Dataset::new(x, y, names)
}

/// Writes the dataset as CSV: feature columns under their names, then a
/// final `label` column holding -1/+1. Floats use the shortest
/// round-trippable decimal form, so rewriting a loaded file is lossless.
pub fn write_csv(ds: &Dataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    let mut header: Vec<&str> = ds.names().iter().map(|s| s.as_str()).collect();
    header.push("label");
    writer
        .write_record(&header)
        .map_err(|e| Error::data(e.to_string()))?;
    for (row, &label) in ds.x().rows().into_iter().zip(ds.y()) {
        let mut record: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        record.push(format!("{label}"));
        writer
            .write_record(&record)
            .map_err(|e| Error::data(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
