use std::path::Path;

use wtgep::forecast::SeriesDataset;

use crate::error::{CliError, Result};

/// Reads one series from a headed CSV file.
///
/// `column` names the value column; without it the last column is used.
/// When the value column is not the first one, the first column supplies the
/// sample labels (typically years). Row numbers in diagnostics count data
/// rows from 1, not counting the header.
pub fn load_csv(path: &Path, column: Option<&str>) -> Result<SeriesDataset> {
    let input = |reason: String| CliError::Input { path: path.to_path_buf(), reason };
    let file = std::fs::File::open(path).map_err(CliError::io(path))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| input(e.to_string()))?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(input("missing header row".into()));
    }
    let value_col = match column {
        Some(name) => headers.iter().position(|h| h == name).ok_or_else(|| {
            input(format!("no column named '{name}' (have: {})", headers.iter().collect::<Vec<_>>().join(", ")))
        })?,
        None => headers.len() - 1,
    };
    let label_col = (value_col != 0).then_some(0);
    let value_name = &headers[value_col];

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| input(format!("row {row}: {e}")))?;
        let cell = record.get(value_col).unwrap_or("");
        if cell.is_empty() {
            return Err(input(format!("row {row}: blank value in column '{value_name}'")));
        }
        let v: f64 =
            cell.parse().map_err(|_| input(format!("row {row}: '{cell}' in column '{value_name}' is not a number")))?;
        if !v.is_finite() {
            return Err(input(format!("row {row}: non-finite value '{cell}' in column '{value_name}'")));
        }
        values.push(v);
        if let Some(c) = label_col {
            labels.push(record.get(c).unwrap_or("").to_string());
        }
    }
    let name = path.file_stem().map_or_else(|| "series".to_string(), |s| s.to_string_lossy().into_owned());
    let labels = label_col.map(|_| labels);
    SeriesDataset::new(name, values, labels).map_err(|e| input(e.to_string()))
}
