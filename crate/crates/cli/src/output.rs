use std::fmt::Write as _;
use std::path::Path;

use wtgep::dwt::Decomposition;
use wtgep::forecast::{ForecastReport, SeriesDataset};

use crate::error::{CliError, Result};

/// Formats `v` with 17 significant digits, which round-trips every `f64`.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.16e}")
    }
}

/// The human-readable results table, three decimals per metric.
pub fn summary_table(report: &ForecastReport) -> String {
    let width = report.method.len().max(6);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<width$}  {:>10}  {:>10}  {:>10}  {:>10}",
        "method", "fit RMSE", "fit MAE", "pred RMSE", "pred MAE"
    );
    let _ = writeln!(
        s,
        "{:<width$}  {:>10.3}  {:>10.3}  {:>10.3}  {:>10.3}",
        report.method, report.fit.rmse, report.fit.mae, report.predict.rmse, report.predict.mae
    );
    s
}

pub fn models_text(report: &ForecastReport) -> String {
    let mut s = format!("# {} on {}\n", report.method, report.dataset);
    for c in &report.components {
        let _ = writeln!(s, "\n[{}] fitness={} generations={}", c.label, fmt_sig(c.best_fitness), c.generations_run);
        let _ = writeln!(s, "y = {}", c.expression);
        s.push_str(&c.chromosome);
        if !c.chromosome.ends_with('\n') {
            s.push('\n');
        }
    }
    s
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    std::fs::write(path, contents).map_err(CliError::io(path))
}

pub fn write_predictions(path: &Path, report: &ForecastReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["index".to_string(), "label".into(), "split".into(), "actual".into(), "predicted".into()];
    header.extend(report.components.iter().map(|c| c.label.clone()));
    w.write_record(&header)?;
    for test in [false, true] {
        let (split, index, labels, actual, predicted) = if test {
            ("test", &report.test_index, &report.test_labels, &report.test_actual, &report.test_predicted)
        } else {
            ("train", &report.train_index, &report.train_labels, &report.train_actual, &report.train_predicted)
        };
        for i in 0..index.len() {
            let mut record = vec![
                index[i].to_string(),
                labels[i].clone(),
                split.to_string(),
                fmt_sig(actual[i]),
                fmt_sig(predicted[i]),
            ];
            record.extend(
                report
                    .components
                    .iter()
                    .map(|c| fmt_sig(if test { c.test_predictions[i] } else { c.train_predictions[i] })),
            );
            w.write_record(&record)?;
        }
    }
    w.flush().map_err(CliError::io(path))
}

/// Writes `report.json`, `predictions.csv`, `models.txt` and `summary.txt`
/// into `dir`, creating it if needed.
pub fn write_run(dir: &Path, report: &ForecastReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    write_file(&dir.join("report.json"), json.as_bytes())?;
    write_predictions(&dir.join("predictions.csv"), report)?;
    write_file(&dir.join("models.txt"), models_text(report).as_bytes())?;
    write_file(&dir.join("summary.txt"), summary_table(report).as_bytes())
}

/// Writes `components.csv`: one column per component plus the input.
pub fn write_components(dir: &Path, dataset: &SeriesDataset, decomposition: &Decomposition) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let path = dir.join("components.csv");
    let mut w = csv::Writer::from_path(&path)?;
    let mut header = vec!["index".to_string(), "label".into(), "value".into()];
    header.extend(decomposition.labels());
    w.write_record(&header)?;
    for (t, v) in dataset.values.iter().enumerate() {
        let mut record = vec![t.to_string(), dataset.label(t), fmt_sig(*v)];
        record.extend(decomposition.components.iter().map(|c| fmt_sig(c[t])));
        w.write_record(&record)?;
    }
    w.flush().map_err(CliError::io(&path))
}
