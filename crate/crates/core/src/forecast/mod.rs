//! The decompose, window, evolve, predict and reconstruct pipeline.
//!
//! By default the whole series is decomposed before it is windowed and
//! split, so boundary filtering near the end of the training period sees
//! test-period samples. That ordering is kept deliberately for
//! comparability; [`ForecastConfig::strict_causal`] switches to decomposing
//! only the history available at each forecast origin.

mod pipeline;

use serde::{Deserialize, Serialize};

pub use pipeline::{run_with, run_wtgeprp, ComponentModel, ForecastReport, GepTrainer, Trainer};

use crate::dwt::{Basis, Extension};
use crate::error::{Error, Result};
use crate::evolution::{EvolutionConfig, Row};
use crate::genome::INPUTS;

/// Window length: six lags and the value they predict.
pub const WINDOW: usize = INPUTS + 1;

/// Minimum series length the pipeline accepts.
pub const MIN_SERIES_LEN: usize = 2 * WINDOW;

/// A named univariate series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDataset {
    pub name: String,
    pub values: Vec<f64>,
    /// Optional per-sample labels such as years.
    pub labels: Option<Vec<String>>,
}

impl SeriesDataset {
    pub fn new(name: impl Into<String>, values: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if values.len() < MIN_SERIES_LEN {
            return Err(Error::InvalidDataset(format!(
                "{} samples, at least {MIN_SERIES_LEN} are required",
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(l) = &labels {
            if l.len() != values.len() {
                return Err(Error::LengthMismatch { left: l.len(), right: values.len() });
            }
        }
        Ok(SeriesDataset { name: name.into(), values, labels })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Label of sample `i`, falling back to the index itself.
    pub fn label(&self, i: usize) -> String {
        self.labels.as_ref().map_or_else(|| i.to_string(), |l| l[i].clone())
    }

    pub fn summary(&self) -> Summary {
        let n = self.values.len() as f64;
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        Summary {
            len: self.values.len(),
            max,
            min,
            mean: self.values.iter().sum::<f64>() / n,
            extreme_ratio: max / min,
        }
    }
}

/// Descriptive statistics of a series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub len: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    /// `max / min`.
    pub extreme_ratio: f64,
}

/// Supervised rows cut from a series; row `j` has lags `x[j..j+6]` and
/// target `x[j+6]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedData {
    pub rows: Vec<Row>,
}

impl WindowedData {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.target).collect()
    }
}

pub fn window(x: &[f64]) -> Result<WindowedData> {
    if x.len() < WINDOW {
        return Err(Error::WindowTooLong { len: x.len(), window: WINDOW });
    }
    let rows = (INPUTS..x.len())
        .map(|t| Row { lags: std::array::from_fn(|k| x[t - INPUTS + k]), target: x[t], index: t })
        .collect();
    Ok(WindowedData { rows })
}

/// Number of training rows for a chronological split.
pub fn split_point(rows: usize, train_fraction: f64) -> Result<usize> {
    let degenerate = || Error::DegenerateSplit { rows, fraction: train_fraction };
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(degenerate());
    }
    let cut = (rows as f64 * train_fraction).floor() as usize;
    if cut == 0 || cut >= rows {
        return Err(degenerate());
    }
    Ok(cut)
}

/// Chronological split at `floor(rows * train_fraction)`; no shuffling.
pub fn split(data: &WindowedData, train_fraction: f64) -> Result<(WindowedData, WindowedData)> {
    let cut = split_point(data.len(), train_fraction)?;
    Ok((WindowedData { rows: data.rows[..cut].to_vec() }, WindowedData { rows: data.rows[cut..].to_vec() }))
}

/// Error metrics of a prediction run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub rmse: f64,
    pub mae: f64,
}

pub fn metrics(predicted: &[f64], actual: &[f64]) -> Result<Metrics> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch { left: predicted.len(), right: actual.len() });
    }
    if predicted.is_empty() {
        return Err(Error::Empty);
    }
    let n = predicted.len() as f64;
    let (sse, sae) =
        predicted.iter().zip(actual).fold((0.0, 0.0), |(s, a), (p, y)| (s + (p - y).powi(2), a + (p - y).abs()));
    Ok(Metrics { rmse: (sse / n).sqrt(), mae: sae / n })
}

/// Settings of one forecasting run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForecastConfig {
    /// `None` bypasses the wavelet stage (and requires `levels == 0`).
    pub basis: Option<Basis>,
    pub levels: usize,
    pub extension: Extension,
    pub train_fraction: f64,
    pub strict_causal: bool,
    pub evolution: EvolutionConfig,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        ForecastConfig {
            basis: Some(Basis::Coif5),
            levels: 4,
            extension: Extension::Symmetric,
            train_fraction: 0.85,
            strict_causal: false,
            evolution: EvolutionConfig::default(),
        }
    }
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<()> {
        match (self.basis, self.levels) {
            (None, 0) => {}
            (None, _) => return Err(Error::InvalidConfig("levels must be 0 without a wavelet basis".into())),
            (Some(_), 0) => return Err(Error::InvalidConfig("a wavelet basis needs at least one level".into())),
            (Some(_), _) => {}
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!("train_fraction {} is outside (0, 1)", self.train_fraction)));
        }
        self.evolution.validate()
    }

    /// Short name of the method variant this configuration runs.
    pub fn method_label(&self) -> String {
        match self.basis {
            Some(b) => format!("WT-MC-GEP ({b}, {} levels)", self.levels),
            None if self.evolution.layout.genes == 1 => "GEP (baseline)".to_string(),
            None => "MC-GEP".to_string(),
        }
    }
}
