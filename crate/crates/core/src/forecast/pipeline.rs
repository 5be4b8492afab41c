use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{metrics, split_point, window, ForecastConfig, Metrics, SeriesDataset};
use crate::dwt;
use crate::error::Result;
use crate::evolution::{evolve_with, seeded_rng, EvolutionConfig, EvolutionResult, GenerationRecord, Row, TrainingSet};
use crate::genome::{ConstStyle, Program, Scratch, INPUTS};

/// Fits one component model. The pipeline hands every trainer only the
/// training rows of its component.
pub trait Trainer: Sync {
    fn train(&self, data: &TrainingSet, cfg: &EvolutionConfig, rng: &mut ChaCha8Rng) -> Result<EvolutionResult>;
}

type Progress<'a> = dyn Fn(usize, &GenerationRecord<'_>) + Sync + 'a;

/// The evolutionary trainer, optionally reporting each generation together
/// with the component id.
#[derive(Default)]
pub struct GepTrainer<'a> {
    pub progress: Option<&'a Progress<'a>>,
}

impl Trainer for GepTrainer<'_> {
    fn train(&self, data: &TrainingSet, cfg: &EvolutionConfig, rng: &mut ChaCha8Rng) -> Result<EvolutionResult> {
        match self.progress {
            Some(progress) => evolve_with(data, cfg, rng, Vec::new(), &mut |rec| progress(data.component_id, rec)),
            None => evolve_with(data, cfg, rng, Vec::new(), &mut |_| {}),
        }
    }
}

/// The fitted model of one component and its predictions.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentModel {
    pub component_id: usize,
    pub label: String,
    /// Serialized chromosome.
    pub chromosome: String,
    /// Infix expression with numeric constants.
    pub expression: String,
    pub best_fitness: f64,
    pub generations_run: usize,
    pub train_fit_rmse: Option<f64>,
    pub train_predictions: Vec<f64>,
    pub test_predictions: Vec<f64>,
    /// The component's own values at the test targets (default mode only).
    pub test_targets: Option<Vec<f64>>,
    /// Rows where the model evaluated to an invalid value and 0 was used.
    pub invalid_predictions: usize,
    #[serde(skip)]
    pub result: EvolutionResult,
}

/// Everything a run produces.
#[derive(Clone, Debug, Serialize)]
pub struct ForecastReport {
    pub dataset: String,
    pub method: String,
    pub config: ForecastConfig,
    pub components: Vec<ComponentModel>,
    pub train_index: Vec<usize>,
    pub test_index: Vec<usize>,
    pub train_labels: Vec<String>,
    pub test_labels: Vec<String>,
    pub train_actual: Vec<f64>,
    pub test_actual: Vec<f64>,
    /// Sum of the component predictions at each training row.
    pub train_predicted: Vec<f64>,
    /// Sum of the component predictions at each test row.
    pub test_predicted: Vec<f64>,
    pub fit: Metrics,
    pub predict: Metrics,
}

pub fn run_wtgeprp(dataset: &SeriesDataset, cfg: &ForecastConfig) -> Result<ForecastReport> {
    run_with(dataset, cfg, &GepTrainer::default())
}

/// Runs the pipeline with a caller-supplied trainer.
pub fn run_with(dataset: &SeriesDataset, cfg: &ForecastConfig, trainer: &dyn Trainer) -> Result<ForecastReport> {
    cfg.validate()?;
    let x = &dataset.values;
    let rows = window(x)?.len();
    let n_train = split_point(rows, cfg.train_fraction)?;
    // Target index of the first test row.
    let origin = n_train + INPUTS;

    let train_parts = split_components(&x[..if cfg.strict_causal { origin } else { x.len() }], cfg)?;
    let labels = dwt::component_labels(cfg.levels);

    // Lags of every test row per component.
    let test_lags: Vec<Vec<Row>> = if cfg.strict_causal {
        causal_test_rows(x, origin, cfg)?
    } else {
        train_parts.iter().map(|c| Ok(window(c)?.rows[n_train..].to_vec())).collect::<Result<_>>()?
    };

    let components = train_parts
        .par_iter()
        .enumerate()
        .map(|(id, series)| {
            let windowed = window(series)?;
            let train = TrainingSet::new(windowed.rows[..n_train].to_vec(), id)?;
            let mut rng = seeded_rng(cfg.evolution.rng_seed, id as u64);
            let result = trainer.train(&train, &cfg.evolution, &mut rng)?;
            Ok(fit_component(id, &labels[id], result, &train, &test_lags[id], !cfg.strict_causal))
        })
        .collect::<Result<Vec<_>>>()?;

    let test_rows = rows - n_train;
    let train_predicted = sum_predictions(&components, n_train, |c| &c.train_predictions);
    let test_predicted = sum_predictions(&components, test_rows, |c| &c.test_predictions);
    let train_index: Vec<usize> = (INPUTS..origin).collect();
    let test_index: Vec<usize> = (origin..x.len()).collect();
    let train_actual: Vec<f64> = train_index.iter().map(|&t| x[t]).collect();
    let test_actual: Vec<f64> = test_index.iter().map(|&t| x[t]).collect();
    Ok(ForecastReport {
        dataset: dataset.name.clone(),
        method: cfg.method_label(),
        config: cfg.clone(),
        fit: metrics(&train_predicted, &train_actual)?,
        predict: metrics(&test_predicted, &test_actual)?,
        train_labels: train_index.iter().map(|&t| dataset.label(t)).collect(),
        test_labels: test_index.iter().map(|&t| dataset.label(t)).collect(),
        components,
        train_index,
        test_index,
        train_actual,
        test_actual,
        train_predicted,
        test_predicted,
    })
}

fn split_components(x: &[f64], cfg: &ForecastConfig) -> Result<Vec<Vec<f64>>> {
    match cfg.basis {
        None => Ok(vec![x.to_vec()]),
        Some(basis) => Ok(dwt::components(x, &basis.filter_bank(), cfg.levels, cfg.extension)?.components),
    }
}

/// Per component, the lag rows of each test target computed from a
/// decomposition of the samples strictly before that target.
fn causal_test_rows(x: &[f64], origin: usize, cfg: &ForecastConfig) -> Result<Vec<Vec<Row>>> {
    let mut per_component = vec![Vec::with_capacity(x.len() - origin); cfg.levels + 1];
    for t in origin..x.len() {
        let parts = split_components(&x[..t], cfg)?;
        for (c, part) in parts.iter().enumerate() {
            per_component[c].push(Row {
                lags: std::array::from_fn(|k| part[t - INPUTS + k]),
                // The component value at t is unknown at the origin.
                target: f64::NAN,
                index: t,
            });
        }
    }
    Ok(per_component)
}

fn predict_rows(program: &Program, rows: &[Row], invalid: &mut usize) -> Vec<f64> {
    let mut scratch = Scratch::default();
    rows.iter()
        .map(|r| {
            program.evaluate_with(&r.lags, &mut scratch).unwrap_or_else(|| {
                *invalid += 1;
                0.0
            })
        })
        .collect()
}

fn fit_component(
    id: usize,
    label: &str,
    result: EvolutionResult,
    train: &TrainingSet,
    test: &[Row],
    test_targets_known: bool,
) -> ComponentModel {
    let mut invalid = 0;
    let train_predictions = predict_rows(&result.program, train.rows(), &mut invalid);
    let test_predictions = predict_rows(&result.program, test, &mut invalid);
    ComponentModel {
        component_id: id,
        label: label.to_string(),
        chromosome: result.best.to_string(),
        expression: result.program.to_infix(ConstStyle::Value),
        best_fitness: result.best_fitness,
        generations_run: result.generations_run,
        train_fit_rmse: crate::evolution::rmse(&result.program, train),
        train_predictions,
        test_predictions,
        test_targets: test_targets_known.then(|| test.iter().map(|r| r.target).collect()),
        invalid_predictions: invalid,
        result,
    }
}

fn sum_predictions(components: &[ComponentModel], len: usize, pick: impl Fn(&ComponentModel) -> &Vec<f64>) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for c in components {
        for (o, p) in out.iter_mut().zip(pick(c)) {
            *o += p;
        }
    }
    out
}
