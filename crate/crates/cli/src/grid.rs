use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use wtgep::forecast::{run_wtgeprp, ForecastConfig, Metrics, SeriesDataset};

use crate::config::BasisChoice;
use crate::error::{CliError, Result};
use crate::output::fmt_sig;

/// Bases x levels x seeds to sweep. A `none` basis ignores the level list
/// and contributes one undecomposed cell per seed.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub bases: Vec<BasisChoice>,
    pub levels: Vec<usize>,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub basis: BasisChoice,
    pub levels: usize,
    pub seed: u64,
}

impl GridSpec {
    /// The cells in `(basis, levels, seed)` order, without duplicates.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let wavelets = self.bases.iter().any(|b| *b != BasisChoice::None);
        if self.bases.is_empty() || self.seeds.is_empty() || (wavelets && self.levels.is_empty()) {
            return Err(CliError::Config("the grid has no cells".into()));
        }
        let mut cells = Vec::new();
        for &basis in &self.bases {
            let levels: &[usize] = if basis == BasisChoice::None { &[0] } else { &self.levels };
            for &l in levels {
                for &seed in &self.seeds {
                    cells.push(Cell { basis, levels: l, seed });
                }
            }
        }
        cells.sort_by_key(|c| (c.basis.rank(), c.levels, c.seed));
        cells.dedup();
        Ok(cells)
    }
}

#[derive(Clone, Debug)]
pub struct CellResult {
    pub cell: Cell,
    /// Fit and prediction metrics, or the error message.
    pub outcome: Result<(Metrics, Metrics), String>,
    pub wall_time: f64,
}

/// Runs every cell on the current rayon pool. Failures are recorded, not
/// propagated.
pub fn run_grid(dataset: &SeriesDataset, base: &ForecastConfig, spec: &GridSpec) -> Result<Vec<CellResult>> {
    let cells = spec.cells()?;
    Ok(cells
        .into_par_iter()
        .map(|cell| {
            let start = Instant::now();
            let mut cfg = base.clone();
            cfg.basis = cell.basis.basis();
            cfg.levels = cell.levels;
            cfg.evolution.rng_seed = cell.seed;
            let outcome = run_wtgeprp(dataset, &cfg).map(|r| (r.fit, r.predict)).map_err(|e| e.to_string());
            CellResult { cell, outcome, wall_time: start.elapsed().as_secs_f64() }
        })
        .collect())
}

/// Index of the successful cell with the lowest prediction RMSE; ties go to
/// the earlier cell.
pub fn best_cell(results: &[CellResult]) -> Option<usize> {
    results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.outcome.as_ref().ok().map(|(_, p)| (i, p.rmse)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

pub fn write_grid(path: &Path, results: &[CellResult]) -> Result<()> {
    let best = best_cell(results);
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "basis",
        "levels",
        "seed",
        "fit_rmse",
        "fit_mae",
        "pred_rmse",
        "pred_mae",
        "wall_time",
        "status",
        "best",
    ])?;
    for (i, r) in results.iter().enumerate() {
        let c = &r.cell;
        let mut record = vec![c.basis.to_string(), c.levels.to_string(), c.seed.to_string()];
        match &r.outcome {
            Ok((fit, pred)) => {
                record.extend([fmt_sig(fit.rmse), fmt_sig(fit.mae), fmt_sig(pred.rmse), fmt_sig(pred.mae)]);
                record.push(format!("{:.3}", r.wall_time));
                record.push("ok".into());
            }
            Err(e) => {
                record.extend(std::iter::repeat_n(String::new(), 4));
                record.push(format!("{:.3}", r.wall_time));
                record.push(format!("error: {e}"));
            }
        }
        record.push(u8::from(best == Some(i)).to_string());
        w.write_record(&record)?;
    }
    w.flush().map_err(CliError::io(path))
}
