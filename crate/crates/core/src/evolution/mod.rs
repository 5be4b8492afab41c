//! The multicellular GEP evolutionary loop.
//!
//! Each generation decodes and scores every chromosome, copies the best one
//! unchanged into the next generation and fills the rest by tournament
//! selection, one-point crossover and point mutation. Runs are
//! deterministic for a given seed: randomness is confined to the sequential
//! variation phase and scoring results are merged in population order.

mod operators;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use operators::{crossover, crossover_at, mutate, mutate_in_place, tournament_select};

use crate::error::{Error, Result};
use crate::genome::{Chromosome, GeneLayout, Program, Scratch, INPUTS};

/// How mutation rates are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum MutationMode {
    /// Each rate is the probability that an individual undergoes that
    /// mutation; a mutated region then receives `flips` point mutations at
    /// distinct positions.
    PerIndividual { flips: usize },
    /// Each rate is an independent per-symbol resampling probability.
    PerSymbol,
}

impl Default for MutationMode {
    fn default() -> Self {
        MutationMode::PerIndividual { flips: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub gene_mutation_rate: f64,
    pub homeotic_mutation_rate: f64,
    pub dc_mutation_rate: f64,
    pub crossover_rate: f64,
    pub constant_mutation_rate: f64,
    pub tournament_size: usize,
    /// Stop as soon as the best fitness reaches this value.
    pub target_fitness: f64,
    pub rng_seed: u64,
    pub mutation: MutationMode,
    pub layout: GeneLayout,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 100,
            max_generations: 2000,
            gene_mutation_rate: 0.3,
            homeotic_mutation_rate: 0.2,
            dc_mutation_rate: 0.25,
            crossover_rate: 0.3,
            constant_mutation_rate: 0.05,
            tournament_size: 3,
            target_fitness: 1.0,
            rng_seed: 0,
            mutation: MutationMode::default(),
            layout: GeneLayout::default(),
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        for (name, p) in [
            ("gene_mutation_rate", self.gene_mutation_rate),
            ("homeotic_mutation_rate", self.homeotic_mutation_rate),
            ("dc_mutation_rate", self.dc_mutation_rate),
            ("crossover_rate", self.crossover_rate),
            ("constant_mutation_rate", self.constant_mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.population_size < 2 {
            return bad("population_size must be at least 2".into());
        }
        if self.tournament_size < 2 {
            return bad("tournament_size must be at least 2".into());
        }
        if self.max_generations == 0 {
            return bad("max_generations must be positive".into());
        }
        if !(self.target_fitness > 0.0 && self.target_fitness <= 1.0) {
            return bad(format!("target_fitness {} is outside (0, 1]", self.target_fitness));
        }
        self.layout.validate()
    }
}

/// One supervised row: six lags and the value that follows them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub lags: [f64; INPUTS],
    pub target: f64,
    /// Position of the target in the source series.
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSet {
    rows: Vec<Row>,
    pub component_id: usize,
}

impl TrainingSet {
    pub fn new(rows: Vec<Row>, component_id: usize) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if let Some(r) = rows.iter().find(|r| !r.target.is_finite() || r.lags.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite { index: r.index });
        }
        Ok(TrainingSet { rows, component_id })
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// `1 / (1 + RMSE)` over all rows; 0 if any row evaluates to an invalid
/// value.
pub fn fitness(program: &Program, data: &TrainingSet) -> f64 {
    let mut scratch = Scratch::default();
    let mut sse = 0.0;
    for row in data.rows() {
        match program.evaluate_with(&row.lags, &mut scratch) {
            Some(v) => sse += (v - row.target).powi(2),
            None => return 0.0,
        }
    }
    let rmse = (sse / data.len() as f64).sqrt();
    if rmse.is_finite() {
        1.0 / (1.0 + rmse)
    } else {
        0.0
    }
}

/// Root-mean-square error of a program, `None` if any row is invalid.
pub fn rmse(program: &Program, data: &TrainingSet) -> Option<f64> {
    let mut scratch = Scratch::default();
    let mut sse = 0.0;
    for row in data.rows() {
        sse += (program.evaluate_with(&row.lags, &mut scratch)? - row.target).powi(2);
    }
    Some((sse / data.len() as f64).sqrt())
}

/// Outcome of one evolutionary run.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub best: Chromosome,
    pub program: Program,
    pub best_fitness: f64,
    /// Best fitness of each evaluated generation.
    pub fitness_history: Vec<f64>,
    pub generations_run: usize,
}

/// Progress snapshot handed to an observer after each generation is scored.
#[derive(Debug)]
pub struct GenerationRecord<'a> {
    pub generation: usize,
    pub best_fitness: f64,
    pub best: &'a Chromosome,
    pub population: &'a [Chromosome],
    pub fitnesses: &'a [f64],
}

/// Random stream `stream` of the generator seeded with `seed`. Stream 0 is
/// the one [`evolve`] uses.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn evolve(data: &TrainingSet, cfg: &EvolutionConfig) -> Result<EvolutionResult> {
    evolve_with(data, cfg, &mut seeded_rng(cfg.rng_seed, 0), Vec::new(), &mut |_| {})
}

/// Full control over the run: explicit random stream, optional seed
/// individuals for the initial population (the rest is random) and a
/// per-generation observer.
pub fn evolve_with(
    data: &TrainingSet,
    cfg: &EvolutionConfig,
    rng: &mut ChaCha8Rng,
    seeds: Vec<Chromosome>,
    observer: &mut dyn FnMut(&GenerationRecord<'_>),
) -> Result<EvolutionResult> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let n = cfg.population_size;
    let mut population = Vec::with_capacity(n);
    for c in seeds.into_iter().take(n) {
        if c.layout != cfg.layout {
            return Err(Error::LayoutMismatch);
        }
        c.validate()?;
        population.push(c);
    }
    while population.len() < n {
        population.push(Chromosome::random(&cfg.layout, rng)?);
    }

    let mut history = Vec::new();
    loop {
        let fitnesses = score(&population, data);
        let best = best_index(&fitnesses);
        history.push(fitnesses[best]);
        observer(&GenerationRecord {
            generation: history.len() - 1,
            best_fitness: fitnesses[best],
            best: &population[best],
            population: &population,
            fitnesses: &fitnesses,
        });
        if fitnesses[best] >= cfg.target_fitness || history.len() >= cfg.max_generations {
            let best = population.swap_remove(best);
            return Ok(EvolutionResult {
                program: Program::decode(&best),
                best,
                best_fitness: fitnesses_last(&history),
                generations_run: history.len(),
                fitness_history: history,
            });
        }
        population = next_generation(&population, &fitnesses, best, cfg, rng)?;
    }
}

fn fitnesses_last(history: &[f64]) -> f64 {
    *history.last().expect("at least one generation is scored")
}

fn score(population: &[Chromosome], data: &TrainingSet) -> Vec<f64> {
    population.par_iter().map(|c| fitness(&Program::decode(c), data)).collect()
}

/// Index of the maximum, lowest index on ties.
fn best_index(fitnesses: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in fitnesses.iter().enumerate() {
        if f > fitnesses[best] {
            best = i;
        }
    }
    best
}

fn next_generation(
    population: &[Chromosome],
    fitnesses: &[f64],
    best: usize,
    cfg: &EvolutionConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Chromosome>> {
    let n = population.len();
    let mut next = Vec::with_capacity(n);
    next.push(population[best].clone());
    while next.len() < n {
        let a = &population[tournament_select(fitnesses, cfg.tournament_size, rng)];
        let b = &population[tournament_select(fitnesses, cfg.tournament_size, rng)];
        let (mut x, mut y) =
            if rng.random::<f64>() < cfg.crossover_rate { crossover(a, b, rng)? } else { (a.clone(), b.clone()) };
        mutate_in_place(&mut x, cfg, rng);
        next.push(x);
        if next.len() < n {
            mutate_in_place(&mut y, cfg, rng);
            next.push(y);
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests;
