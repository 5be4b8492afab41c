//! Genetic operators: tournament selection, region-respecting mutation and
//! one-point crossover over the linearized chromosome.

use rand::seq::index::sample;
use rand::Rng;

use super::{EvolutionConfig, MutationMode};
use crate::error::{Error, Result};
use crate::genome::{random_constant, Chromosome};

/// Index of the fittest of `size` uniformly drawn entrants (with
/// replacement). Ties go to the lowest index.
pub fn tournament_select<R: Rng + ?Sized>(fitnesses: &[f64], size: usize, rng: &mut R) -> usize {
    assert!(!fitnesses.is_empty(), "tournament over an empty population");
    let mut winner = rng.random_range(0..fitnesses.len());
    for _ in 1..size.max(1) {
        let challenger = rng.random_range(0..fitnesses.len());
        let (fw, fc) = (fitnesses[winner], fitnesses[challenger]);
        if fc > fw || (fc == fw && challenger < winner) {
            winner = challenger;
        }
    }
    winner
}

/// Positions to resample within a region of `len` symbols under `rate`.
fn mutation_sites<R: Rng + ?Sized>(mode: MutationMode, rate: f64, len: usize, rng: &mut R) -> Vec<usize> {
    if len == 0 || rate <= 0.0 {
        return Vec::new();
    }
    match mode {
        MutationMode::PerIndividual { flips } => {
            if rng.random::<f64>() < rate {
                sample(rng, len, flips.min(len)).into_vec()
            } else {
                Vec::new()
            }
        }
        MutationMode::PerSymbol => (0..len).filter(|_| rng.random::<f64>() < rate).collect(),
    }
}

/// Point mutation in place. Every normal gene's coding region (head and
/// tail), every Dc domain and the homeotic gene are mutated independently
/// under their own rates. Head symbols resample from functions and
/// terminals, tails from terminals, Dc symbols from the constant slots and
/// homeotic symbols from their own alphabets; each constant is redrawn with
/// the constant mutation rate.
pub fn mutate_in_place<R: Rng + ?Sized>(c: &mut Chromosome, cfg: &EvolutionConfig, rng: &mut R) {
    let layout = c.layout;
    let head_alpha = layout.head_alphabet();
    let tail_alpha = layout.terminals();

    let coding_len = layout.head_len + layout.tail_len();
    let dc_len = layout.dc_len();
    for gene in &mut c.genes {
        for pos in mutation_sites(cfg.mutation, cfg.gene_mutation_rate, coding_len, rng) {
            if pos < layout.head_len {
                gene.head[pos] = head_alpha[rng.random_range(0..head_alpha.len())];
            } else {
                gene.tail[pos - layout.head_len] = tail_alpha[rng.random_range(0..tail_alpha.len())];
            }
        }
        for pos in mutation_sites(cfg.mutation, cfg.dc_mutation_rate, dc_len, rng) {
            gene.dc[pos] = rng.random_range(0..layout.const_len) as u8;
        }
    }

    if !layout.fixed_link() {
        let link_head = layout.link_head_alphabet();
        let link_tail = layout.link_terminals();
        for pos in mutation_sites(cfg.mutation, cfg.homeotic_mutation_rate, layout.link_len(), rng) {
            if pos < layout.link_head_len {
                c.link.head[pos] = link_head[rng.random_range(0..link_head.len())];
            } else {
                c.link.tail[pos - layout.link_head_len] = link_tail[rng.random_range(0..link_tail.len())];
            }
        }
    }

    if cfg.constant_mutation_rate > 0.0 {
        for gene in &mut c.genes {
            for constant in &mut gene.constants {
                if rng.random::<f64>() < cfg.constant_mutation_rate {
                    *constant = random_constant(rng);
                }
            }
        }
    }
}

pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, cfg: &EvolutionConfig, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    mutate_in_place(&mut out, cfg, rng);
    out
}

/// One-point crossover at a uniformly drawn cut.
pub fn crossover<R: Rng + ?Sized>(a: &Chromosome, b: &Chromosome, rng: &mut R) -> Result<(Chromosome, Chromosome)> {
    if a.layout != b.layout {
        return Err(Error::LayoutMismatch);
    }
    let cut = rng.random_range(0..a.layout.chromosome_len());
    crossover_at(a, b, cut)
}

/// One-point crossover at `cut` on the linearized chromosome: each normal
/// gene's head, tail and Dc domain in turn, then the homeotic head and tail.
/// The first child takes positions before `cut` from `a` and the rest from
/// `b`. A gene's constant array travels with the part of the gene after the
/// cut.
pub fn crossover_at(a: &Chromosome, b: &Chromosome, cut: usize) -> Result<(Chromosome, Chromosome)> {
    if a.layout != b.layout {
        return Err(Error::LayoutMismatch);
    }
    let layout = a.layout;
    let mut first = a.clone();
    let mut second = b.clone();
    let gene_len = layout.gene_len();
    for g in 0..layout.genes {
        let start = g * gene_len;
        let (x, y) = (&mut first.genes[g], &mut second.genes[g]);
        let tail_start = start + layout.head_len;
        let dc_start = tail_start + layout.tail_len();
        swap_suffix(&mut x.head, &mut y.head, start, cut);
        swap_suffix(&mut x.tail, &mut y.tail, tail_start, cut);
        swap_suffix(&mut x.dc, &mut y.dc, dc_start, cut);
        // The owning gene's constants go with its tail-side segment.
        if cut < start + gene_len {
            std::mem::swap(&mut x.constants, &mut y.constants);
        }
    }
    let link_start = layout.genes * gene_len;
    swap_suffix(&mut first.link.head, &mut second.link.head, link_start, cut);
    swap_suffix(&mut first.link.tail, &mut second.link.tail, link_start + layout.link_head_len, cut);
    Ok((first, second))
}

/// Swaps the elements of a region starting at linear position `start` whose
/// position is at or after `cut`.
fn swap_suffix<T>(x: &mut [T], y: &mut [T], start: usize, cut: usize) {
    let from = cut.saturating_sub(start).min(x.len());
    x[from..].swap_with_slice(&mut y[from..]);
}
