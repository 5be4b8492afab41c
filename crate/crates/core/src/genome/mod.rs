//! Multicellular GEP genotype and its decoding into evaluable programs.
//!
//! A chromosome holds `k` normal genes and one homeotic gene. Each normal
//! gene is a Karva string (a head over functions and terminals, a tail over
//! terminals only) followed by a Dc domain naming slots in the gene's
//! constant array. The homeotic gene combines the normal genes' sub-trees
//! with the same function set; its terminals are gene references.

mod expr;
mod gene;
mod symbol;
mod text;

pub use expr::{decode_gene, decode_link, ConstStyle, ExprTree, Node, Program, Scratch};
pub use gene::{random_constant, Chromosome, GeneLayout, HomeoticGene, NormalGene, CONSTANT_RANGE, MAX_GENES};

pub use symbol::{dc_code, dc_from_code, Func, LinkSymbol, Symbol, INPUTS};

#[cfg(test)]
mod tests;
