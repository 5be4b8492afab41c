use rand::Rng;
use serde::{Deserialize, Serialize};

use super::symbol::{Func, LinkSymbol, Symbol, INPUTS};
use crate::error::{Error, Result};

/// Range of freshly drawn random numerical constants.
pub const CONSTANT_RANGE: (f64, f64) = (-10.0, 10.0);

/// Maximum number of normal genes; gene references are single digits.
pub const MAX_GENES: usize = 8;

/// Region sizes shared by every chromosome of a population.
///
/// Tails hold `head * (max_arity - 1) + 1` symbols; with a binary function
/// set that is `head + 1`, which guarantees that every gene decodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneLayout {
    pub head_len: usize,
    pub const_len: usize,
    pub link_head_len: usize,
    /// Number of normal genes.
    pub genes: usize,
    /// Whether normal genes carry the `?` terminal, a Dc domain and a
    /// constant array. Classic single-gene GEP runs without them.
    pub constants: bool,
}

impl Default for GeneLayout {
    fn default() -> Self {
        GeneLayout { head_len: 8, const_len: 10, link_head_len: 4, genes: 2, constants: true }
    }
}

impl GeneLayout {
    /// Single-gene layout without random constants: the plain GEP baseline.
    pub fn plain_gep() -> Self {
        GeneLayout { genes: 1, constants: false, ..GeneLayout::default() }
    }

    pub fn tail_len(&self) -> usize {
        self.head_len + 1
    }

    pub fn dc_len(&self) -> usize {
        if self.constants {
            self.tail_len()
        } else {
            0
        }
    }

    pub fn link_tail_len(&self) -> usize {
        self.link_head_len + 1
    }

    /// Symbols in one normal gene: head, tail and Dc domain.
    pub fn gene_len(&self) -> usize {
        self.head_len + self.tail_len() + self.dc_len()
    }

    pub fn link_len(&self) -> usize {
        self.link_head_len + self.link_tail_len()
    }

    /// Length of the linearized chromosome used by crossover.
    pub fn chromosome_len(&self) -> usize {
        self.genes * self.gene_len() + self.link_len()
    }

    /// A single gene is expressed directly; its homeotic gene is the
    /// identity and never varies.
    pub fn fixed_link(&self) -> bool {
        self.genes == 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidLayout(m.to_string()));
        if self.head_len == 0 || self.link_head_len == 0 {
            return bad("head lengths must be positive");
        }
        if self.genes == 0 || self.genes > MAX_GENES {
            return bad("gene count must be in 1..=8");
        }
        if self.constants && (self.const_len == 0 || self.const_len > 26) {
            return bad("constant array length must be in 1..=26");
        }
        Ok(())
    }

    pub fn terminals(&self) -> Vec<Symbol> {
        let mut t: Vec<Symbol> = (0..INPUTS as u8).map(Symbol::Var).collect();
        if self.constants {
            t.insert(0, Symbol::Const);
        }
        t
    }

    pub fn head_alphabet(&self) -> Vec<Symbol> {
        Func::ALL.into_iter().map(Symbol::Func).chain(self.terminals()).collect()
    }

    pub fn link_terminals(&self) -> Vec<LinkSymbol> {
        (0..self.genes as u8).map(LinkSymbol::Gene).collect()
    }

    pub fn link_head_alphabet(&self) -> Vec<LinkSymbol> {
        Func::ALL.into_iter().map(LinkSymbol::Func).chain(self.link_terminals()).collect()
    }
}

/// A normal gene: Karva head and tail, Dc domain and its constant array.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalGene {
    pub head: Vec<Symbol>,
    pub tail: Vec<Symbol>,
    /// Constant-slot indices consumed by `?` terminals.
    pub dc: Vec<u8>,
    pub constants: Vec<f64>,
}

impl NormalGene {
    /// Symbol at Karva position `i` of the concatenated head and tail.
    #[inline]
    pub fn symbol(&self, i: usize) -> Symbol {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.tail[i - self.head.len()]
        }
    }

    pub fn coding_len(&self) -> usize {
        self.head.len() + self.tail.len()
    }
}

/// The homeotic gene linking the normal genes' sub-trees.
#[derive(Clone, Debug, PartialEq)]
pub struct HomeoticGene {
    pub head: Vec<LinkSymbol>,
    pub tail: Vec<LinkSymbol>,
}

impl HomeoticGene {
    #[inline]
    pub fn symbol(&self, i: usize) -> LinkSymbol {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.tail[i - self.head.len()]
        }
    }

    /// Head and tail made only of references to gene 0.
    pub fn identity(layout: &GeneLayout) -> Self {
        HomeoticGene {
            head: vec![LinkSymbol::Gene(0); layout.link_head_len],
            tail: vec![LinkSymbol::Gene(0); layout.link_tail_len()],
        }
    }
}

/// Multicellular genotype: `k` normal genes plus one homeotic gene.
#[derive(Clone, Debug, PartialEq)]
pub struct Chromosome {
    pub layout: GeneLayout,
    pub genes: Vec<NormalGene>,
    pub link: HomeoticGene,
}

fn pick<T: Copy, R: Rng + ?Sized>(alphabet: &[T], rng: &mut R) -> T {
    alphabet[rng.random_range(0..alphabet.len())]
}

pub fn random_constant<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(CONSTANT_RANGE.0..=CONSTANT_RANGE.1)
}

impl Chromosome {
    /// Uniformly random chromosome respecting every region's alphabet.
    pub fn random<R: Rng + ?Sized>(layout: &GeneLayout, rng: &mut R) -> Result<Self> {
        layout.validate()?;
        let head_alpha = layout.head_alphabet();
        let tail_alpha = layout.terminals();
        let genes = (0..layout.genes)
            .map(|_| NormalGene {
                head: (0..layout.head_len).map(|_| pick(&head_alpha, rng)).collect(),
                tail: (0..layout.tail_len()).map(|_| pick(&tail_alpha, rng)).collect(),
                dc: (0..layout.dc_len()).map(|_| rng.random_range(0..layout.const_len) as u8).collect(),
                constants: if layout.constants {
                    (0..layout.const_len).map(|_| random_constant(rng)).collect()
                } else {
                    Vec::new()
                },
            })
            .collect();
        let link = if layout.fixed_link() {
            HomeoticGene::identity(layout)
        } else {
            let head_alpha = layout.link_head_alphabet();
            let tail_alpha = layout.link_terminals();
            HomeoticGene {
                head: (0..layout.link_head_len).map(|_| pick(&head_alpha, rng)).collect(),
                tail: (0..layout.link_tail_len()).map(|_| pick(&tail_alpha, rng)).collect(),
            }
        };
        Ok(Chromosome { layout: *layout, genes, link })
    }

    /// Checks every region's length and alphabet.
    pub fn validate(&self) -> Result<()> {
        let l = &self.layout;
        l.validate()?;
        let bad = |m: String| Err(Error::InvalidChromosome(m));
        if self.genes.len() != l.genes {
            return bad(format!("{} normal genes, layout declares {}", self.genes.len(), l.genes));
        }
        for (g, gene) in self.genes.iter().enumerate() {
            if gene.head.len() != l.head_len || gene.tail.len() != l.tail_len() || gene.dc.len() != l.dc_len() {
                return bad(format!("gene {g} region lengths do not match the layout"));
            }
            let allowed = |s: &Symbol| match s {
                Symbol::Const => l.constants,
                Symbol::Var(i) => (*i as usize) < INPUTS,
                Symbol::Func(_) => true,
            };
            if let Some(s) = gene.head.iter().find(|s| !allowed(s)) {
                return bad(format!("gene {g} head holds invalid symbol `{s}`"));
            }
            if let Some(s) = gene.tail.iter().find(|s| !s.is_terminal() || !allowed(s)) {
                return bad(format!("gene {g} tail holds non-terminal `{s}`"));
            }
            if gene.dc.iter().any(|&d| d as usize >= l.const_len) {
                return bad(format!("gene {g} Dc domain references a missing constant"));
            }
            let const_len = if l.constants { l.const_len } else { 0 };
            if gene.constants.len() != const_len {
                return bad(format!("gene {g} has {} constants, expected {const_len}", gene.constants.len()));
            }
            if gene.constants.iter().any(|c| !c.is_finite()) {
                return bad(format!("gene {g} has a non-finite constant"));
            }
        }
        if self.link.head.len() != l.link_head_len || self.link.tail.len() != l.link_tail_len() {
            return bad("homeotic gene region lengths do not match the layout".into());
        }
        let in_range = |s: &LinkSymbol| match s {
            LinkSymbol::Gene(i) => (*i as usize) < l.genes,
            LinkSymbol::Func(_) => true,
        };
        if self.link.head.iter().any(|s| !in_range(s))
            || self.link.tail.iter().any(|s| !in_range(s) || !s.is_terminal())
        {
            return bad("homeotic gene holds an invalid symbol".into());
        }
        Ok(())
    }
}
