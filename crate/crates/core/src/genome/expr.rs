use std::fmt::Write as _;

use super::gene::{Chromosome, HomeoticGene, NormalGene};
use super::symbol::{dc_code, Func, LinkSymbol, Symbol, INPUTS};

/// A decoded tree node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Node {
    Func(Func),
    /// Lagged input `a..f`.
    Var(u8),
    /// Constant bound from Dc slot `slot`.
    Const {
        slot: u8,
        value: f64,
    },
    /// Value of normal gene `i` (homeotic trees only).
    Gene(u8),
}

impl Node {
    pub fn arity(&self) -> usize {
        match self {
            Node::Func(f) => f.arity(),
            _ => 0,
        }
    }
}

/// Expression tree stored in Karva (breadth-first) order.
///
/// The children of node `i` occupy `first_child[i]..first_child[i] + arity`;
/// children always sit after their parent, so a reverse sweep evaluates the
/// whole tree without recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprTree {
    nodes: Vec<Node>,
    first_child: Vec<u32>,
}

/// Length of the open reading frame of a Karva sequence.
fn orf_len(arity_at: impl Fn(usize) -> usize) -> usize {
    let mut needed = 1;
    let mut i = 0;
    while i < needed {
        needed += arity_at(i);
        i += 1;
    }
    needed
}

impl ExprTree {
    fn from_nodes(nodes: Vec<Node>) -> Self {
        let mut first_child = Vec::with_capacity(nodes.len());
        let mut next = 1u32;
        for n in &nodes {
            first_child.push(next);
            next += n.arity() as u32;
        }
        ExprTree { nodes, first_child }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn children(&self, i: usize) -> &[Node] {
        let start = self.first_child[i] as usize;
        &self.nodes[start..start + self.nodes[i].arity()]
    }

    pub fn child_index(&self, i: usize, which: usize) -> usize {
        self.first_child[i] as usize + which
    }

    /// Evaluates the tree; `None` if any intermediate value is not finite.
    ///
    /// `scratch` must hold at least `self.len()` values.
    #[inline]
    pub fn eval_with(&self, inputs: &[f64; INPUTS], genes: &[f64], scratch: &mut [f64]) -> Option<f64> {
        for i in (0..self.nodes.len()).rev() {
            let v = match self.nodes[i] {
                Node::Func(f) => {
                    let c = self.first_child[i] as usize;
                    if f.arity() == 1 {
                        f.apply1(scratch[c])
                    } else {
                        f.apply2(scratch[c], scratch[c + 1])
                    }
                }
                Node::Var(j) => inputs[j as usize],
                Node::Const { value, .. } => value,
                Node::Gene(g) => genes[g as usize],
            };
            if !v.is_finite() {
                return None;
            }
            scratch[i] = v;
        }
        Some(scratch[0])
    }

    pub fn eval(&self, inputs: &[f64; INPUTS], genes: &[f64]) -> Option<f64> {
        let mut scratch = vec![0.0; self.len()];
        self.eval_with(inputs, genes, &mut scratch)
    }

    /// Infix rendering. Right operands of equal precedence keep their
    /// parentheses so the text maps back to a single tree.
    pub fn to_infix(&self, constants: ConstStyle) -> String {
        self.render(0, constants, &|g| (format!("g{g}"), ATOM)).0
    }

    fn render(&self, i: usize, style: ConstStyle, gene: &dyn Fn(u8) -> (String, u8)) -> (String, u8) {
        match self.nodes[i] {
            Node::Var(j) => (((b'a' + j) as char).to_string(), ATOM),
            Node::Const { slot, value } => match style {
                ConstStyle::Label => (dc_code(slot).to_string(), ATOM),
                ConstStyle::Value if value < 0.0 => (format!("({value})"), ATOM),
                ConstStyle::Value => (format!("{value}"), ATOM),
            },
            Node::Gene(g) => gene(g),
            Node::Func(f) if f.arity() == 1 => {
                let (inner, _) = self.render(self.child_index(i, 0), style, gene);
                let name = match f {
                    Func::Sin => "sin",
                    Func::Cos => "cos",
                    _ => "sqrt",
                };
                (format!("{name}({inner})"), ATOM)
            }
            Node::Func(f) => {
                let prec = match f {
                    Func::Add | Func::Sub => SUM,
                    _ => PRODUCT,
                };
                let (l, lp) = self.render(self.child_index(i, 0), style, gene);
                let (r, rp) = self.render(self.child_index(i, 1), style, gene);
                let mut s = String::new();
                if lp < prec {
                    let _ = write!(s, "({l})");
                } else {
                    s.push_str(&l);
                }
                s.push(f.code());
                if rp <= prec {
                    let _ = write!(s, "({r})");
                } else {
                    s.push_str(&r);
                }
                (s, prec)
            }
        }
    }
}

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const ATOM: u8 = 3;

/// How constants appear in rendered expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstStyle {
    /// The Dc letter of the bound slot, e.g. `G`.
    Label,
    /// The numeric value.
    Value,
}

/// Decodes a normal gene: breadth-first expansion of the open reading
/// frame, with each `?` (in breadth-first order) binding the constant named
/// by the next Dc symbol.
pub fn decode_gene(gene: &NormalGene) -> ExprTree {
    let len = orf_len(|i| gene.symbol(i).arity());
    let mut next_dc = 0;
    let nodes = (0..len)
        .map(|i| match gene.symbol(i) {
            Symbol::Func(f) => Node::Func(f),
            Symbol::Var(j) => Node::Var(j),
            Symbol::Const => {
                let slot = gene.dc[next_dc];
                next_dc += 1;
                Node::Const { slot, value: gene.constants[slot as usize] }
            }
        })
        .collect();
    ExprTree::from_nodes(nodes)
}

pub fn decode_link(link: &HomeoticGene) -> ExprTree {
    let len = orf_len(|i| link.symbol(i).arity());
    let nodes = (0..len)
        .map(|i| match link.symbol(i) {
            LinkSymbol::Func(f) => Node::Func(f),
            LinkSymbol::Gene(g) => Node::Gene(g),
        })
        .collect();
    ExprTree::from_nodes(nodes)
}

/// Decoded chromosome: one sub-tree per normal gene combined by the
/// homeotic tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub sub_trees: Vec<ExprTree>,
    pub link: ExprTree,
    /// Genes referenced by the homeotic tree; only those are evaluated.
    used: Vec<bool>,
    scratch_len: usize,
}

/// Reusable evaluation buffers.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    nodes: Vec<f64>,
    genes: Vec<f64>,
}

impl Program {
    pub fn decode(chromosome: &Chromosome) -> Program {
        let sub_trees: Vec<ExprTree> = chromosome.genes.iter().map(decode_gene).collect();
        let link = decode_link(&chromosome.link);
        let mut used = vec![false; sub_trees.len()];
        for n in link.nodes() {
            if let Node::Gene(g) = n {
                used[*g as usize] = true;
            }
        }
        let scratch_len = sub_trees.iter().map(ExprTree::len).chain([link.len()]).max().unwrap_or(1);
        Program { sub_trees, link, used, scratch_len }
    }

    pub fn evaluate(&self, lags: &[f64; INPUTS]) -> Option<f64> {
        self.evaluate_with(lags, &mut Scratch::default())
    }

    /// Evaluates on one lag vector; `None` marks an invalid evaluation.
    pub fn evaluate_with(&self, lags: &[f64; INPUTS], scratch: &mut Scratch) -> Option<f64> {
        if scratch.nodes.len() < self.scratch_len {
            scratch.nodes.resize(self.scratch_len, 0.0);
        }
        scratch.genes.clear();
        scratch.genes.resize(self.sub_trees.len(), 0.0);
        for (g, tree) in self.sub_trees.iter().enumerate() {
            if self.used[g] {
                scratch.genes[g] = tree.eval_with(lags, &[], &mut scratch.nodes)?;
            }
        }
        self.link.eval_with(lags, &scratch.genes, &mut scratch.nodes)
    }

    /// Infix expression with every gene reference expanded.
    pub fn to_infix(&self, style: ConstStyle) -> String {
        let expand = |g: u8| {
            let tree = &self.sub_trees[g as usize];
            tree.render(0, style, &|_| unreachable!("normal genes hold no gene references"))
        };
        self.link.render(0, style, &expand).0
    }
}
