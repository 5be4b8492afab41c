use super::*;
use crate::error::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXEMPLAR: &str = include_str!("../../tests/fixtures/two_gene_exemplar.chr");

/// Reference tree built by an explicit level-by-level expansion.
#[derive(Debug, Clone, PartialEq)]
enum RefTree {
    Op(char, Vec<RefTree>),
    Leaf(char),
    Constant(u8, f64),
}

fn code_arity(c: char) -> usize {
    match c {
        '+' | '-' | '*' | '/' => 2,
        'S' | 'C' | 'q' => 1,
        _ => 0,
    }
}

fn reference_expand(codes: &[char], dc: &[u8], constants: &[f64]) -> RefTree {
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); codes.len()];
    let mut order = Vec::new();
    let mut level = vec![0usize];
    let mut next_free = 1;
    while !level.is_empty() {
        let mut next = Vec::new();
        for &p in &level {
            order.push(p);
            for _ in 0..code_arity(codes[p]) {
                children[p].push(next_free);
                next.push(next_free);
                next_free += 1;
            }
        }
        level = next;
    }
    let mut bound = std::collections::HashMap::new();
    for p in order {
        if codes[p] == '?' {
            let slot = dc[bound.len()];
            bound.insert(p, (slot, constants[slot as usize]));
        }
    }
    fn build(
        p: usize,
        codes: &[char],
        children: &[Vec<usize>],
        bound: &std::collections::HashMap<usize, (u8, f64)>,
    ) -> RefTree {
        match codes[p] {
            '?' => RefTree::Constant(bound[&p].0, bound[&p].1),
            c if code_arity(c) == 0 => RefTree::Leaf(c),
            c => RefTree::Op(c, children[p].iter().map(|&q| build(q, codes, children, bound)).collect()),
        }
    }
    build(0, codes, &children, &bound)
}

fn reference_chromosome(c: &Chromosome) -> RefTree {
    let subs: Vec<RefTree> = c
        .genes
        .iter()
        .map(|g| {
            let codes: Vec<char> = g.head.iter().chain(&g.tail).map(|s| s.code()).collect();
            reference_expand(&codes, &g.dc, &g.constants)
        })
        .collect();
    let codes: Vec<char> = c.link.head.iter().chain(&c.link.tail).map(|s| s.code()).collect();
    fn splice(t: RefTree, subs: &[RefTree]) -> RefTree {
        match t {
            RefTree::Leaf(c) if c.is_ascii_digit() => subs[(c as u8 - b'0') as usize].clone(),
            RefTree::Op(c, kids) => RefTree::Op(c, kids.into_iter().map(|k| splice(k, subs)).collect()),
            other => other,
        }
    }
    splice(reference_expand(&codes, &[], &[]), &subs)
}

fn tree_of(tree: &ExprTree, i: usize, subs: &[RefTree]) -> RefTree {
    match tree.nodes()[i] {
        Node::Func(f) => {
            RefTree::Op(f.code(), (0..f.arity()).map(|k| tree_of(tree, tree.child_index(i, k), subs)).collect())
        }
        Node::Var(j) => RefTree::Leaf((b'a' + j) as char),
        Node::Const { slot, value } => RefTree::Constant(slot, value),
        Node::Gene(g) => subs[g as usize].clone(),
    }
}

fn program_tree(p: &Program) -> RefTree {
    let subs: Vec<RefTree> = p.sub_trees.iter().map(|t| tree_of(t, 0, &[])).collect();
    tree_of(&p.link, 0, &subs)
}

/// Postfix evaluation of the reference tree.
fn postfix_eval(t: &RefTree, lags: &[f64; 6]) -> Option<f64> {
    fn emit(t: &RefTree, out: &mut Vec<RefTree>) {
        if let RefTree::Op(_, kids) = t {
            kids.iter().for_each(|k| emit(k, out));
        }
        out.push(match t {
            RefTree::Op(c, _) => RefTree::Op(*c, vec![]),
            other => other.clone(),
        });
    }
    let mut tokens = Vec::new();
    emit(t, &mut tokens);
    let mut stack: Vec<f64> = Vec::new();
    for tok in tokens {
        let v = match tok {
            RefTree::Constant(_, v) => v,
            RefTree::Leaf(c) => lags[(c as u8 - b'a') as usize],
            RefTree::Op(c, _) => {
                let y = stack.pop().unwrap();
                match c {
                    'S' => y.sin(),
                    'C' => y.cos(),
                    'q' => y.sqrt(),
                    _ => {
                        let x = stack.pop().unwrap();
                        match c {
                            '+' => x + y,
                            '-' => x - y,
                            '*' => x * y,
                            _ => x / y,
                        }
                    }
                }
            }
        };
        if !v.is_finite() {
            return None;
        }
        stack.push(v);
    }
    stack.pop()
}

fn exemplar() -> Chromosome {
    EXEMPLAR.parse().unwrap()
}

#[test]
fn exemplar_renders_like_the_product_form() {
    let p = Program::decode(&exemplar());
    assert_eq!(p.to_infix(ConstStyle::Label), "(c-d+a*G+A)*(sin(B+d)/b)");
    assert_eq!(p.to_infix(ConstStyle::Value), "(c-d+a*2.5+1)*(sin(0.7+d)/b)");
}

#[test]
fn exemplar_evaluates_by_hand() {
    let p = Program::decode(&exemplar());
    let lags = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let expected = ((3.0 - 4.0) + 1.0 * 2.5 + 1.0) * ((0.7f64 + 4.0).sin() / 2.0);
    let got = p.evaluate(&lags).unwrap();
    assert!((got - expected).abs() <= 1e-12 * expected.abs());
    let independent = postfix_eval(&reference_chromosome(&exemplar()), &lags).unwrap();
    assert!((got - independent).abs() <= 1e-12 * expected.abs());
}

#[test]
fn literal_two_gene_strings_decode() {
    // The first gene string as commonly printed has a single `?`, so it
    // expands to (c-d)+a*G without the trailing constant.
    let text = "layout head=8 consts=10 link_head=4 genes=2\n\
                gene +-*cda?b abafdecbd GGDFDBDCG 0,0,0,0,0,0,2.5,0,0,0\n\
                gene /Sb+?deb fdfabcdda BHCEDIBCF 0,0.7,0,0,0,0,0,0,0,0\n\
                link *011 11110\n";
    let c: Chromosome = text.parse().unwrap();
    let p = Program::decode(&c);
    assert_eq!(p.sub_trees[0].to_infix(ConstStyle::Label), "c-d+a*G");
    assert_eq!(p.sub_trees[1].to_infix(ConstStyle::Label), "sin(B+d)/b");
}

#[test]
fn terminal_root_closes_the_frame() {
    let mut c = exemplar();
    c.genes[0].head[0] = Symbol::Var(0);
    let tree = decode_gene(&c.genes[0]);
    assert_eq!(tree.len(), 1);
    assert_eq!(tree.nodes()[0], Node::Var(0));
}

#[test]
fn link_reference_at_root_selects_one_gene() {
    let mut c = exemplar();
    c.link.head[0] = LinkSymbol::Gene(0);
    let p = Program::decode(&c);
    let lags = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    assert_eq!(p.evaluate(&lags), p.sub_trees[0].eval(&lags, &[]));

    c.link.head = vec![LinkSymbol::Func(Func::Add), LinkSymbol::Gene(0), LinkSymbol::Gene(0), LinkSymbol::Gene(1)];
    let p = Program::decode(&c);
    assert_eq!(p.evaluate(&lags).unwrap(), 2.0 * p.sub_trees[0].eval(&lags, &[]).unwrap());
}

#[test]
fn evaluate_simple_programs() {
    let text = "layout head=2 consts=1 link_head=1 genes=1 constants=false\ngene +a fbc\nlink 0 00\n";
    let p = Program::decode(&text.parse().unwrap());
    assert_eq!(p.to_infix(ConstStyle::Label), "a+f");
    assert_eq!(p.evaluate(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), Some(7.0));

    let text = "layout head=2 consts=1 link_head=1 genes=1 constants=false\ngene qa bcd\nlink 0 00\n";
    let p = Program::decode(&text.parse().unwrap());
    assert_eq!(p.evaluate(&[-1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), None);
    assert_eq!(p.evaluate(&[4.0, 2.0, 3.0, 4.0, 5.0, 6.0]), Some(2.0));
}

#[test]
fn division_by_zero_is_invalid() {
    let text = "layout head=2 consts=1 link_head=1 genes=1 constants=false\ngene /a bcd\nlink 0 00\n";
    let p = Program::decode(&text.parse().unwrap());
    assert_eq!(p.evaluate(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), None);
}

#[test]
fn unreferenced_gene_cannot_invalidate() {
    let text = "layout head=2 consts=1 link_head=1 genes=2 constants=false\n\
                gene qa bcd\ngene +b cde\nlink 1 11\n";
    let p = Program::decode(&text.parse().unwrap());
    assert_eq!(p.evaluate(&[-1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), Some(5.0));
}

#[test]
fn random_chromosomes_match_reference_expander() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let layout = GeneLayout::default();
    for _ in 0..1000 {
        let c = Chromosome::random(&layout, &mut rng).unwrap();
        let p = Program::decode(&c);
        let reference = reference_chromosome(&c);
        assert_eq!(program_tree(&p), reference);
        let lags: [f64; 6] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
        match (p.evaluate(&lags), postfix_eval(&reference, &lags)) {
            (Some(a), Some(b)) => assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}"),
            (a, b) => assert_eq!(a, b),
        }
    }
}

#[test]
fn leaf_count_matches_arity_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let layout = GeneLayout::default();
    for _ in 0..1000 {
        let c = Chromosome::random(&layout, &mut rng).unwrap();
        for g in &c.genes {
            let tree = decode_gene(g);
            let leaves = tree.nodes().iter().filter(|n| n.arity() == 0).count();
            let binary = tree.nodes().iter().filter(|n| n.arity() == 2).count();
            assert_eq!(leaves, binary + 1);
            assert!(tree.len() <= g.coding_len());
        }
    }
}

#[test]
fn mass_random_generation_is_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for layout in [GeneLayout::default(), GeneLayout::plain_gep(), GeneLayout { genes: 8, ..GeneLayout::default() }] {
        for _ in 0..10_000 {
            let c = Chromosome::random(&layout, &mut rng).unwrap();
            c.validate().unwrap();
            let p = Program::decode(&c);
            assert_eq!(p.sub_trees.len(), layout.genes);
        }
    }
}

#[test]
fn generation_is_reproducible() {
    let layout = GeneLayout::default();
    let a = Chromosome::random(&layout, &mut ChaCha8Rng::seed_from_u64(17)).unwrap();
    let b = Chromosome::random(&layout, &mut ChaCha8Rng::seed_from_u64(17)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_gene_link_is_identity() {
    let c = Chromosome::random(&GeneLayout::plain_gep(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert!(c.link.head.iter().chain(&c.link.tail).all(|s| *s == LinkSymbol::Gene(0)));
    assert!(c.genes[0].constants.is_empty() && c.genes[0].dc.is_empty());
    assert!(!c.genes[0].head.contains(&Symbol::Const));
}

#[test]
fn validation_catches_broken_regions() {
    let mut c = exemplar();
    c.genes[1].tail[0] = Symbol::Func(Func::Add);
    assert!(c.validate().is_err());
    let mut c = exemplar();
    c.link.tail[2] = LinkSymbol::Gene(2);
    assert!(c.validate().is_err());
    let mut c = exemplar();
    c.genes[0].dc[4] = 10;
    assert!(c.validate().is_err());
    let mut c = exemplar();
    c.genes[0].constants[0] = f64::INFINITY;
    assert!(c.validate().is_err());
}

#[test]
fn parse_errors_name_the_line() {
    let err = "layout head=8\ngene +-*cda?b abafdecbd\n".parse::<Chromosome>().unwrap_err();
    assert!(matches!(err, Error::ChromosomeSyntax { line: 2, .. }), "{err}");
    let err = "layout head=8 bogus=1\n".parse::<Chromosome>().unwrap_err();
    assert!(matches!(err, Error::ChromosomeSyntax { line: 1, .. }));
}

#[test]
fn link_record_is_optional_for_one_gene() {
    let one = "layout head=3 consts=10 link_head=4 genes=1 constants=false\ngene +fa bcde\n";
    let c: Chromosome = one.parse().unwrap();
    assert_eq!(c.link, HomeoticGene::identity(&c.layout));
    let two = "layout head=3 consts=10 link_head=4 genes=2 constants=false\ngene +fa bcde\ngene a bcde\n";
    let err = two.parse::<Chromosome>().unwrap_err();
    assert!(err.to_string().contains("missing link"), "{err}");
}

proptest! {
    #[test]
    fn text_form_roundtrips(seed in any::<u64>(), genes in 1usize..=4, constants in any::<bool>()) {
        let layout = GeneLayout { genes, constants, ..GeneLayout::default() };
        let c = Chromosome::random(&layout, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let back: Chromosome = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }
}
