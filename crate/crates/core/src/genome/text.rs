//! Line-oriented text form of a chromosome.
//!
//! ```text
//! layout head=8 consts=10 link_head=4 genes=2 constants=true
//! gene +-*cda?b abafdecbd GGDFDBDCG 1,2.5,-3.25,...
//! gene /Sb+?debf dfabcddaB ...
//! link *011 11110
//! ```
//!
//! Each region is one symbol string; constants are decimal literals that
//! round-trip exactly. Blank lines and `#` comments are ignored.

use std::fmt;
use std::str::FromStr;

use super::gene::{Chromosome, GeneLayout, HomeoticGene, NormalGene};
use super::symbol::{dc_code, dc_from_code, LinkSymbol, Symbol};
use crate::error::{Error, Result};

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.layout;
        writeln!(
            f,
            "layout head={} consts={} link_head={} genes={} constants={}",
            l.head_len, l.const_len, l.link_head_len, l.genes, l.constants
        )?;
        for gene in &self.genes {
            let head: String = gene.head.iter().map(|s| s.code()).collect();
            let tail: String = gene.tail.iter().map(|s| s.code()).collect();
            write!(f, "gene {head} {tail}")?;
            if l.constants {
                let dc: String = gene.dc.iter().map(|&d| dc_code(d)).collect();
                let consts: Vec<String> = gene.constants.iter().map(|c| format!("{c:?}")).collect();
                write!(f, " {dc} {}", consts.join(","))?;
            }
            writeln!(f)?;
        }
        let head: String = self.link.head.iter().map(|s| s.code()).collect();
        let tail: String = self.link.tail.iter().map(|s| s.code()).collect();
        writeln!(f, "link {head} {tail}")
    }
}

fn syntax(line: usize, reason: impl Into<String>) -> Error {
    Error::ChromosomeSyntax { line, reason: reason.into() }
}

fn parse_layout(line: usize, fields: &[&str]) -> Result<GeneLayout> {
    let mut layout = GeneLayout::default();
    for field in fields {
        let (key, value) =
            field.split_once('=').ok_or_else(|| syntax(line, format!("expected key=value, got `{field}`")))?;
        let number = || value.parse::<usize>().map_err(|_| syntax(line, format!("bad value for {key}")));
        match key {
            "head" => layout.head_len = number()?,
            "consts" => layout.const_len = number()?,
            "link_head" => layout.link_head_len = number()?,
            "genes" => layout.genes = number()?,
            "constants" => {
                layout.constants = value.parse().map_err(|_| syntax(line, "constants must be true or false"))?
            }
            other => return Err(syntax(line, format!("unknown layout key `{other}`"))),
        }
    }
    Ok(layout)
}

fn parse_symbols<T>(line: usize, text: &str, parse: impl Fn(char) -> Option<T>) -> Result<Vec<T>> {
    text.chars().map(|c| parse(c).ok_or_else(|| syntax(line, format!("unexpected symbol `{c}`")))).collect()
}

impl FromStr for Chromosome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut layout = None;
        let mut genes = Vec::new();
        let mut link = None;
        for (n, raw) in s.lines().enumerate() {
            let line = n + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            match fields[0] {
                "layout" => layout = Some(parse_layout(line, &fields[1..])?),
                "gene" => {
                    let constants = layout.ok_or_else(|| syntax(line, "gene before layout"))?.constants;
                    let expected = if constants { 5 } else { 3 };
                    if fields.len() != expected {
                        return Err(syntax(line, format!("gene needs {} fields", expected - 1)));
                    }
                    let mut gene = NormalGene {
                        head: parse_symbols(line, fields[1], Symbol::from_code)?,
                        tail: parse_symbols(line, fields[2], Symbol::from_code)?,
                        dc: Vec::new(),
                        constants: Vec::new(),
                    };
                    if constants {
                        gene.dc = parse_symbols(line, fields[3], dc_from_code)?;
                        gene.constants = fields[4]
                            .split(',')
                            .map(|c| c.trim().parse::<f64>().map_err(|_| syntax(line, format!("bad constant `{c}`"))))
                            .collect::<Result<_>>()?;
                    }
                    genes.push(gene);
                }
                "link" => {
                    if fields.len() != 3 {
                        return Err(syntax(line, "link needs head and tail"));
                    }
                    link = Some(HomeoticGene {
                        head: parse_symbols(line, fields[1], LinkSymbol::from_code)?,
                        tail: parse_symbols(line, fields[2], LinkSymbol::from_code)?,
                    });
                }
                other => return Err(syntax(line, format!("unknown record `{other}`"))),
            }
        }
        let layout = layout.ok_or_else(|| syntax(0, "missing layout record"))?;
        // A single gene's link is fixed, so the record may be left out.
        let link = match link {
            Some(l) => l,
            None if layout.fixed_link() => HomeoticGene::identity(&layout),
            None => return Err(syntax(0, "missing link record")),
        };
        let chromosome = Chromosome { layout, genes, link };
        chromosome.validate()?;
        Ok(chromosome)
    }
}
