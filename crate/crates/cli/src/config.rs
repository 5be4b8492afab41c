use std::fmt;
use std::path::Path;
use std::str::FromStr;

use wtgep::dwt::{Basis, Extension};
use wtgep::forecast::ForecastConfig;

use crate::error::{CliError, Result};

/// A wavelet basis, or `none` to bypass the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisChoice {
    None,
    Wavelet(Basis),
}

impl BasisChoice {
    pub fn basis(self) -> Option<Basis> {
        match self {
            BasisChoice::None => None,
            BasisChoice::Wavelet(b) => Some(b),
        }
    }

    /// Position in the fixed grid ordering: `none`, then haar, db10, sym8, coif5.
    pub fn rank(self) -> usize {
        match self {
            BasisChoice::None => 0,
            BasisChoice::Wavelet(b) => 1 + Basis::ALL.iter().position(|&x| x == b).unwrap_or(0),
        }
    }
}

impl FromStr for BasisChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("none") {
            return Ok(BasisChoice::None);
        }
        s.parse::<Basis>()
            .map(BasisChoice::Wavelet)
            .map_err(|_| format!("unknown basis '{s}' (expected haar, db10, sym8, coif5 or none)"))
    }
}

impl fmt::Display for BasisChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisChoice::None => f.write_str("none"),
            BasisChoice::Wavelet(b) => write!(f, "{b}"),
        }
    }
}

/// Settings given on the command line; `None` leaves the file or default value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub column: Option<String>,
    pub basis: Option<BasisChoice>,
    pub levels: Option<usize>,
    pub extension: Option<Extension>,
    pub train_fraction: Option<f64>,
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub genes: Option<usize>,
    pub seed: Option<u64>,
    pub strict_causal: bool,
    pub no_constants: bool,
}

/// The effective run configuration after layering flags over the config
/// file over the defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub column: Option<String>,
    pub forecast: ForecastConfig,
}

/// Parses a TOML config file.
///
/// The file mirrors the serialized [`ForecastConfig`] (with an `[evolution]`
/// table and an `[evolution.layout]` table), except that `basis` is a plain
/// string that may be `"none"`, and an extra top-level `column` key selects
/// the CSV column.
pub fn read_config(path: &Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
}

pub fn resolve(file: Option<toml::Table>, flags: &Overrides) -> Result<Resolved> {
    let mut table = file.unwrap_or_default();
    let column = match table.remove("column") {
        None => None,
        Some(toml::Value::String(s)) => Some(s),
        Some(other) => return Err(CliError::Config(format!("column must be a string, got {other}"))),
    };
    let file_basis = match table.remove("basis") {
        None => None,
        Some(toml::Value::String(s)) => Some(s.parse::<BasisChoice>().map_err(CliError::Config)?),
        Some(other) => return Err(CliError::Config(format!("basis must be a string, got {other}"))),
    };
    let file_levels = table.contains_key("levels");
    let mut cfg: ForecastConfig =
        toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;

    let basis = flags.basis.or(file_basis).unwrap_or(BasisChoice::Wavelet(Basis::Coif5));
    cfg.basis = basis.basis();
    if let Some(levels) = flags.levels {
        cfg.levels = levels;
    } else if !file_levels && cfg.basis.is_none() {
        cfg.levels = 0;
    }
    if let Some(e) = flags.extension {
        cfg.extension = e;
    }
    if let Some(f) = flags.train_fraction {
        cfg.train_fraction = f;
    }
    cfg.strict_causal |= flags.strict_causal;
    let evo = &mut cfg.evolution;
    if let Some(p) = flags.population {
        evo.population_size = p;
    }
    if let Some(g) = flags.generations {
        evo.max_generations = g;
    }
    if let Some(k) = flags.genes {
        evo.layout.genes = k;
    }
    if let Some(s) = flags.seed {
        evo.rng_seed = s;
    }
    if flags.no_constants {
        evo.layout.constants = false;
    }
    cfg.validate()?;
    Ok(Resolved { column: flags.column.clone().or(column), forecast: cfg })
}
