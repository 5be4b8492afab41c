use thiserror::Error;

/// Errors produced by the decomposition, genome, evolution and forecasting
/// layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown wavelet basis `{0}`")]
    UnknownBasis(String),
    #[error("invalid filter bank {name}: {reason}")]
    InvalidFilter { name: String, reason: String },
    #[error("invalid decomposition depth {levels} for a series of length {len}")]
    InvalidLevels { levels: usize, len: usize },
    #[error("series of length {len} is too short for {levels} decomposition levels")]
    SeriesTooShort { len: usize, levels: usize },
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("inconsistent coefficient pyramid: {0}")]
    PyramidShape(String),
    #[error("invalid gene layout: {0}")]
    InvalidLayout(String),
    #[error("invalid chromosome: {0}")]
    InvalidChromosome(String),
    #[error("cannot parse chromosome at line {line}: {reason}")]
    ChromosomeSyntax { line: usize, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("chromosome layouts differ")]
    LayoutMismatch,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("series of length {len} is shorter than the window of {window}")]
    WindowTooLong { len: usize, window: usize },
    #[error("split of {rows} rows at fraction {fraction} leaves an empty partition")]
    DegenerateSplit { rows: usize, fraction: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
