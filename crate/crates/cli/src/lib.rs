//! Library side of the `wtgep` command: CSV loading, config layering,
//! experiment grids and report files.

pub mod config;
pub mod data;
mod error;
pub mod grid;
pub mod output;

pub use config::{resolve, BasisChoice, Overrides, Resolved};
pub use data::load_csv;
pub use error::{CliError, Result};
pub use grid::{run_grid, GridSpec};
