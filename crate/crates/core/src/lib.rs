//! Wavelet-decomposed multicellular gene expression programming for
//! time-series forecasting.
//!
//! The pipeline splits a series into frequency components with a discrete
//! wavelet transform ([`dwt`]), evolves one symbolic regression model per
//! component with multicellular gene expression programming ([`genome`],
//! [`evolution`]) and sums the per-component one-step-ahead predictions
//! back into a forecast of the original series ([`forecast`]).
//!
//! ```
//! use wtgep::dwt::{components, Basis, Extension};
//!
//! let series: Vec<f64> = (0..64).map(|t| 500.0 + 80.0 * (t as f64 * 0.4).sin()).collect();
//! let parts = components(&series, &Basis::Coif5.filter_bank(), 4, Extension::Symmetric)?;
//! assert_eq!(parts.labels(), ["D1", "D2", "D3", "D4", "A4"]);
//! for (sum, x) in parts.sum().iter().zip(&series) {
//!     assert!((sum - x).abs() < 1e-9 * 600.0);
//! }
//! # Ok::<(), wtgep::Error>(())
//! ```

pub mod dwt;
mod error;
pub mod evolution;
pub mod forecast;
pub mod genome;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/wavelets.md")]
    mod wavelets {}
    #[doc = include_str!("../../../book/src/genome.md")]
    mod genome {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
    #[doc = include_str!("../../../book/src/forecasting.md")]
    mod forecasting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
