//! Discrete wavelet decomposition with the Mallat pyramid.
//!
//! A series is split into approximation and detail coefficients by a
//! filter-and-downsample step; only the approximation branch is split again
//! at the next level. [`components`] turns the coefficient pyramid back into
//! `levels + 1` full-length series (details `D1..Dn`, approximation `An`) that
//! add up to the input sample by sample.

mod filters;

use serde::{Deserialize, Serialize};

pub use filters::{derive_highpass, Basis, FilterBank, FILTER_TOLERANCE};

use crate::error::{Error, Result};

/// How the signal is extended past its ends before filtering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// Half-point mirror: `x[-1] = x[0]`, `x[N] = x[N-1]`. Each level yields
    /// `floor((N + L - 1) / 2)` coefficients per band.
    #[default]
    Symmetric,
    /// Circular wrap. Odd-length inputs are padded by repeating the last
    /// sample; each level yields `ceil(N / 2)` coefficients per band. This
    /// mode is an orthogonal transform, so band energies add up to the
    /// signal energy for even lengths.
    Periodization,
}

impl Extension {
    /// Coefficient count produced from an input of `input_len` samples.
    pub fn coeff_len(self, input_len: usize, filter_len: usize) -> usize {
        match self {
            Extension::Symmetric => (input_len + filter_len - 1) / 2,
            Extension::Periodization => input_len.div_ceil(2),
        }
    }
}

/// Coefficients of a multi-level decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffPyramid {
    /// Approximation coefficients at the deepest level.
    pub approx: Vec<f64>,
    /// Detail coefficients, shallowest (`D1`) first.
    pub details: Vec<Vec<f64>>,
    pub levels: usize,
    pub original_len: usize,
    pub extension: Extension,
    /// Input length at each level; `input_lens[0] == original_len`.
    pub input_lens: Vec<usize>,
}

impl CoeffPyramid {
    /// Number of coefficient bands (`levels` details plus one approximation).
    pub fn bands(&self) -> usize {
        self.levels + 1
    }

    /// Band `i` in component order: details first, approximation last.
    pub fn band(&self, i: usize) -> &[f64] {
        if i < self.levels {
            &self.details[i]
        } else {
            &self.approx
        }
    }

    /// Copy of the pyramid with every band except `keep` set to zero.
    pub fn isolate(&self, keep: usize) -> CoeffPyramid {
        let mut out = self.clone();
        for (i, d) in out.details.iter_mut().enumerate() {
            if i != keep {
                d.iter_mut().for_each(|v| *v = 0.0);
            }
        }
        if keep != self.levels {
            out.approx.iter_mut().for_each(|v| *v = 0.0);
        }
        out
    }

    /// Sum of squared coefficients over all bands.
    pub fn energy(&self) -> f64 {
        (0..self.bands()).map(|i| self.band(i).iter().map(|v| v * v).sum::<f64>()).sum()
    }

    fn check_shape(&self, filter_len: usize) -> Result<()> {
        let mismatch = |reason: String| Err(Error::PyramidShape(reason));
        if self.levels == 0 || self.details.len() != self.levels {
            return mismatch(format!("{} detail bands for {} levels", self.details.len(), self.levels));
        }
        if self.input_lens.len() != self.levels + 1 || self.input_lens[0] != self.original_len {
            return mismatch("level input lengths do not match the original length".into());
        }
        for level in 0..self.levels {
            let expected = self.extension.coeff_len(self.input_lens[level], filter_len);
            if self.input_lens[level + 1] != expected {
                return mismatch(format!(
                    "level {} input length {} != {expected}",
                    level + 1,
                    self.input_lens[level + 1]
                ));
            }
            if self.details[level].len() != expected {
                return mismatch(format!(
                    "detail band D{} has {} coefficients, expected {expected}",
                    level + 1,
                    self.details[level].len()
                ));
            }
        }
        if self.approx.len() != self.input_lens[self.levels] {
            return mismatch(format!(
                "approximation has {} coefficients, expected {}",
                self.approx.len(),
                self.input_lens[self.levels]
            ));
        }
        Ok(())
    }
}

/// Full-length additive components of a series.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// `D1..Dn` followed by `An`, each as long as the input.
    pub components: Vec<Vec<f64>>,
    pub levels: usize,
}

impl Decomposition {
    /// Component labels in storage order: `D1`, ..., `Dn`, `An`.
    pub fn labels(&self) -> Vec<String> {
        component_labels(self.levels)
    }

    /// Sample-wise sum of all components.
    pub fn sum(&self) -> Vec<f64> {
        let len = self.components.first().map_or(0, Vec::len);
        (0..len).map(|t| self.components.iter().map(|c| c[t]).sum()).collect()
    }
}

/// Labels of the `levels + 1` components; a zero-level decomposition is the
/// raw series itself.
pub fn component_labels(levels: usize) -> Vec<String> {
    if levels == 0 {
        return vec!["raw".to_string()];
    }
    (1..=levels).map(|j| format!("D{j}")).chain(std::iter::once(format!("A{levels}"))).collect()
}

/// Largest depth the series admits: `floor(log2(len))`.
pub fn max_levels(len: usize) -> usize {
    if len == 0 {
        0
    } else {
        len.ilog2() as usize
    }
}

/// Multi-level analysis of `x`.
pub fn decompose(x: &[f64], bank: &FilterBank, levels: usize, extension: Extension) -> Result<CoeffPyramid> {
    validate_input(x, levels)?;
    let mut details = Vec::with_capacity(levels);
    let mut input_lens = vec![x.len()];
    let mut current = x.to_vec();
    for _ in 0..levels {
        let (approx, detail) = analysis_step(&current, bank, extension);
        input_lens.push(approx.len());
        details.push(detail);
        current = approx;
    }
    Ok(CoeffPyramid { approx: current, details, levels, original_len: x.len(), extension, input_lens })
}

/// Inverse of [`decompose`]: merges approximation and detail level by level,
/// deepest first, trimming each level to its recorded input length.
pub fn reconstruct(pyramid: &CoeffPyramid, bank: &FilterBank) -> Result<Vec<f64>> {
    pyramid.check_shape(bank.len())?;
    let mut current = pyramid.approx.clone();
    for level in (0..pyramid.levels).rev() {
        current = synthesis_step(&current, &pyramid.details[level], pyramid.input_lens[level], bank, pyramid.extension);
    }
    Ok(current)
}

/// Splits `x` into `levels` detail components and one approximation
/// component, each reconstructed from a single coefficient band.
pub fn components(x: &[f64], bank: &FilterBank, levels: usize, extension: Extension) -> Result<Decomposition> {
    let pyramid = decompose(x, bank, levels, extension)?;
    let components =
        (0..pyramid.bands()).map(|band| reconstruct(&pyramid.isolate(band), bank)).collect::<Result<Vec<_>>>()?;
    Ok(Decomposition { components, levels })
}

fn validate_input(x: &[f64], levels: usize) -> Result<()> {
    if levels == 0 {
        return Err(Error::InvalidLevels { levels, len: x.len() });
    }
    if levels >= usize::BITS as usize || x.len() < (1usize << levels) {
        return Err(Error::SeriesTooShort { len: x.len(), levels });
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// Half-point symmetric index into a signal of length `n`, valid for any
/// offset (the mirrored signal is periodic with period `2n`).
fn mirror_index(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let r = i.rem_euclid(period) as usize;
    if r < n {
        r
    } else {
        2 * n - 1 - r
    }
}

fn analysis_step(x: &[f64], bank: &FilterBank, extension: Extension) -> (Vec<f64>, Vec<f64>) {
    let taps = bank.len();
    let out_len = extension.coeff_len(x.len(), taps);
    let mut approx = vec![0.0; out_len];
    let mut detail = vec![0.0; out_len];
    match extension {
        Extension::Symmetric => {
            // a[k] = sum_i h0[i] x[2k + i - (L - 2)]
            let offset = taps as isize - 2;
            for k in 0..out_len {
                let base = 2 * k as isize - offset;
                let (mut a, mut d) = (0.0, 0.0);
                for i in 0..taps {
                    let v = x[mirror_index(base + i as isize, x.len())];
                    a += bank.h0[i] * v;
                    d += bank.h1[i] * v;
                }
                approx[k] = a;
                detail[k] = d;
            }
        }
        Extension::Periodization => {
            let padded = 2 * out_len;
            let sample = |t: usize| x[t.min(x.len() - 1)];
            for k in 0..out_len {
                let (mut a, mut d) = (0.0, 0.0);
                for i in 0..taps {
                    let v = sample((2 * k + i) % padded);
                    a += bank.h0[i] * v;
                    d += bank.h1[i] * v;
                }
                approx[k] = a;
                detail[k] = d;
            }
        }
    }
    (approx, detail)
}

fn synthesis_step(approx: &[f64], detail: &[f64], out_len: usize, bank: &FilterBank, extension: Extension) -> Vec<f64> {
    let taps = bank.len();
    let n = approx.len();
    match extension {
        Extension::Symmetric => {
            // x[t] = sum_m g0[t + L - 2 - 2m] a[m] + g1[t + L - 2 - 2m] d[m]
            let mut out = vec![0.0; out_len];
            for (t, slot) in out.iter_mut().enumerate() {
                let shifted = t + taps - 2;
                let m_lo = (shifted + 1).saturating_sub(taps).div_ceil(2);
                let m_hi = (shifted / 2).min(n.saturating_sub(1));
                let mut acc = 0.0;
                for m in m_lo..=m_hi {
                    let i = shifted - 2 * m;
                    acc += bank.g0[i] * approx[m] + bank.g1[i] * detail[m];
                }
                *slot = acc;
            }
            out
        }
        Extension::Periodization => {
            let padded = 2 * n;
            let mut out = vec![0.0; padded];
            for m in 0..n {
                for i in 0..taps {
                    out[(2 * m + i) % padded] += bank.g0[i] * approx[m] + bank.g1[i] * detail[m];
                }
            }
            out.truncate(out_len);
            out
        }
    }
}
