//! Embedded orthogonal wavelet filter banks.
//!
//! Only the low-pass scaling filter of each basis is stored; the high-pass
//! filter is derived with the quadrature-mirror relation. Every bank is
//! checked against the orthogonality gates the first time it is built.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance of the filter validation gates.
pub const FILTER_TOLERANCE: f64 = 1e-10;

/// The orthogonal wavelet bases available for decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Haar,
    Db10,
    Sym8,
    Coif5,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::Haar, Basis::Db10, Basis::Sym8, Basis::Coif5];

    pub fn name(self) -> &'static str {
        match self {
            Basis::Haar => "haar",
            Basis::Db10 => "db10",
            Basis::Sym8 => "sym8",
            Basis::Coif5 => "coif5",
        }
    }

    fn scaling_filter(self) -> &'static [f64] {
        match self {
            Basis::Haar => &HAAR,
            Basis::Db10 => &DB10,
            Basis::Sym8 => &SYM8,
            Basis::Coif5 => &COIF5,
        }
    }

    /// Builds the validated filter bank for this basis.
    pub fn filter_bank(self) -> FilterBank {
        // The tables are constants; a failure here is a transcription bug.
        FilterBank::from_lowpass(self.name(), self.scaling_filter())
            .unwrap_or_else(|e| panic!("embedded {} filter is invalid: {e}", self.name()))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(Basis::Haar),
            "db10" => Ok(Basis::Db10),
            "sym8" => Ok(Basis::Sym8),
            "coif5" => Ok(Basis::Coif5),
            other => Err(Error::UnknownBasis(other.to_string())),
        }
    }
}

/// Analysis and synthesis filters of an orthogonal two-channel filter bank.
///
/// For an orthogonal wavelet the synthesis filters equal the analysis
/// filters; analysis applies them as a correlation followed by
/// downsampling, synthesis as upsampling followed by a convolution.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterBank {
    pub name: String,
    /// Analysis low-pass.
    pub h0: Vec<f64>,
    /// Analysis high-pass.
    pub h1: Vec<f64>,
    /// Synthesis low-pass.
    pub g0: Vec<f64>,
    /// Synthesis high-pass.
    pub g1: Vec<f64>,
}

impl FilterBank {
    /// Builds a bank from a scaling filter and runs the validation gates.
    pub fn from_lowpass(name: &str, h0: &[f64]) -> Result<Self> {
        let h1 = derive_highpass(h0)?;
        let bank = FilterBank { name: name.to_string(), h0: h0.to_vec(), h1: h1.clone(), g0: h0.to_vec(), g1: h1 };
        bank.validate()?;
        Ok(bank)
    }

    pub fn len(&self) -> usize {
        self.h0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h0.is_empty()
    }

    /// Checks unit DC gain, orthonormality under even shifts and the
    /// quadrature-mirror relation.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(Error::InvalidFilter { name: self.name.clone(), reason: what });
        let n = self.h0.len();
        if n == 0 || !n.is_multiple_of(2) {
            return fail(format!("length {n} is not a positive even number"));
        }
        if self.h1.len() != n || self.g0.len() != n || self.g1.len() != n {
            return fail("filter lengths differ".into());
        }
        let sum: f64 = self.h0.iter().sum();
        if (sum - std::f64::consts::SQRT_2).abs() > FILTER_TOLERANCE {
            return fail(format!("low-pass sum {sum} differs from sqrt(2)"));
        }
        for m in 0..n / 2 {
            let auto = shifted_dot(&self.h0, &self.h0, 2 * m);
            let expected = if m == 0 { 1.0 } else { 0.0 };
            if (auto - expected).abs() > FILTER_TOLERANCE {
                return fail(format!("low-pass autocorrelation at shift {} is {auto}", 2 * m));
            }
        }
        for shift in -(n as isize / 2)..=(n as isize / 2) {
            let cross = shifted_dot_signed(&self.h0, &self.h1, 2 * shift);
            if cross.abs() > FILTER_TOLERANCE {
                return fail(format!("low/high cross-correlation at shift {} is {cross}", 2 * shift));
            }
        }
        let mirror = derive_highpass(&self.h0)?;
        if mirror.iter().zip(&self.h1).any(|(a, b)| (a - b).abs() > FILTER_TOLERANCE) {
            return fail("high-pass does not satisfy the mirror relation".into());
        }
        if self.g0 != self.h0 || self.g1 != self.h1 {
            return fail("synthesis filters differ from analysis filters".into());
        }
        Ok(())
    }
}

/// Quadrature-mirror high-pass: `g[k] = (-1)^k h[1-k]`, shifted by the
/// (even) offset `L-2` so it occupies the same support `0..L` as `h`, which
/// gives `g[k] = (-1)^k h[L-1-k]`.
pub fn derive_highpass(h0: &[f64]) -> Result<Vec<f64>> {
    let n = h0.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidFilter {
            name: "highpass".into(),
            reason: format!("low-pass length {n} is not a positive even number"),
        });
    }
    Ok((0..n)
        .map(|k| {
            let v = h0[n - 1 - k];
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect())
}

fn shifted_dot(a: &[f64], b: &[f64], shift: usize) -> f64 {
    a.iter().skip(shift).zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_k a[k] * b[k - shift]` over the overlapping support.
fn shifted_dot_signed(a: &[f64], b: &[f64], shift: isize) -> f64 {
    (0..a.len() as isize)
        .filter_map(|k| {
            let j = k - shift;
            (j >= 0 && (j as usize) < b.len()).then(|| a[k as usize] * b[j as usize])
        })
        .sum()
}

pub(crate) const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2; 2];

pub(crate) const DB10: [f64; 20] = [
    0.026670057900555554,
    0.1881768000776915,
    0.5272011889317256,
    0.6884590394536035,
    0.2811723436605775,
    -0.24984642432731538,
    -0.19594627437737705,
    0.12736934033579325,
    0.09305736460357235,
    -0.07139414716639708,
    -0.029457536821875813,
    0.033212674059341,
    0.0036065535669561697,
    -0.010733175483330575,
    0.001395351747052901,
    0.001992405295185056,
    -0.0006858566949597116,
    -0.00011646685512928545,
    9.358867032006959e-05,
    -1.3264202894521244e-05,
];

pub(crate) const SYM8: [f64; 16] = [
    0.0018899503327594609,
    -0.0003029205147213668,
    -0.01495225833704823,
    0.003808752013890615,
    0.049137179673607506,
    -0.027219029917056003,
    -0.05194583810770904,
    0.3644418948353314,
    0.7771857517005235,
    0.4813596512583722,
    -0.061273359067658524,
    -0.1432942383508097,
    0.007607487324917605,
    0.03169508781149298,
    -0.0005421323317911481,
    -0.0033824159510061256,
];

pub(crate) const COIF5: [f64; 30] = [
    -0.000212081862067494,
    0.0003585777411617577,
    0.0021782943778456947,
    -0.00415931262757864,
    -0.010131584846900276,
    0.023408322118927783,
    0.028169744270532353,
    -0.09192158806008609,
    -0.052046670253554764,
    0.42157126673075435,
    0.7742936228603274,
    0.4379823066591634,
    -0.06203775157498196,
    -0.10556315130733723,
    0.041287530472117834,
    0.032674799467057355,
    -0.019758391600965465,
    -0.009159507338676163,
    0.006761520220620417,
    0.0024315754425382886,
    -0.0016616273039298788,
    -0.0006375589261258812,
    0.0003018579416682448,
    0.00014035632812373243,
    -4.12198619242655e-05,
    -2.1270221672515614e-05,
    3.7007277113394796e-06,
    2.0612203985788783e-06,
    -1.6237995172048338e-07,
    -9.604010112767894e-08,
];
