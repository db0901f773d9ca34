//! Per-subcarrier detection and bit reliabilities.
//!
//! LLR sign convention: `lambda = (min_{x: c=1} d(x) - min_{x: c=0} d(x)) / var`,
//! so a positive value favours bit 0. Decoders only ever see a hard bit and a
//! non-negative magnitude, which keeps the convention confined to this module.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modem::Constellation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectError {
    #[error("channel gain is zero; cannot equalise")]
    SingularChannel,
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoiseVariance(f64),
    #[error("length mismatch: {what} has {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("bit {index}: LLR {llr} disagrees with hard decision {bit}")]
    SignMismatch { index: usize, llr: f64, bit: u8 },
    #[error("reliability values must be finite and non-negative (index {0})")]
    BadValue(usize),
}

/// Reliability regime handed to the decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Hard decisions only.
    Hard,
    /// Hard decisions plus one post-equalisation SNR per symbol.
    Psi,
    /// Max-log LLR per bit.
    Soft,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Hard => "hard",
            Regime::Psi => "psi",
            Regime::Soft => "soft",
        }
    }
}

/// Hard decisions plus optional per-bit magnitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityVector {
    regime: Regime,
    hard_bits: Vec<u8>,
    values: Option<Vec<f64>>,
}

/// Regime-specific detector output fed to [`build_reliability`].
#[derive(Clone, Copy, Debug)]
pub enum ReliabilityInput<'a> {
    None,
    /// One signed LLR per bit.
    Llrs(&'a [f64]),
    /// One PSI value per symbol of `bits_per_symbol` bits.
    Psi {
        per_symbol: &'a [f64],
        bits_per_symbol: usize,
    },
}

fn check_values(values: &[f64]) -> Result<(), DetectError> {
    match values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        Some(i) => Err(DetectError::BadValue(i)),
        None => Ok(()),
    }
}

/// Packages detector outputs as a [`ReliabilityVector`].
///
/// For `Soft`, the hard bits must agree with the LLR signs (bit 1 iff
/// `lambda < 0`; a zero LLR accepts either bit). For `Psi`, each symbol's
/// value is copied to all of its bits.
pub fn build_reliability(
    regime: Regime,
    hard_bits: Vec<u8>,
    input: ReliabilityInput<'_>,
) -> Result<ReliabilityVector, DetectError> {
    let n = hard_bits.len();
    let values: Option<Vec<f64>> = match (regime, input) {
        (Regime::Hard, _) => None,
        (Regime::Soft, ReliabilityInput::Llrs(llrs)) => {
            if llrs.len() != n {
                return Err(DetectError::LengthMismatch {
                    what: "llrs",
                    got: llrs.len(),
                    expected: n,
                });
            }
            for (i, (&l, &b)) in llrs.iter().zip(&hard_bits).enumerate() {
                let implied = u8::from(l < 0.0);
                if l != 0.0 && implied != b {
                    return Err(DetectError::SignMismatch {
                        index: i,
                        llr: l,
                        bit: b,
                    });
                }
            }
            Some(llrs.iter().map(|l| l.abs()).collect())
        }
        (
            Regime::Psi,
            ReliabilityInput::Psi {
                per_symbol,
                bits_per_symbol,
            },
        ) => {
            if per_symbol.len() * bits_per_symbol != n {
                return Err(DetectError::LengthMismatch {
                    what: "psi bits",
                    got: per_symbol.len() * bits_per_symbol,
                    expected: n,
                });
            }
            Some(
                per_symbol
                    .iter()
                    .flat_map(|&v| std::iter::repeat_n(v, bits_per_symbol))
                    .collect(),
            )
        }
        (Regime::Soft, _) | (Regime::Psi, _) => {
            return Err(DetectError::LengthMismatch {
                what: "reliability input",
                got: 0,
                expected: n,
            })
        }
    };
    if let Some(v) = &values {
        check_values(v)?;
    }
    Ok(ReliabilityVector {
        regime,
        hard_bits,
        values,
    })
}

impl ReliabilityVector {
    pub fn hard(hard_bits: Vec<u8>) -> Self {
        Self {
            regime: Regime::Hard,
            hard_bits,
            values: None,
        }
    }

    /// Soft vector from signed LLRs; hard bits follow the LLR signs.
    pub fn from_llrs(llrs: &[f64]) -> Result<Self, DetectError> {
        let bits = llrs.iter().map(|&l| u8::from(l < 0.0)).collect();
        build_reliability(Regime::Soft, bits, ReliabilityInput::Llrs(llrs))
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn len(&self) -> usize {
        self.hard_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hard_bits.is_empty()
    }

    pub fn hard_bits(&self) -> &[u8] {
        &self.hard_bits
    }

    pub fn values(&self) -> Option<&[f64]> {
        self.values.as_deref()
    }

    /// Magnitude of bit `j`; 1.0 for hard vectors.
    #[inline]
    pub fn magnitude(&self, j: usize) -> f64 {
        self.values.as_ref().map_or(1.0, |v| v[j])
    }

    /// Signed pseudo-LLRs `(1 - 2 c_j) * |value_j|` (positive favours 0).
    pub fn signed_llrs(&self) -> Vec<f64> {
        self.hard_bits
            .iter()
            .enumerate()
            .map(|(j, &b)| {
                if b == 0 {
                    self.magnitude(j)
                } else {
                    -self.magnitude(j)
                }
            })
            .collect()
    }

    /// Sub-vector of bits `range` (e.g. one codeword of a frame).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            regime: self.regime,
            hard_bits: self.hard_bits[range.clone()].to_vec(),
            values: self.values.as_ref().map(|v| v[range].to_vec()),
        }
    }
}

fn check_gain(h: Complex64) -> Result<f64, DetectError> {
    let p = h.norm_sqr();
    if p == 0.0 || !p.is_finite() {
        Err(DetectError::SingularChannel)
    } else {
        Ok(p)
    }
}

fn check_variance(s: f64) -> Result<(), DetectError> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(DetectError::InvalidNoiseVariance(s))
    }
}

/// Zero-forcing equaliser for one subcarrier: `y / h`.
pub fn zf_equalize(y: Complex64, h: Complex64) -> Result<Complex64, DetectError> {
    let p = check_gain(h)?;
    Ok(h.conj() * y / p)
}

/// Post-ZF noise variance `sigma^2 / |h|^2`.
pub fn effective_noise_variance_zf(h: Complex64, sigma2: f64) -> Result<f64, DetectError> {
    check_variance(sigma2)?;
    Ok(sigma2 / check_gain(h)?)
}

/// Pseudo-soft information `|h|^2 / sigma^2` of one symbol.
pub fn psi_zf(h: Complex64, sigma2: f64) -> Result<f64, DetectError> {
    check_variance(sigma2)?;
    Ok(check_gain(h)? / sigma2)
}

// Max-log LLRs from per-point squared distances (already scaled).
fn max_log_from_metrics(metrics: &[f64], c: &Constellation, out: &mut Vec<f64>) {
    for j in 0..c.bits_per_symbol() {
        let mut min0 = f64::INFINITY;
        let mut min1 = f64::INFINITY;
        for (i, &m) in metrics.iter().enumerate() {
            if c.label_bit(i, j) == 0 {
                min0 = min0.min(m);
            } else {
                min1 = min1.min(m);
            }
        }
        out.push(min1 - min0);
    }
}

/// Max-log ML LLRs of the bits of one symbol, by exhaustive search.
pub fn llr_ml(y: Complex64, h: Complex64, sigma2: f64, c: &Constellation) -> Vec<f64> {
    let metrics: Vec<f64> = c
        .points()
        .iter()
        .map(|&x| (y - h * x).norm_sqr() / sigma2)
        .collect();
    let mut out = Vec::with_capacity(c.bits_per_symbol());
    max_log_from_metrics(&metrics, c, &mut out);
    out
}

/// Max-log LLRs of an equalised symbol with post-ZF noise variance `sigma2_zf`.
pub fn llr_zf(y_hat: Complex64, sigma2_zf: f64, c: &Constellation) -> Vec<f64> {
    let mut out = Vec::with_capacity(c.bits_per_symbol());
    llr_zf_into(y_hat, sigma2_zf, c, &mut out);
    out
}

fn llr_zf_into(y_hat: Complex64, sigma2_zf: f64, c: &Constellation, out: &mut Vec<f64>) {
    let mut metrics = [0.0f64; 4];
    let npts = c.points().len();
    for (m, &x) in metrics.iter_mut().zip(c.points()) {
        *m = (y_hat - x).norm_sqr() / sigma2_zf;
    }
    max_log_from_metrics(&metrics[..npts], c, out);
}

/// Per-subcarrier ML decision; the diagonal channel makes the joint search separable.
pub fn ml_detect(
    y: &[Complex64],
    h: &[Complex64],
    c: &Constellation,
) -> Result<Vec<Complex64>, DetectError> {
    if y.len() != h.len() {
        return Err(DetectError::LengthMismatch {
            what: "y",
            got: y.len(),
            expected: h.len(),
        });
    }
    Ok(y.iter()
        .zip(h)
        .map(|(&yl, &hl)| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (i, &x) in c.points().iter().enumerate() {
                let d = (yl - hl * x).norm_sqr();
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
            c.points()[best]
        })
        .collect())
}

/// ZF detection of a whole frame: slices every subcarrier and attaches the
/// reliabilities of `regime`. `h` is the effective gain (including transmit
/// power and antenna gains).
pub fn detect_frame(
    y: &[Complex64],
    h: &[Complex64],
    sigma2: f64,
    c: &Constellation,
    regime: Regime,
) -> Result<ReliabilityVector, DetectError> {
    if y.len() != h.len() {
        return Err(DetectError::LengthMismatch {
            what: "y",
            got: y.len(),
            expected: h.len(),
        });
    }
    check_variance(sigma2)?;
    let q = c.bits_per_symbol();
    let mut bits = Vec::with_capacity(y.len() * q);
    match regime {
        Regime::Hard | Regime::Psi => {
            let mut psi = Vec::with_capacity(if regime == Regime::Psi { y.len() } else { 0 });
            for (&yl, &hl) in y.iter().zip(h) {
                let y_hat = zf_equalize(yl, hl)?;
                let idx = c.nearest(y_hat);
                bits.extend((0..q).map(|j| c.label_bit(idx, j)));
                if regime == Regime::Psi {
                    psi.push(psi_zf(hl, sigma2)?);
                }
            }
            if regime == Regime::Hard {
                Ok(ReliabilityVector::hard(bits))
            } else {
                build_reliability(
                    Regime::Psi,
                    bits,
                    ReliabilityInput::Psi {
                        per_symbol: &psi,
                        bits_per_symbol: q,
                    },
                )
            }
        }
        Regime::Soft => {
            let mut llrs = Vec::with_capacity(y.len() * q);
            for (&yl, &hl) in y.iter().zip(h) {
                let y_hat = zf_equalize(yl, hl)?;
                let var = effective_noise_variance_zf(hl, sigma2)?;
                llr_zf_into(y_hat, var, c, &mut llrs);
            }
            bits.extend(llrs.iter().map(|&l| u8::from(l < 0.0)));
            build_reliability(Regime::Soft, bits, ReliabilityInput::Llrs(&llrs))
        }
    }
}
