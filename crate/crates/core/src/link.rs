//! Short-codeword framing over one multicarrier frame.
//!
//! A frame of `L` subcarriers with `q` bits per symbol carries `V = L*q/N`
//! codewords of length `N`. Codeword `v` occupies the contiguous bit block
//! `[v*N, (v+1)*N)`, so with BPSK and `N = 64` subcarriers 1..=64 carry the
//! first codeword and 65..=128 the second. Each lane is detected and decoded
//! on its own.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::chanmodel::ChannelRealization;
use crate::decoders::{
    decode, DecodeError, DecodeOutcome, DecodeStatus, DecoderConfig, DecoderKind,
};
use crate::detect::{detect_frame, DetectError, Regime, ReliabilityVector};
use crate::modem::{map_bits, Constellation, ModemError};
use crate::polar::{PolarCode, PolarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error(
        "L*q = {lq} is not a multiple of N = {n}; nearest valid num_subcarriers is {suggested}"
    )]
    NotDivisible {
        lq: usize,
        n: usize,
        suggested: usize,
    },
    #[error("invalid frame configuration: {0}")]
    Config(String),
    #[error("{what} has length {got}, expected {expected}")]
    Shape {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Modem(#[from] ModemError),
    #[error(transparent)]
    Polar(#[from] PolarError),
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of codewords per frame, `L*q/N`.
///
/// On failure the error names the closest `L` (ties go to the smaller one)
/// for which the division is exact.
pub fn compute_parallelism(l: usize, q: usize, n: usize) -> Result<usize, LinkError> {
    if l == 0 || q == 0 || n == 0 {
        return Err(LinkError::Config(format!(
            "L, q and N must be positive (got L={l}, q={q}, N={n})"
        )));
    }
    let lq = l * q;
    if lq.is_multiple_of(n) {
        return Ok(lq / n);
    }
    let step = n / gcd(n, q);
    let below = l / step * step;
    let above = below + step;
    let suggested = if below == 0 || above - l < l - below {
        above
    } else {
        below
    };
    Err(LinkError::NotDivisible { lq, n, suggested })
}

/// Code carried by each lane.
#[derive(Clone, Debug, PartialEq)]
pub enum LinkCode {
    Polar(PolarCode),
    /// Rate-1 pass-through: the payload is sent as is.
    Uncoded {
        n: usize,
    },
}

impl LinkCode {
    pub fn n(&self) -> usize {
        match self {
            LinkCode::Polar(c) => c.n(),
            LinkCode::Uncoded { n } => *n,
        }
    }

    /// Information bits per lane (CRC excluded).
    pub fn payload_len(&self) -> usize {
        match self {
            LinkCode::Polar(c) => c.payload_len(),
            LinkCode::Uncoded { n } => *n,
        }
    }

    /// Nominal information length including CRC bits.
    pub fn k(&self) -> usize {
        match self {
            LinkCode::Polar(c) => c.k(),
            LinkCode::Uncoded { n } => *n,
        }
    }

    pub fn encode_payload(&self, payload: &[u8]) -> Result<Vec<u8>, LinkError> {
        match self {
            LinkCode::Polar(c) => Ok(c.encode_payload(payload)?),
            LinkCode::Uncoded { n } => {
                if payload.len() != *n {
                    return Err(LinkError::Shape {
                        what: "payload",
                        got: payload.len(),
                        expected: *n,
                    });
                }
                Ok(payload.to_vec())
            }
        }
    }

    pub fn decode(
        &self,
        rel: &ReliabilityVector,
        cfg: &DecoderConfig,
    ) -> Result<DecodeOutcome, LinkError> {
        match self {
            LinkCode::Polar(c) => Ok(decode(rel, c, cfg)?),
            LinkCode::Uncoded { n } => {
                if rel.len() != *n {
                    return Err(DecodeError::LengthMismatch {
                        expected: *n,
                        got: rel.len(),
                    }
                    .into());
                }
                let bits = rel.hard_bits().to_vec();
                Ok(DecodeOutcome {
                    info_bits: bits.clone(),
                    codeword: bits,
                    queries: 0,
                    list_rank: 0,
                    status: DecodeStatus::Decoded,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameConfig {
    num_subcarriers: usize,
    constellation: Constellation,
    code: LinkCode,
    pub tx_power_w: f64,
    pub tx_gain_lin: f64,
    pub rx_gain_lin: f64,
    lanes: usize,
}

impl FrameConfig {
    pub fn new(
        num_subcarriers: usize,
        constellation: Constellation,
        code: LinkCode,
        tx_power_w: f64,
        tx_gain_lin: f64,
        rx_gain_lin: f64,
    ) -> Result<Self, LinkError> {
        let lanes =
            compute_parallelism(num_subcarriers, constellation.bits_per_symbol(), code.n())?;
        for (name, v) in [
            ("tx_power_w", tx_power_w),
            ("tx_gain_lin", tx_gain_lin),
            ("rx_gain_lin", rx_gain_lin),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(LinkError::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(Self {
            num_subcarriers,
            constellation,
            code,
            tx_power_w,
            tx_gain_lin,
            rx_gain_lin,
            lanes,
        })
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn code(&self) -> &LinkCode {
        &self.code
    }

    /// Codewords per frame (V).
    pub fn lanes(&self) -> usize {
        self.lanes
    }

    pub fn payload_bits(&self) -> usize {
        self.lanes * self.code.payload_len()
    }

    /// `sqrt(P_t G_t G_r)`.
    pub fn amplitude(&self) -> f64 {
        (self.tx_power_w * self.tx_gain_lin * self.rx_gain_lin).sqrt()
    }

    /// Subcarrier range of lane `v` (0-based, half-open).
    pub fn lane_subcarriers(&self, v: usize) -> std::ops::Range<usize> {
        let per = self.num_subcarriers / self.lanes;
        v * per..(v + 1) * per
    }

    fn check_channel(&self, chan: &ChannelRealization) -> Result<(), LinkError> {
        if chan.len() != self.num_subcarriers {
            return Err(LinkError::Shape {
                what: "channel",
                got: chan.len(),
                expected: self.num_subcarriers,
            });
        }
        Ok(())
    }
}

/// Encodes, maps and transmits one frame: `y = sqrt(P Gt Gr) h x + n` with
/// circularly symmetric noise of total variance `chan.noise_variance`.
pub fn transmit_frame<R: Rng + ?Sized>(
    info_bits: &[u8],
    cfg: &FrameConfig,
    chan: &ChannelRealization,
    rng: &mut R,
) -> Result<Vec<Complex64>, LinkError> {
    cfg.check_channel(chan)?;
    if info_bits.len() != cfg.payload_bits() {
        return Err(LinkError::Shape {
            what: "info bits",
            got: info_bits.len(),
            expected: cfg.payload_bits(),
        });
    }
    let k = cfg.code.payload_len();
    let mut coded = Vec::with_capacity(cfg.lanes * cfg.code.n());
    for v in 0..cfg.lanes {
        coded.extend(cfg.code.encode_payload(&info_bits[v * k..(v + 1) * k])?);
    }
    let x = map_bits(&coded, &cfg.constellation)?;
    let amp = cfg.amplitude();
    let std = (chan.noise_variance / 2.0).sqrt();
    Ok(x.iter()
        .zip(&chan.gains)
        .map(|(&xl, &hl)| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            amp * hl * xl + Complex64::new(re * std, im * std)
        })
        .collect())
}

/// How the lanes of one frame are decoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Schedule {
    #[default]
    Sequential,
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameResult {
    pub tx_info: Vec<Vec<u8>>,
    pub decoded_info: Vec<Vec<u8>>,
    pub outcomes: Vec<DecodeOutcome>,
    pub block_errors: usize,
}

impl FrameResult {
    pub fn from_outcomes(tx_info: Vec<Vec<u8>>, outcomes: Vec<DecodeOutcome>) -> Self {
        let decoded_info: Vec<Vec<u8>> = outcomes.iter().map(|o| o.info_bits.clone()).collect();
        let block_errors = tx_info
            .iter()
            .zip(&decoded_info)
            .filter(|(a, b)| a != b)
            .count();
        Self {
            tx_info,
            decoded_info,
            outcomes,
            block_errors,
        }
    }

    pub fn bit_errors(&self) -> usize {
        self.tx_info
            .iter()
            .zip(&self.decoded_info)
            .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count())
            .sum()
    }

    pub fn total_queries(&self) -> u64 {
        self.outcomes.iter().map(|o| o.queries).sum()
    }
}

/// Detects every subcarrier and decodes each lane.
pub fn receive_frame(
    y: &[Complex64],
    tx_info: &[u8],
    chan: &ChannelRealization,
    cfg: &FrameConfig,
    regime: Regime,
    decoder: &DecoderConfig,
    schedule: Schedule,
) -> Result<FrameResult, LinkError> {
    cfg.check_channel(chan)?;
    if y.len() != cfg.num_subcarriers {
        return Err(LinkError::Shape {
            what: "received samples",
            got: y.len(),
            expected: cfg.num_subcarriers,
        });
    }
    if tx_info.len() != cfg.payload_bits() {
        return Err(LinkError::Shape {
            what: "info bits",
            got: tx_info.len(),
            expected: cfg.payload_bits(),
        });
    }
    let uncoded = matches!(cfg.code, LinkCode::Uncoded { .. });
    if uncoded && decoder.kind != DecoderKind::Uncoded {
        return Err(LinkError::Config(format!(
            "decoder {} needs a polar code",
            decoder.kind.name()
        )));
    }
    let amp = cfg.amplitude();
    let h_eff: Vec<Complex64> = chan.gains.iter().map(|&h| h * amp).collect();
    let rel = detect_frame(y, &h_eff, chan.noise_variance, &cfg.constellation, regime)?;

    let n = cfg.code.n();
    let decode_lane = |v: usize| cfg.code.decode(&rel.slice(v * n..(v + 1) * n), decoder);
    let outcomes: Vec<DecodeOutcome> = match schedule {
        Schedule::Sequential => (0..cfg.lanes).map(decode_lane).collect::<Result<_, _>>()?,
        Schedule::Parallel => (0..cfg.lanes)
            .into_par_iter()
            .map(decode_lane)
            .collect::<Result<_, _>>()?,
    };
    let k = cfg.code.payload_len();
    let tx: Vec<Vec<u8>> = (0..cfg.lanes)
        .map(|v| tx_info[v * k..(v + 1) * k].to_vec())
        .collect();
    Ok(FrameResult::from_outcomes(tx, outcomes))
}
