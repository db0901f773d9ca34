//! Channel decoders: SC, CRC-aided SCL, hard GRAND and ORBGRAND.
//!
//! All decoders take a [`ReliabilityVector`]. SC and SCL turn it into signed
//! pseudo-LLRs (unit magnitude for hard input); GRAND uses the hard bits and
//! ranks positions by magnitude.

mod grand;
mod patterns;
mod sc;
mod scl;

pub use grand::grand_decode;
pub use patterns::{make_pattern_generator, PatternGenerator, PatternOrder};
pub use sc::sc_decode;
pub use scl::scl_decode;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect::ReliabilityVector;
use crate::polar::PolarCode;

/// Default GRAND abandonment budget (queries per codeword).
pub const DEFAULT_BUDGET: u64 = 1 << 16;
pub const DEFAULT_LIST_SIZE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("reliability vector has {got} bits, code length is {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("list size must be at least 1")]
    BadListSize,
    #[error("query budget must be at least 1")]
    BadBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecodeStatus {
    Decoded,
    AbandonedAtBudget,
    CrcFailAllPaths,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Payload bits (CRC stripped).
    pub info_bits: Vec<u8>,
    pub codeword: Vec<u8>,
    /// Codebook queries (GRAND only).
    pub queries: u64,
    /// Rank of the selected path in metric order (SCL only).
    pub list_rank: usize,
    pub status: DecodeStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scl,
    Grand,
    Orbgrand,
    /// No decoding: the hard decisions are the payload (uncoded links only).
    Uncoded,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scl => "scl",
            DecoderKind::Grand => "grand",
            DecoderKind::Orbgrand => "orbgrand",
            DecoderKind::Uncoded => "uncoded",
        }
    }

    pub fn is_grand(self) -> bool {
        matches!(self, DecoderKind::Grand | DecoderKind::Orbgrand)
    }
}

fn default_list_size() -> usize {
    DEFAULT_LIST_SIZE
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderConfig {
    pub kind: DecoderKind,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

impl DecoderConfig {
    pub fn new(kind: DecoderKind) -> Self {
        Self {
            kind,
            list_size: DEFAULT_LIST_SIZE,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Short label such as `scl16` or `orbgrand`.
    pub fn label(&self) -> String {
        match self.kind {
            DecoderKind::Scl => format!("scl{}", self.list_size),
            k => k.name().to_string(),
        }
    }
}

/// Runs the configured polar decoder on one codeword.
pub fn decode(
    rel: &ReliabilityVector,
    code: &PolarCode,
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, DecodeError> {
    match cfg.kind {
        DecoderKind::Sc => sc_decode(rel, code),
        DecoderKind::Scl => scl_decode(rel, code, cfg.list_size),
        DecoderKind::Grand => grand_decode(rel, code, PatternOrder::HammingWeight, cfg.budget),
        DecoderKind::Orbgrand => grand_decode(rel, code, PatternOrder::LogisticWeight, cfg.budget),
        DecoderKind::Uncoded => {
            check_len(rel, code.n())?;
            let codeword = rel.hard_bits().to_vec();
            Ok(DecodeOutcome {
                info_bits: code.extract_payload(&codeword),
                codeword,
                queries: 0,
                list_rank: 0,
                status: DecodeStatus::Decoded,
            })
        }
    }
}

fn check_len(rel: &ReliabilityVector, n: usize) -> Result<(), DecodeError> {
    if rel.len() != n {
        Err(DecodeError::LengthMismatch {
            expected: n,
            got: rel.len(),
        })
    } else {
        Ok(())
    }
}

/// Min-sum check-node update.
#[inline]
pub(crate) fn f_minsum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Variable-node update given the partial sum `u` of the upper branch.
#[inline]
pub(crate) fn g_update(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}
