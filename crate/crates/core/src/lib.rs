//! Link-level simulation of multicarrier THz links.
//!
//! The crate covers the whole transceiver chain used for block error rate
//! studies at THz frequencies:
//!
//! * [`chanmodel`]: per-subcarrier channel gains built from a path gain and a
//!   small-scale fading factor (alpha-mu, mixture gamma, a tapped multipath
//!   response, or no fading).
//! * [`modem`]: Gray-labelled BPSK/QPSK mapping and slicing.
//! * [`detect`]: zero-forcing equalisation, max-log LLRs, and pseudo-soft
//!   information (the per-symbol post-equalisation SNR).
//! * [`polar`]: CRC-aided polar code construction, encoding and codebook
//!   membership.
//! * [`decoders`]: SC, CRC-aided SCL, hard GRAND and ORBGRAND.
//! * [`link`]: framing of several short codewords onto one multicarrier frame.
//! * [`harness`]: Monte Carlo BLER/BER sweeps with deterministic, lane-count
//!   independent random streams.
//! * [`cli`]: the batch command-line front end.

pub mod chanmodel;
pub mod cli;
pub mod decoders;
pub mod detect;
pub mod harness;
pub mod link;
pub mod modem;
pub mod polar;
pub mod rng;
pub mod selftest;

pub use chanmodel::{ChannelRealization, FadingModel, PathGainSpec};
pub use decoders::{DecodeOutcome, DecodeStatus, DecoderConfig, DecoderKind};
pub use detect::{Regime, ReliabilityVector};
pub use harness::{BlerPoint, SimConfig};
pub use modem::{Constellation, Modulation};
pub use polar::{Crc, PolarCode};
