//! JSON simulation recipe.

use serde::{Deserialize, Serialize};

use crate::chanmodel::{FadingModel, PathGainSpec};
use crate::decoders::{DecoderConfig, DecoderKind};
use crate::detect::Regime;
use crate::link::{compute_parallelism, LinkCode};
use crate::modem::Modulation;
use crate::polar::{Crc, PolarCode};

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn default_rx_gain() -> f64 {
    19.0
}

fn default_min_errors() -> u64 {
    100
}

fn default_temperature() -> f64 {
    300.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub path: PathGainSpec,
    pub fading: FadingModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub modulation: Modulation,
    #[serde(default)]
    pub tx_gain_dbi: f64,
    #[serde(default = "default_rx_gain")]
    pub rx_gain_dbi: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrcChoice {
    #[default]
    Nr11,
    Test4,
    None,
}

impl CrcChoice {
    pub fn crc(self) -> Crc {
        match self {
            CrcChoice::Nr11 => Crc::NR11,
            CrcChoice::Test4 => Crc::TEST4,
            CrcChoice::None => Crc::NONE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeConfig {
    /// `k` counts the CRC bits.
    Polar {
        n: usize,
        k: usize,
        #[serde(default)]
        crc: CrcChoice,
    },
    Uncoded {
        n: usize,
    },
}

impl CodeConfig {
    pub fn n(&self) -> usize {
        match self {
            CodeConfig::Polar { n, .. } | CodeConfig::Uncoded { n } => *n,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            CodeConfig::Polar { k, .. } => *k,
            CodeConfig::Uncoded { n } => *n,
        }
    }

    pub fn build(&self) -> Result<LinkCode, String> {
        match self {
            CodeConfig::Polar { n, k, crc } => PolarCode::construct(*n, *k, crc.crc())
                .map(LinkCode::Polar)
                .map_err(|e| e.to_string()),
            CodeConfig::Uncoded { n } => {
                if *n == 0 {
                    Err("uncoded block length must be positive".into())
                } else {
                    Ok(LinkCode::Uncoded { n: *n })
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub channel: ChannelConfig,
    pub frame: FrameSpec,
    pub code: CodeConfig,
    pub decoder: DecoderConfig,
    pub regime: Regime,
    pub snr_grid_db: Vec<f64>,
    pub max_frames: u64,
    #[serde(default = "default_min_errors")]
    pub min_block_errors: u64,
    pub seed: u64,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    /// Worker threads; 0 uses every available core. Never changes results.
    #[serde(default)]
    pub lanes: usize,
    /// Regimes run side by side by `compare`; empty means hard, psi, soft.
    #[serde(default)]
    pub compare_regimes: Vec<Regime>,
}

impl SimConfig {
    /// Indoor alpha-mu link at 142 GHz over 10.1 m with a (64, 57) polar code.
    pub fn indoor_alpha_mu() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            channel: ChannelConfig {
                path: PathGainSpec {
                    carrier_freq_hz: 142e9,
                    bandwidth_hz: 4e9,
                    num_subcarriers: 64,
                    distance_m: 10.1,
                    absorption_coeff_per_m: 0.0,
                },
                fading: FadingModel::AlphaMu {
                    alpha: 2.0,
                    mu: 1.0,
                    z_hat: 1.0,
                },
            },
            frame: FrameSpec {
                modulation: Modulation::Bpsk,
                tx_gain_dbi: 0.0,
                rx_gain_dbi: 19.0,
            },
            code: CodeConfig::Polar {
                n: 64,
                k: 57,
                crc: CrcChoice::Nr11,
            },
            decoder: DecoderConfig::new(DecoderKind::Orbgrand),
            regime: Regime::Soft,
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            max_frames: 10_000,
            min_block_errors: 100,
            seed: 1,
            temperature_k: 300.0,
            lanes: 0,
            compare_regimes: Vec::new(),
        }
    }

    /// Regimes used by `compare`.
    pub fn regimes_to_compare(&self) -> Vec<Regime> {
        if self.compare_regimes.is_empty() {
            vec![Regime::Hard, Regime::Psi, Regime::Soft]
        } else {
            self.compare_regimes.clone()
        }
    }

    /// Every problem with the configuration, in field order.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            out.push(format!(
                "schema_version: unsupported version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if let Err(e) = self.channel.path.validate() {
            out.push(format!("channel.path: {e}"));
        }
        if self.channel.path.bandwidth_hz.is_nan() || self.channel.path.bandwidth_hz <= 0.0 {
            out.push(
                "channel.path.bandwidth_hz: must be positive to define the noise power".into(),
            );
        }
        if let Err(e) = self.channel.fading.validate() {
            out.push(format!("channel.fading: {e}"));
        }
        for (name, v) in [
            ("frame.tx_gain_dbi", self.frame.tx_gain_dbi),
            ("frame.rx_gain_dbi", self.frame.rx_gain_dbi),
        ] {
            if !v.is_finite() {
                out.push(format!("{name}: must be finite"));
            }
        }
        match self.code.build() {
            Err(e) => out.push(format!("code: {e}")),
            Ok(code) => {
                if let Err(e) = compute_parallelism(
                    self.channel.path.num_subcarriers,
                    self.frame.modulation.bits_per_symbol(),
                    code.n(),
                ) {
                    out.push(format!("channel.path.num_subcarriers: {e}"));
                }
                let uncoded = matches!(code, LinkCode::Uncoded { .. });
                if uncoded != (self.decoder.kind == DecoderKind::Uncoded) {
                    out.push(format!(
                        "decoder.kind: {} cannot be used with a {} code",
                        self.decoder.kind.name(),
                        if uncoded { "uncoded" } else { "polar" }
                    ));
                }
            }
        }
        if self.decoder.list_size == 0 {
            out.push("decoder.list_size: must be at least 1".into());
        }
        if self.decoder.budget == 0 {
            out.push("decoder.budget: must be at least 1".into());
        }
        if self.snr_grid_db.is_empty() {
            out.push("snr_grid_db: must not be empty".into());
        }
        if self.snr_grid_db.iter().any(|s| !s.is_finite()) {
            out.push("snr_grid_db: values must be finite".into());
        }
        if self.max_frames == 0 {
            out.push("max_frames: must be at least 1".into());
        }
        if self.min_block_errors == 0 {
            out.push("min_block_errors: must be at least 1".into());
        }
        if !(self.temperature_k.is_finite() && self.temperature_k > 0.0) {
            out.push(format!(
                "temperature_k: must be positive, got {}",
                self.temperature_k
            ));
        }
        out
    }
}
