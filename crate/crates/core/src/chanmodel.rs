//! Frequency-selective THz channel realizations.
//!
//! The gain of subcarrier `l` factors into a deterministic path gain and a
//! random small-scale fading term, `h_l = g_l * a_l * exp(j theta_l)`. The path
//! gain is the free-space amplitude loss times a molecular absorption term;
//! the fading amplitude comes from one of the [`FadingModel`] variants.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid fading model: {0}")]
    InvalidModel(String),
    #[error("invalid path-gain spec: {0}")]
    InvalidSpec(String),
    #[error("no analytic amplitude PDF for the {0} model")]
    NoAnalyticPdf(&'static str),
    #[error("the {0} model has no per-sample amplitude sampler; use realize_channel")]
    NoScalarSampler(&'static str),
    #[error("subcarrier index {index} out of range 1..={count}")]
    SubcarrierOutOfRange { index: usize, count: usize },
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoiseVariance(f64),
}

/// One component of a mixture-gamma density: `weight * Gamma(shape, rate)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaComponent {
    pub weight: f64,
    pub shape: f64,
    pub rate: f64,
}

fn default_max_excess_delay() -> f64 {
    10e-9
}

/// Small-scale fading amplitude model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum FadingModel {
    /// Generalised alpha-mu amplitude with alpha-root-mean scale `z_hat`.
    AlphaMu { alpha: f64, mu: f64, z_hat: f64 },
    /// Weighted sum of gamma densities; weights must sum to one.
    MixtureGamma { components: Vec<GammaComponent> },
    /// Poisson number of NLoS taps (plus an optional LoS tap) evaluated at
    /// every subcarrier frequency.
    SimplifiedMultipath {
        mean_num_nlos_paths: f64,
        los_present: bool,
        per_path_decay_db: f64,
        #[serde(default = "default_max_excess_delay")]
        max_excess_delay_s: f64,
    },
    /// `h^f = 1`; AWGN reference.
    Unfaded,
}

fn positive(name: &str, v: f64) -> Result<(), ChannelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ChannelError::InvalidModel(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl FadingModel {
    pub fn name(&self) -> &'static str {
        match self {
            FadingModel::AlphaMu { .. } => "alpha_mu",
            FadingModel::MixtureGamma { .. } => "mixture_gamma",
            FadingModel::SimplifiedMultipath { .. } => "simplified_multipath",
            FadingModel::Unfaded => "unfaded",
        }
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        match self {
            FadingModel::AlphaMu { alpha, mu, z_hat } => {
                positive("alpha", *alpha)?;
                positive("mu", *mu)?;
                positive("z_hat", *z_hat)
            }
            FadingModel::MixtureGamma { components } => {
                if components.is_empty() {
                    return Err(ChannelError::InvalidModel(
                        "mixture gamma needs at least one component".into(),
                    ));
                }
                let mut total = 0.0;
                for c in components {
                    if !(c.weight.is_finite() && c.weight > 0.0 && c.weight <= 1.0) {
                        return Err(ChannelError::InvalidModel(format!(
                            "component weight must lie in (0, 1], got {}",
                            c.weight
                        )));
                    }
                    positive("shape", c.shape)?;
                    positive("rate", c.rate)?;
                    total += c.weight;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(ChannelError::InvalidModel(format!(
                        "mixture weights sum to {total}, expected 1"
                    )));
                }
                Ok(())
            }
            FadingModel::SimplifiedMultipath {
                mean_num_nlos_paths,
                los_present,
                per_path_decay_db,
                max_excess_delay_s,
            } => {
                if !(mean_num_nlos_paths.is_finite() && *mean_num_nlos_paths >= 0.0) {
                    return Err(ChannelError::InvalidModel(format!(
                        "mean_num_nlos_paths must be non-negative, got {mean_num_nlos_paths}"
                    )));
                }
                if !los_present && *mean_num_nlos_paths == 0.0 {
                    return Err(ChannelError::InvalidModel(
                        "multipath model without LoS needs a positive NLoS path mean".into(),
                    ));
                }
                if !per_path_decay_db.is_finite() {
                    return Err(ChannelError::InvalidModel(
                        "per_path_decay_db must be finite".into(),
                    ));
                }
                if !(max_excess_delay_s.is_finite() && *max_excess_delay_s >= 0.0) {
                    return Err(ChannelError::InvalidModel(
                        "max_excess_delay_s must be non-negative".into(),
                    ));
                }
                Ok(())
            }
            FadingModel::Unfaded => Ok(()),
        }
    }

    /// Mean fading power `E[|h^f|^2]`.
    pub fn mean_power(&self) -> Result<f64, ChannelError> {
        self.validate()?;
        Ok(match self {
            FadingModel::AlphaMu { alpha, mu, z_hat } => {
                // E[Z^2] = z^2 Gamma(mu + 2/alpha) / (mu^(2/alpha) Gamma(mu))
                let log = 2.0 * z_hat.ln() + ln_gamma(mu + 2.0 / alpha)
                    - (2.0 / alpha) * mu.ln()
                    - ln_gamma(*mu);
                log.exp()
            }
            FadingModel::MixtureGamma { components } => components
                .iter()
                .map(|c| c.weight * c.shape * (c.shape + 1.0) / (c.rate * c.rate))
                .sum(),
            FadingModel::SimplifiedMultipath {
                mean_num_nlos_paths,
                los_present,
                per_path_decay_db,
                ..
            } => {
                // tap k (1-based) exists iff P >= k
                let mut power = if *los_present { 1.0 } else { 0.0 };
                let lambda = *mean_num_nlos_paths;
                if lambda > 0.0 {
                    let mut pmf = (-lambda).exp();
                    let mut tail = 1.0 - pmf; // P(P >= 1)
                    let mut k = 1u32;
                    while tail > 1e-17 && k < 10_000 {
                        power += tail * tap_power(*per_path_decay_db, k);
                        pmf *= lambda / k as f64;
                        tail -= pmf;
                        k += 1;
                    }
                }
                power
            }
            FadingModel::Unfaded => 1.0,
        })
    }
}

fn tap_power(decay_db: f64, k: u32) -> f64 {
    10f64.powf(-decay_db * k as f64 / 10.0)
}

/// Amplitude PDF `f_Z(t)` of the alpha-mu or mixture-gamma model.
pub fn fading_pdf(model: &FadingModel, t: f64) -> Result<f64, ChannelError> {
    model.validate()?;
    if t.is_nan() || t < 0.0 || t.is_infinite() {
        return Err(ChannelError::InvalidModel(format!(
            "pdf argument must be finite and non-negative, got {t}"
        )));
    }
    match model {
        FadingModel::AlphaMu { alpha, mu, z_hat } => {
            let am = alpha * mu;
            let norm = alpha.ln() + mu * mu.ln() - am * z_hat.ln() - ln_gamma(*mu);
            if t == 0.0 {
                return Ok(power_at_zero(am - 1.0, norm));
            }
            let log = norm + (am - 1.0) * t.ln() - mu * (t / z_hat).powf(*alpha);
            Ok(log.exp())
        }
        FadingModel::MixtureGamma { components } => Ok(components
            .iter()
            .map(|c| {
                let norm = c.weight.ln() + c.shape * c.rate.ln() - ln_gamma(c.shape);
                if t == 0.0 {
                    power_at_zero(c.shape - 1.0, norm)
                } else {
                    (norm + (c.shape - 1.0) * t.ln() - c.rate * t).exp()
                }
            })
            .sum()),
        other => Err(ChannelError::NoAnalyticPdf(other.name())),
    }
}

// Value at t = 0 of exp(log_norm) * t^exponent.
fn power_at_zero(exponent: f64, log_norm: f64) -> f64 {
    if exponent > 0.0 {
        0.0
    } else if exponent == 0.0 {
        log_norm.exp()
    } else {
        f64::INFINITY
    }
}

/// Pre-built sampler for the scalar amplitude models.
#[derive(Clone, Debug)]
pub enum AmplitudeSampler {
    AlphaMu {
        gamma: Gamma<f64>,
        mu: f64,
        inv_alpha: f64,
        z_hat: f64,
    },
    MixtureGamma {
        cumulative: Vec<f64>,
        gammas: Vec<Gamma<f64>>,
    },
    Unfaded,
}

impl AmplitudeSampler {
    pub fn new(model: &FadingModel) -> Result<Self, ChannelError> {
        model.validate()?;
        let bad = |e: rand_distr::GammaError| ChannelError::InvalidModel(e.to_string());
        match model {
            FadingModel::AlphaMu { alpha, mu, z_hat } => Ok(AmplitudeSampler::AlphaMu {
                gamma: Gamma::new(*mu, 1.0).map_err(bad)?,
                mu: *mu,
                inv_alpha: 1.0 / alpha,
                z_hat: *z_hat,
            }),
            FadingModel::MixtureGamma { components } => {
                let mut acc = 0.0;
                let mut cumulative = Vec::with_capacity(components.len());
                let mut gammas = Vec::with_capacity(components.len());
                for c in components {
                    acc += c.weight;
                    cumulative.push(acc);
                    gammas.push(Gamma::new(c.shape, 1.0 / c.rate).map_err(bad)?);
                }
                Ok(AmplitudeSampler::MixtureGamma { cumulative, gammas })
            }
            FadingModel::Unfaded => Ok(AmplitudeSampler::Unfaded),
            other => Err(ChannelError::NoScalarSampler(other.name())),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            AmplitudeSampler::AlphaMu {
                gamma,
                mu,
                inv_alpha,
                z_hat,
            } => {
                // mu (Z/z)^alpha ~ Gamma(mu, 1)
                let g: f64 = gamma.sample(rng);
                z_hat * (g / mu).powf(*inv_alpha)
            }
            AmplitudeSampler::MixtureGamma { cumulative, gammas } => {
                let u: f64 = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                let idx = cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(cumulative.len() - 1);
                gammas[idx].sample(rng)
            }
            AmplitudeSampler::Unfaded => 1.0,
        }
    }
}

/// Draws one fading amplitude. Rebuilds the sampler on every call; use
/// [`AmplitudeSampler`] directly in loops.
pub fn sample_fading_amplitude<R: Rng + ?Sized>(
    model: &FadingModel,
    rng: &mut R,
) -> Result<f64, ChannelError> {
    Ok(AmplitudeSampler::new(model)?.sample(rng))
}

/// Geometry and band of a link.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathGainSpec {
    pub carrier_freq_hz: f64,
    pub bandwidth_hz: f64,
    pub num_subcarriers: usize,
    pub distance_m: f64,
    pub absorption_coeff_per_m: f64,
}

impl PathGainSpec {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |m: String| Err(ChannelError::InvalidSpec(m));
        if self.num_subcarriers == 0 {
            return bad("num_subcarriers must be at least 1".into());
        }
        if !(self.distance_m.is_finite() && self.distance_m > 0.0) {
            return bad(format!(
                "distance_m must be positive, got {}",
                self.distance_m
            ));
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz >= 0.0) {
            return bad(format!(
                "bandwidth_hz must be non-negative, got {}",
                self.bandwidth_hz
            ));
        }
        if !(self.absorption_coeff_per_m.is_finite() && self.absorption_coeff_per_m >= 0.0) {
            return bad(format!(
                "absorption_coeff_per_m must be non-negative, got {}",
                self.absorption_coeff_per_m
            ));
        }
        let lowest = self.subcarrier_freq_unchecked(1);
        if !(self.carrier_freq_hz.is_finite() && lowest > 0.0) {
            return bad(format!(
                "subcarrier frequencies must be positive (lowest is {lowest} Hz)"
            ));
        }
        Ok(())
    }

    fn subcarrier_freq_unchecked(&self, l: usize) -> f64 {
        let count = self.num_subcarriers as f64;
        self.carrier_freq_hz + (l as f64 - (count + 1.0) / 2.0) * self.bandwidth_hz / count
    }

    /// Frequency of subcarrier `l` (1-based), on a grid centred on the carrier.
    pub fn subcarrier_freq(&self, l: usize) -> Result<f64, ChannelError> {
        if l == 0 || l > self.num_subcarriers {
            return Err(ChannelError::SubcarrierOutOfRange {
                index: l,
                count: self.num_subcarriers,
            });
        }
        Ok(self.subcarrier_freq_unchecked(l))
    }
}

/// Amplitude path gain `c / (4 pi f_l d) * exp(-kappa d / 2)` of subcarrier `l` (1-based).
pub fn path_gain(spec: &PathGainSpec, l: usize) -> Result<f64, ChannelError> {
    spec.validate()?;
    let f = spec.subcarrier_freq(l)?;
    let d = spec.distance_m;
    Ok(SPEED_OF_LIGHT / (4.0 * PI * f * d) * (-spec.absorption_coeff_per_m * d / 2.0).exp())
}

/// Per-subcarrier channel of one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    pub gains: Vec<Complex64>,
    pub path_gain: Vec<f64>,
    pub fading_amp: Vec<f64>,
    pub noise_variance: f64,
}

impl ChannelRealization {
    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    /// True if some subcarrier has an exactly zero gain.
    pub fn is_singular(&self) -> bool {
        self.gains.iter().any(|h| h.norm_sqr() == 0.0)
    }
}

fn uniform_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>())
}

/// Draws a channel realization for every subcarrier of `spec`.
pub fn realize_channel<R: Rng + ?Sized>(
    spec: &PathGainSpec,
    model: &FadingModel,
    noise_variance: f64,
    rng: &mut R,
) -> Result<ChannelRealization, ChannelError> {
    spec.validate()?;
    model.validate()?;
    if !(noise_variance.is_finite() && noise_variance > 0.0) {
        return Err(ChannelError::InvalidNoiseVariance(noise_variance));
    }
    let count = spec.num_subcarriers;
    let path: Vec<f64> = (1..=count)
        .map(|l| path_gain(spec, l))
        .collect::<Result<_, _>>()?;

    let fading: Vec<Complex64> = match model {
        FadingModel::SimplifiedMultipath {
            mean_num_nlos_paths,
            los_present,
            per_path_decay_db,
            max_excess_delay_s,
        } => {
            let num_nlos = if *mean_num_nlos_paths > 0.0 {
                let poisson = Poisson::new(*mean_num_nlos_paths)
                    .map_err(|e| ChannelError::InvalidModel(e.to_string()))?;
                let draw: f64 = poisson.sample(rng);
                draw as u32
            } else {
                0
            };
            // (complex gain, delay)
            let mut taps: Vec<(Complex64, f64)> = Vec::with_capacity(num_nlos as usize + 1);
            if *los_present {
                taps.push((uniform_phase(rng), 0.0));
            }
            for k in 1..=num_nlos {
                let std = (tap_power(*per_path_decay_db, k) / 2.0).sqrt();
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let delay = max_excess_delay_s * rng.random::<f64>();
                taps.push((Complex64::new(re * std, im * std), delay));
            }
            (1..=count)
                .map(|l| {
                    let f = spec.subcarrier_freq_unchecked(l);
                    taps.iter()
                        .map(|(g, tau)| g * Complex64::from_polar(1.0, -2.0 * PI * f * tau))
                        .sum()
                })
                .collect()
        }
        FadingModel::Unfaded => vec![Complex64::new(1.0, 0.0); count],
        _ => {
            let sampler = AmplitudeSampler::new(model)?;
            (0..count)
                .map(|_| {
                    let a = sampler.sample(rng);
                    uniform_phase(rng) * a
                })
                .collect()
        }
    };

    let fading_amp: Vec<f64> = fading.iter().map(|f| f.norm()).collect();
    let gains = fading.iter().zip(&path).map(|(f, &p)| f * p).collect();
    Ok(ChannelRealization {
        gains,
        path_gain: path,
        fading_amp,
        noise_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use approx::assert_relative_eq;

    fn spec(f: f64, d: f64, l: usize) -> PathGainSpec {
        PathGainSpec {
            carrier_freq_hz: f,
            bandwidth_hz: 4e9,
            num_subcarriers: l,
            distance_m: d,
            absorption_coeff_per_m: 0.0,
        }
    }

    #[test]
    fn pdf_exponential_special_case() {
        let m = FadingModel::MixtureGamma {
            components: vec![GammaComponent {
                weight: 1.0,
                shape: 1.0,
                rate: 2.0,
            }],
        };
        assert_relative_eq!(fading_pdf(&m, 0.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            fading_pdf(&m, 0.7).unwrap(),
            2.0 * (-1.4f64).exp(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn pdf_rayleigh_special_case() {
        let m = FadingModel::AlphaMu {
            alpha: 2.0,
            mu: 1.0,
            z_hat: 1.0,
        };
        assert_relative_eq!(
            fading_pdf(&m, 1.0).unwrap(),
            2.0 * (-1.0f64).exp(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            fading_pdf(&m, 1.0).unwrap(),
            0.735_758_882_342_884_6,
            max_relative = 1e-12
        );
        assert_eq!(fading_pdf(&m, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn pdf_rejects_unsupported_and_invalid() {
        assert_eq!(
            fading_pdf(&FadingModel::Unfaded, 1.0),
            Err(ChannelError::NoAnalyticPdf("unfaded"))
        );
        let bad = FadingModel::AlphaMu {
            alpha: f64::NAN,
            mu: 1.0,
            z_hat: 1.0,
        };
        assert!(matches!(
            fading_pdf(&bad, 1.0),
            Err(ChannelError::InvalidModel(_))
        ));
        let unnormalised = FadingModel::MixtureGamma {
            components: vec![
                GammaComponent {
                    weight: 0.5,
                    shape: 1.0,
                    rate: 1.0,
                },
                GammaComponent {
                    weight: 0.4,
                    shape: 2.0,
                    rate: 1.0,
                },
            ],
        };
        assert!(unnormalised.validate().is_err());
    }

    #[test]
    fn unfaded_sampler_is_one() {
        let mut rng = seeded(1);
        for _ in 0..100 {
            assert_eq!(
                sample_fading_amplitude(&FadingModel::Unfaded, &mut rng).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn multipath_has_no_scalar_sampler() {
        let m = FadingModel::SimplifiedMultipath {
            mean_num_nlos_paths: 2.0,
            los_present: true,
            per_path_decay_db: 3.0,
            max_excess_delay_s: 1e-9,
        };
        assert!(matches!(
            sample_fading_amplitude(&m, &mut seeded(0)),
            Err(ChannelError::NoScalarSampler(_))
        ));
    }

    #[test]
    fn path_gain_inverse_distance() {
        let near = path_gain(&spec(0.3e12, 0.2, 1), 1).unwrap();
        let far = path_gain(&spec(0.3e12, 2.0, 1), 1).unwrap();
        assert_relative_eq!(near / far, 10.0, max_relative = 1e-14);
    }

    #[test]
    fn path_gain_absorption_and_errors() {
        let mut s = spec(0.3e12, 2.0, 1);
        let free = path_gain(&s, 1).unwrap();
        s.absorption_coeff_per_m = 0.1;
        assert_relative_eq!(
            path_gain(&s, 1).unwrap(),
            free * (-0.1f64).exp(),
            max_relative = 1e-14
        );
        s.distance_m = 0.0;
        assert!(path_gain(&s, 1).is_err());
        let s = spec(1e9, 1.0, 4); // lowest subcarrier falls below 0 Hz
        assert!(path_gain(&s, 1).is_err());
        assert!(path_gain(&spec(1e12, 1.0, 4), 5).is_err());
    }

    #[test]
    fn subcarrier_grid_is_centred() {
        let s = spec(1e12, 1.0, 4);
        let f: Vec<f64> = (1..=4).map(|l| s.subcarrier_freq(l).unwrap()).collect();
        assert_eq!(
            f,
            vec![1e12 - 1.5e9, 1e12 - 0.5e9, 1e12 + 0.5e9, 1e12 + 1.5e9]
        );
    }

    #[test]
    fn unfaded_unit_path_gain() {
        let f = 1e12;
        let s = PathGainSpec {
            carrier_freq_hz: f,
            bandwidth_hz: 0.0,
            num_subcarriers: 4,
            distance_m: SPEED_OF_LIGHT / (4.0 * PI * f),
            absorption_coeff_per_m: 0.0,
        };
        let ch = realize_channel(&s, &FadingModel::Unfaded, 1.0, &mut seeded(3)).unwrap();
        for h in &ch.gains {
            assert_relative_eq!(h.norm(), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn factorization_holds() {
        let m = FadingModel::AlphaMu {
            alpha: 2.5,
            mu: 1.3,
            z_hat: 0.8,
        };
        let s = spec(0.142e12, 10.1, 32);
        let ch = realize_channel(&s, &m, 1e-11, &mut seeded(5)).unwrap();
        for l in 0..32 {
            assert_relative_eq!(
                ch.gains[l].norm(),
                ch.path_gain[l] * ch.fading_amp[l],
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn los_only_multipath_is_flat() {
        let m = FadingModel::SimplifiedMultipath {
            mean_num_nlos_paths: 0.0,
            los_present: true,
            per_path_decay_db: 3.0,
            max_excess_delay_s: 5e-9,
        };
        let s = spec(0.3e12, 2.0, 16);
        let ch = realize_channel(&s, &m, 1.0, &mut seeded(9)).unwrap();
        for l in 0..16 {
            assert_relative_eq!(ch.fading_amp[l], 1.0, max_relative = 1e-12);
            assert_relative_eq!(
                ch.gains[l].norm() / ch.path_gain[l],
                1.0,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn multipath_mean_power_matches_empirical() {
        let m = FadingModel::SimplifiedMultipath {
            mean_num_nlos_paths: 2.0,
            los_present: true,
            per_path_decay_db: 3.0,
            max_excess_delay_s: 5e-9,
        };
        let s = PathGainSpec {
            bandwidth_hz: 4e9,
            ..spec(0.3e12, 2.0, 8)
        };
        let mut rng = seeded(21);
        let mut acc = 0.0;
        let trials = 20_000;
        for _ in 0..trials {
            let ch = realize_channel(&s, &m, 1.0, &mut rng).unwrap();
            acc += ch.fading_amp.iter().map(|a| a * a).sum::<f64>() / 8.0;
        }
        let empirical = acc / trials as f64;
        assert_relative_eq!(empirical, m.mean_power().unwrap(), max_relative = 0.03);
    }

    #[test]
    fn same_seed_same_channel() {
        let m = FadingModel::MixtureGamma {
            components: vec![
                GammaComponent {
                    weight: 0.3,
                    shape: 2.0,
                    rate: 3.0,
                },
                GammaComponent {
                    weight: 0.7,
                    shape: 4.0,
                    rate: 5.0,
                },
            ],
        };
        let s = spec(0.142e12, 64.0, 16);
        let a = realize_channel(&s, &m, 1.0, &mut seeded(4)).unwrap();
        let b = realize_channel(&s, &m, 1.0, &mut seeded(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn serde_tagging() {
        let m: FadingModel =
            serde_json::from_str(r#"{"model":"alpha_mu","alpha":2.0,"mu":1.0,"z_hat":1.0}"#)
                .unwrap();
        assert_eq!(
            m,
            FadingModel::AlphaMu {
                alpha: 2.0,
                mu: 1.0,
                z_hat: 1.0
            }
        );
        let u: FadingModel = serde_json::from_str(r#"{"model":"unfaded"}"#).unwrap();
        assert_eq!(u, FadingModel::Unfaded);
        assert!(serde_json::from_str::<FadingModel>(
            r#"{"model":"alpha_mu","alpha":2.0,"mu":1.0,"z_hat":1.0,"zz":1}"#
        )
        .is_err());
    }
}
