//! Fast smoke checks run by `thzlink selftest`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::chanmodel::FadingModel;
use crate::decoders::{
    grand_decode, sc_decode, scl_decode, DecoderConfig, DecoderKind, PatternOrder,
};
use crate::detect::{effective_noise_variance_zf, llr_ml, llr_zf, zf_equalize, ReliabilityVector};
use crate::harness::{noise_power, run_sweep, CodeConfig, SimConfig};
use crate::link::compute_parallelism;
use crate::modem::Modulation;
use crate::polar::{polar_transform, Crc, PolarCode};
use crate::rng::seeded;

pub struct Check {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn noise_floor() -> Result<(), String> {
    let p = noise_power(300.0, 4e9).map_err(|e| e.to_string())?;
    ensure((p - 1.6568e-11).abs() <= 1e-15, || format!("got {p:e} W"))
}

fn parallelism() -> Result<(), String> {
    for (l, q, n, v) in [(64, 1, 64, 1), (128, 1, 64, 2), (64, 2, 128, 1)] {
        let got = compute_parallelism(l, q, n).map_err(|e| e.to_string())?;
        ensure(got == v, || format!("L={l} q={q} N={n}: V={got}"))?;
    }
    ensure(compute_parallelism(100, 1, 64).is_err(), || {
        "L=100 accepted".into()
    })
}

fn polar_basics() -> Result<(), String> {
    let mut u = vec![0, 0, 1, 1];
    polar_transform(&mut u);
    ensure(u == [0, 1, 0, 1], || format!("transform gave {u:?}"))?;
    let code = PolarCode::construct(8, 4, Crc::NONE).map_err(|e| e.to_string())?;
    ensure(code.frozen_mask_hex() == "e8", || code.frozen_mask_hex())
}

fn llr_consistency() -> Result<(), String> {
    let mut rng = seeded(11);
    for m in [Modulation::Bpsk, Modulation::Qpsk] {
        let c = m.constellation();
        for _ in 0..1000 {
            let h = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let y = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * 2.0;
            let s2 = 0.05 + rng.random::<f64>() * 2.0;
            let a = llr_ml(y, h, s2, &c);
            let yz = zf_equalize(y, h).map_err(|e| e.to_string())?;
            let b = llr_zf(
                yz,
                effective_noise_variance_zf(h, s2).map_err(|e| e.to_string())?,
                &c,
            );
            for (x, z) in a.iter().zip(&b) {
                ensure((x - z).abs() <= 1e-9 * x.abs().max(1.0), || {
                    format!("{x} vs {z}")
                })?;
            }
        }
    }
    Ok(())
}

fn list_one_is_sc() -> Result<(), String> {
    let code = PolarCode::construct(64, 57, Crc::NR11).map_err(|e| e.to_string())?;
    let mut rng = seeded(12);
    for _ in 0..200 {
        let llr: Vec<f64> = (0..64)
            .map(|_| 1.0 + 1.5 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let rel = ReliabilityVector::from_llrs(&llr).map_err(|e| e.to_string())?;
        let a = sc_decode(&rel, &code).map_err(|e| e.to_string())?;
        let b = scl_decode(&rel, &code, 1).map_err(|e| e.to_string())?;
        ensure(a == b, || "SCL(1) differs from SC".into())?;
    }
    Ok(())
}

fn grand_min_distance() -> Result<(), String> {
    let code = PolarCode::construct(16, 12, Crc::TEST4).map_err(|e| e.to_string())?;
    let k = code.payload_len();
    let book: Vec<Vec<u8>> = (0..1u32 << k)
        .map(|m| code.encode_payload(&(0..k).map(|i| ((m >> i) & 1) as u8).collect::<Vec<_>>()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let dist = |a: &[u8], b: &[u8]| a.iter().zip(b).filter(|(x, y)| x != y).count();
    let mut rng = seeded(13);
    for _ in 0..300 {
        let tx = &book[rng.random_range(0..book.len())];
        let rx: Vec<u8> = tx
            .iter()
            .map(|&b| b ^ u8::from(rng.random::<f64>() < 0.05))
            .collect();
        let out = grand_decode(
            &ReliabilityVector::hard(rx.clone()),
            &code,
            PatternOrder::HammingWeight,
            1 << 16,
        )
        .map_err(|e| e.to_string())?;
        let best = book.iter().map(|c| dist(c, &rx)).min().unwrap_or(0);
        ensure(dist(&out.codeword, &rx) == best, || {
            "GRAND missed the closest codeword".into()
        })?;
    }
    Ok(())
}

fn awgn_ber() -> Result<(), String> {
    let mut cfg = SimConfig::indoor_alpha_mu();
    cfg.channel.fading = FadingModel::Unfaded;
    cfg.code = CodeConfig::Uncoded { n: 64 };
    cfg.decoder = DecoderConfig::new(DecoderKind::Uncoded);
    cfg.snr_grid_db = vec![6.8];
    cfg.max_frames = 4000;
    cfg.min_block_errors = u64::MAX;
    let p = run_sweep(&cfg).map_err(|e| e.to_string())?;
    // 256k bits: about 256 errors expected, so allow a wide margin
    ensure((p[0].ber / 1.0e-3 - 1.0).abs() < 0.25, || {
        format!("BER {}", p[0].ber)
    })
}

fn determinism() -> Result<(), String> {
    let mut cfg = SimConfig::indoor_alpha_mu();
    cfg.decoder = DecoderConfig::new(DecoderKind::Orbgrand);
    cfg.decoder.budget = 1000;
    cfg.snr_grid_db = vec![5.0, 10.0];
    cfg.max_frames = 100;
    cfg.lanes = 1;
    let a = run_sweep(&cfg).map_err(|e| e.to_string())?;
    cfg.lanes = 4;
    let b = run_sweep(&cfg).map_err(|e| e.to_string())?;
    ensure(a == b, || "results depend on thread count".into())
}

type CheckFn = fn() -> Result<(), String>;

/// Runs every check; never panics.
pub fn run_all() -> Vec<Check> {
    let checks: [(&'static str, CheckFn); 8] = [
        ("noise power at 300 K, 4 GHz", noise_floor),
        ("parallelism factor", parallelism),
        ("polar transform and construction", polar_basics),
        ("ZF and ML LLRs agree", llr_consistency),
        ("SCL(1) equals SC", list_one_is_sc),
        ("hard GRAND is minimum distance", grand_min_distance),
        ("uncoded BPSK BER at 6.8 dB", awgn_ber),
        ("lane-count independence", determinism),
    ];
    checks
        .into_iter()
        .map(|(name, f)| Check { name, outcome: f() })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_pass() {
        for c in super::run_all() {
            assert!(c.outcome.is_ok(), "{}: {:?}", c.name, c.outcome);
        }
    }
}
