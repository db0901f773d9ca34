//! Successive-cancellation decoding with min-sum updates.

use super::{check_len, f_minsum, g_update, DecodeError, DecodeOutcome, DecodeStatus};
use crate::detect::ReliabilityVector;
use crate::polar::PolarCode;

/// Decodes one codeword; positive LLR favours 0 and a zero LLR decides 0.
pub fn sc_decode(rel: &ReliabilityVector, code: &PolarCode) -> Result<DecodeOutcome, DecodeError> {
    check_len(rel, code.n())?;
    let llr = rel.signed_llrs();
    let (u, x, _) = sc_core(&llr, code.frozen_mask());
    let info: Vec<u8> = code.info_positions().iter().map(|&p| u[p]).collect();
    let status = if code.crc().check(&info) {
        DecodeStatus::Decoded
    } else {
        DecodeStatus::CrcFailAllPaths
    };
    Ok(DecodeOutcome {
        info_bits: info[..code.payload_len()].to_vec(),
        codeword: x,
        queries: 0,
        list_rank: 0,
        status,
    })
}

/// Returns `(u_hat, x_hat, leaf LLRs)`.
pub(crate) fn sc_core(llr: &[f64], frozen: &[bool]) -> (Vec<u8>, Vec<u8>, Vec<f64>) {
    let n = llr.len();
    let mut u = vec![0u8; n];
    let mut x = vec![0u8; n];
    let mut leaves = vec![0.0; n];
    node(llr, frozen, &mut u, &mut x, &mut leaves);
    (u, x, leaves)
}

fn node(llr: &[f64], frozen: &[bool], u: &mut [u8], x: &mut [u8], leaves: &mut [f64]) {
    let n = llr.len();
    if n == 1 {
        leaves[0] = llr[0];
        u[0] = if frozen[0] { 0 } else { u8::from(llr[0] < 0.0) };
        x[0] = u[0];
        return;
    }
    let half = n / 2;
    let (top, bottom) = llr.split_at(half);
    let left: Vec<f64> = top
        .iter()
        .zip(bottom)
        .map(|(&a, &b)| f_minsum(a, b))
        .collect();
    let (u_l, u_r) = u.split_at_mut(half);
    let (lv_l, lv_r) = leaves.split_at_mut(half);
    let mut x_left = vec![0u8; half];
    node(&left, &frozen[..half], u_l, &mut x_left, lv_l);
    let right: Vec<f64> = top
        .iter()
        .zip(bottom)
        .zip(&x_left)
        .map(|((&a, &b), &s)| g_update(a, b, s))
        .collect();
    let mut x_right = vec![0u8; half];
    node(&right, &frozen[half..], u_r, &mut x_right, lv_r);
    for i in 0..half {
        x[i] = x_left[i] ^ x_right[i];
        x[half + i] = x_right[i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{polar_transform, Crc};
    use crate::rng::seeded;
    use rand::Rng;
    use rand_distr::StandardNormal;

    // Max-log marginal of u_i given the decided prefix, by enumerating every
    // completion u_{i..n} and scoring its codeword against the channel LLRs.
    // SC ignores the frozen status of later bits, so completions are free.
    fn oracle_sc(llr: &[f64], frozen: &[bool]) -> (Vec<u8>, Vec<f64>) {
        let n = llr.len();
        let mut decided: Vec<u8> = Vec::with_capacity(n);
        let mut leaf = Vec::with_capacity(n);
        for i in 0..n {
            let free = n - i;
            let mut best = [f64::NEG_INFINITY; 2];
            for tail in 0..(1u32 << free) {
                let mut u = decided.clone();
                u.extend((0..free).map(|b| ((tail >> b) & 1) as u8));
                let mut x = u.clone();
                polar_transform(&mut x);
                let metric: f64 = x
                    .iter()
                    .zip(llr)
                    .map(|(&b, &l)| if b == 0 { l } else { -l })
                    .sum::<f64>()
                    / 2.0;
                let ui = u[i] as usize;
                best[ui] = best[ui].max(metric);
            }
            let l = best[0] - best[1];
            leaf.push(l);
            decided.push(if frozen[i] { 0 } else { u8::from(l < 0.0) });
        }
        (decided, leaf)
    }

    #[test]
    fn matches_exhaustive_oracle_n8() {
        let code = PolarCode::construct(8, 4, Crc::NONE).unwrap();
        let mut rng = seeded(31);
        for _ in 0..500 {
            let llr: Vec<f64> = (0..8)
                .map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0)
                .collect();
            let (u, _, leaves) = sc_core(&llr, code.frozen_mask());
            let (u_ref, leaves_ref) = oracle_sc(&llr, code.frozen_mask());
            assert_eq!(u, u_ref);
            for (a, b) in leaves.iter().zip(&leaves_ref) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn noiseless_input_recovers_codeword() {
        let code = PolarCode::construct(64, 57, Crc::NR11).unwrap();
        let mut rng = seeded(32);
        for _ in 0..100 {
            let p: Vec<u8> = (0..46).map(|_| rng.random_range(0..2)).collect();
            let x = code.encode_payload(&p).unwrap();
            let llr: Vec<f64> = x
                .iter()
                .map(|&b| if b == 0 { 20.0 } else { -20.0 })
                .collect();
            let out = sc_decode(&ReliabilityVector::from_llrs(&llr).unwrap(), &code).unwrap();
            assert_eq!(out.codeword, x);
            assert_eq!(out.info_bits, p);
            assert_eq!(out.status, DecodeStatus::Decoded);
        }
    }

    #[test]
    fn all_frozen_code_outputs_zero() {
        let code = PolarCode::construct(16, 0, Crc::NONE).unwrap();
        let mut rng = seeded(33);
        let llr: Vec<f64> = (0..16).map(|_| rng.sample(StandardNormal)).collect();
        let out = sc_decode(&ReliabilityVector::from_llrs(&llr).unwrap(), &code).unwrap();
        assert_eq!(out.codeword, vec![0; 16]);
        assert!(out.info_bits.is_empty());
    }

    #[test]
    fn length_mismatch() {
        let code = PolarCode::construct(16, 12, Crc::TEST4).unwrap();
        assert!(sc_decode(&ReliabilityVector::hard(vec![0; 8]), &code).is_err());
    }
}
