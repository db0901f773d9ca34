//! Guessing random additive noise decoding.
//!
//! Each query flips the positions of one noise-effect pattern in the hard
//! word and tests codebook membership. Membership uses the code's parity
//! map: the syndrome of the hard word is computed once, and each query XORs
//! in the columns of the flipped positions.

use super::patterns::{make_pattern_generator, PatternOrder};
use super::{check_len, DecodeError, DecodeOutcome, DecodeStatus};
use crate::detect::ReliabilityVector;
use crate::polar::PolarCode;

pub fn grand_decode(
    rel: &ReliabilityVector,
    code: &PolarCode,
    order: PatternOrder,
    budget: u64,
) -> Result<DecodeOutcome, DecodeError> {
    if budget == 0 {
        return Err(DecodeError::BadBudget);
    }
    check_len(rel, code.n())?;
    let hard = rel.hard_bits();
    let parity = code.parity_map();
    let words = parity.words();
    let mut base = vec![0u64; words];
    parity.syndrome_into(hard, &mut base);
    let mut acc = vec![0u64; words];

    let mut gen = make_pattern_generator(rel, order, budget);
    while gen.advance().is_some() {
        acc.copy_from_slice(&base);
        for pos in gen.positions() {
            for (a, c) in acc.iter_mut().zip(parity.column(pos)) {
                *a ^= c;
            }
        }
        if acc.iter().all(|&w| w == 0) {
            let mut codeword = hard.to_vec();
            for pos in gen.positions() {
                codeword[pos] ^= 1;
            }
            return Ok(DecodeOutcome {
                info_bits: code.extract_payload(&codeword),
                codeword,
                queries: gen.emitted(),
                list_rank: 0,
                status: DecodeStatus::Decoded,
            });
        }
    }
    Ok(DecodeOutcome {
        info_bits: code.extract_payload(hard),
        codeword: hard.to_vec(),
        queries: gen.emitted(),
        list_rank: 0,
        status: DecodeStatus::AbandonedAtBudget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::{build_reliability, Regime, ReliabilityInput};
    use crate::polar::Crc;
    use crate::rng::seeded;
    use rand::Rng;

    fn all_codewords(code: &PolarCode) -> Vec<Vec<u8>> {
        let k = code.payload_len();
        (0..1u32 << k)
            .map(|m| {
                let p: Vec<u8> = (0..k).map(|i| ((m >> i) & 1) as u8).collect();
                code.encode_payload(&p).unwrap()
            })
            .collect()
    }

    fn distance(a: &[u8], b: &[u8]) -> usize {
        a.iter().zip(b).filter(|(x, y)| x != y).count()
    }

    #[test]
    fn codeword_input_needs_one_query() {
        let code = PolarCode::construct(64, 57, Crc::NR11).unwrap();
        let mut rng = seeded(51);
        let p: Vec<u8> = (0..46).map(|_| rng.random_range(0..2)).collect();
        let x = code.encode_payload(&p).unwrap();
        for order in [PatternOrder::HammingWeight, PatternOrder::LogisticWeight] {
            let out = grand_decode(&ReliabilityVector::hard(x.clone()), &code, order, 100).unwrap();
            assert_eq!(out.queries, 1);
            assert_eq!(out.codeword, x);
            assert_eq!(out.info_bits, p);
        }
    }

    #[test]
    fn hard_grand_is_minimum_distance() {
        let code = PolarCode::construct(16, 12, Crc::TEST4).unwrap();
        let book = all_codewords(&code);
        let mut rng = seeded(52);
        for _ in 0..2000 {
            let tx = &book[rng.random_range(0..book.len())];
            let rx: Vec<u8> = tx
                .iter()
                .map(|&b| b ^ u8::from(rng.random::<f64>() < 0.1))
                .collect();
            let out = grand_decode(
                &ReliabilityVector::hard(rx.clone()),
                &code,
                PatternOrder::HammingWeight,
                1 << 16,
            )
            .unwrap();
            assert_eq!(out.status, DecodeStatus::Decoded);
            assert!(code.is_codeword(&out.codeword));
            let best = book.iter().map(|c| distance(c, &rx)).min().unwrap();
            assert_eq!(distance(&out.codeword, &rx), best);
        }
    }

    #[test]
    fn abandons_at_budget() {
        let code = PolarCode::construct(64, 57, Crc::NR11).unwrap();
        let mut word = vec![0u8; 64];
        word[0] = 1;
        word[5] = 1;
        word[9] = 1;
        word[40] = 1;
        let out = grand_decode(
            &ReliabilityVector::hard(word.clone()),
            &code,
            PatternOrder::HammingWeight,
            10,
        )
        .unwrap();
        assert_eq!(out.status, DecodeStatus::AbandonedAtBudget);
        assert_eq!(out.queries, 10);
        assert_eq!(out.codeword, word);
        assert_eq!(
            grand_decode(
                &ReliabilityVector::hard(word),
                &code,
                PatternOrder::HammingWeight,
                0
            ),
            Err(DecodeError::BadBudget)
        );
    }

    #[test]
    fn equal_psi_degenerates_to_index_order() {
        let code = PolarCode::construct(8, 6, Crc::NONE).unwrap();
        let mut rng = seeded(53);
        for _ in 0..100 {
            let bits: Vec<u8> = (0..8).map(|_| rng.random_range(0..2)).collect();
            let psi = build_reliability(
                Regime::Psi,
                bits.clone(),
                ReliabilityInput::Psi {
                    per_symbol: &[2.5; 8],
                    bits_per_symbol: 1,
                },
            )
            .unwrap();
            let hard = ReliabilityVector::hard(bits);
            for order in [PatternOrder::HammingWeight, PatternOrder::LogisticWeight] {
                let a: Vec<Vec<usize>> = make_pattern_generator(&psi, order, 256).collect();
                let b: Vec<Vec<usize>> = make_pattern_generator(&hard, order, 256).collect();
                assert_eq!(a, b);
                assert_eq!(
                    grand_decode(&psi, &code, order, 256).unwrap(),
                    grand_decode(&hard, &code, order, 256).unwrap()
                );
            }
        }
    }

    #[test]
    fn psi_flips_weak_subcarriers_first() {
        // one bit error sits on the weakest symbol: ORBGRAND finds it on query 2
        let code = PolarCode::construct(64, 57, Crc::NR11).unwrap();
        let p = vec![1u8; 46];
        let x = code.encode_payload(&p).unwrap();
        let mut rx = x.clone();
        rx[37] ^= 1;
        let mut psi = vec![10.0; 64];
        psi[37] = 0.5;
        let rel = build_reliability(
            Regime::Psi,
            rx,
            ReliabilityInput::Psi {
                per_symbol: &psi,
                bits_per_symbol: 1,
            },
        )
        .unwrap();
        let out = grand_decode(&rel, &code, PatternOrder::LogisticWeight, 1000).unwrap();
        assert_eq!(out.codeword, x);
        assert_eq!(out.queries, 2);
    }
}
