//! Bit-serial CRC over GF(2), most significant bit first.

use serde::{Deserialize, Serialize};

/// Generator polynomial `D^degree + poly(D)`; `poly` holds the lower terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crc {
    degree: u32,
    poly: u64,
}

impl Crc {
    /// NR CRC11: `D^11 + D^10 + D^9 + D^5 + 1`.
    pub const NR11: Crc = Crc {
        degree: 11,
        poly: 0x621,
    };

    /// No CRC at all.
    pub const NONE: Crc = Crc { degree: 0, poly: 0 };

    /// `D^4 + D + 1`, small enough for exhaustive codebook tests.
    pub const TEST4: Crc = Crc {
        degree: 4,
        poly: 0x3,
    };

    pub fn new(degree: u32, poly: u64) -> Option<Self> {
        if degree > 63 || (degree > 0 && poly >> degree != 0) || (degree > 0 && poly & 1 == 0) {
            return None;
        }
        Some(Self { degree, poly })
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn name(&self) -> String {
        match *self {
            Crc::NR11 => "nr11".into(),
            Crc::NONE => "none".into(),
            c => format!("crc{}_{:#x}", c.degree, c.poly),
        }
    }

    /// Remainder of `bits(D) * D^degree` modulo the generator.
    pub fn remainder(&self, bits: &[u8]) -> u64 {
        if self.degree == 0 {
            return 0;
        }
        let top = self.degree - 1;
        let mask = (1u64 << self.degree) - 1;
        let mut reg = 0u64;
        for &b in bits {
            let feedback = ((reg >> top) & 1) ^ (b & 1) as u64;
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// Remainder bits, most significant first.
    pub fn parity_bits(&self, bits: &[u8]) -> Vec<u8> {
        let r = self.remainder(bits);
        (0..self.degree)
            .rev()
            .map(|i| ((r >> i) & 1) as u8)
            .collect()
    }

    pub fn attach(&self, info: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(info.len() + self.degree());
        out.extend_from_slice(info);
        out.extend(self.parity_bits(info));
        out
    }

    /// True iff the word (payload followed by parity) divides evenly.
    pub fn check(&self, word: &[u8]) -> bool {
        self.remainder(word) == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    // Schoolbook polynomial long division over GF(2).
    fn long_division(message: &[u8], generator: &[u8]) -> Vec<u8> {
        let deg = generator.len() - 1;
        let mut dividend: Vec<u8> = message.to_vec();
        dividend.extend(std::iter::repeat_n(0, deg));
        for i in 0..message.len() {
            if dividend[i] == 1 {
                for (j, &g) in generator.iter().enumerate() {
                    dividend[i + j] ^= g;
                }
            }
        }
        dividend[message.len()..].to_vec()
    }

    const NR11_COEFFS: [u8; 12] = [1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1];

    #[test]
    fn single_one_message() {
        assert_eq!(
            Crc::NR11.parity_bits(&[1]),
            vec![1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]
        );
        assert_eq!(
            long_division(&[1], &NR11_COEFFS),
            vec![1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]
        );
    }

    #[test]
    fn zero_message_zero_crc() {
        assert_eq!(Crc::NR11.parity_bits(&[0; 40]), vec![0; 11]);
    }

    #[test]
    fn matches_long_division() {
        let mut rng = seeded(12);
        for _ in 0..500 {
            let len = rng.random_range(1..80);
            let m: Vec<u8> = (0..len).map(|_| rng.random_range(0..2)).collect();
            assert_eq!(Crc::NR11.parity_bits(&m), long_division(&m, &NR11_COEFFS));
            assert_eq!(
                Crc::TEST4.parity_bits(&m),
                long_division(&m, &[1, 0, 0, 1, 1])
            );
        }
    }

    #[test]
    fn attach_then_check() {
        let mut rng = seeded(13);
        for _ in 0..10_000 {
            let len = rng.random_range(0..64);
            let m: Vec<u8> = (0..len).map(|_| rng.random_range(0..2)).collect();
            let w = Crc::NR11.attach(&m);
            assert!(Crc::NR11.check(&w));
        }
    }

    #[test]
    fn detects_single_flips() {
        let m = vec![1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1];
        let w = Crc::NR11.attach(&m);
        for i in 0..w.len() {
            let mut e = w.clone();
            e[i] ^= 1;
            assert!(!Crc::NR11.check(&e));
        }
    }

    #[test]
    fn rejects_malformed_polynomials() {
        assert!(Crc::new(4, 0x10).is_none());
        assert!(Crc::new(4, 0x2).is_none());
        assert_eq!(Crc::new(11, 0x621), Some(Crc::NR11));
    }
}
