//! CRC-aided polar codes in natural (non bit-reversed) order.
//!
//! A codeword is `x = u F^{(x)n}` over GF(2) with `F = [[1, 0], [1, 1]]`. The
//! `K` non-frozen positions of `u` carry the payload followed by its CRC, in
//! ascending index order; frozen positions are zero. `K` counts the CRC bits.

mod crc;

pub use crc::Crc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolarError {
    #[error("block length {0} is not a power of two >= 2")]
    BadLength(usize),
    #[error("K = {k} is invalid for N = {n} with a degree-{crc} CRC")]
    BadDimension { n: usize, k: usize, crc: usize },
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Polarization weight of index `i` with `beta = 2^(1/4)`.
pub fn polarization_weight(i: usize) -> f64 {
    let beta = 2f64.powf(0.25);
    (0..usize::BITS)
        .filter(|&j| (i >> j) & 1 == 1)
        .map(|j| beta.powi(j as i32))
        .sum()
}

/// Indices `0..n` sorted from least to most reliable.
pub fn reliability_order(n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let weights: Vec<f64> = order.iter().map(|&i| polarization_weight(i)).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    order
}

/// In-place `x <- x F^{(x)n}`. The transform is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                bits[i] ^= bits[i + half];
            }
        }
        half *= 2;
    }
}

/// Linear map from a received word to its parity syndrome (frozen values
/// followed by the CRC remainder of the non-frozen part). A word is a
/// codeword iff its syndrome is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityMap {
    words: usize,
    // column j occupies columns[j * words..(j + 1) * words]
    columns: Vec<u64>,
}

impl ParityMap {
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[u64] {
        &self.columns[j * self.words..(j + 1) * self.words]
    }

    /// Syndrome of `word` written into `out` (length [`Self::words`]).
    pub fn syndrome_into(&self, word: &[u8], out: &mut [u64]) {
        out.fill(0);
        for (j, &b) in word.iter().enumerate() {
            if b & 1 == 1 {
                for (o, c) in out.iter_mut().zip(self.column(j)) {
                    *o ^= c;
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarCode {
    n: usize,
    k: usize,
    crc: Crc,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
    reliability_order: Vec<usize>,
    parity: ParityMap,
}

impl PolarCode {
    /// Freezes the `N - K` least reliable positions under the
    /// polarization-weight order.
    pub fn construct(n: usize, k: usize, crc: Crc) -> Result<Self, PolarError> {
        if n < 2 || !n.is_power_of_two() {
            return Err(PolarError::BadLength(n));
        }
        let deg = crc.degree();
        if k > n || (deg > 0 && k <= deg) {
            return Err(PolarError::BadDimension { n, k, crc: deg });
        }
        let order = reliability_order(n);
        let mut frozen = vec![false; n];
        for &i in &order[..n - k] {
            frozen[i] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&i| !frozen[i]).collect();
        let parity = build_parity_map(n, &frozen, &info_positions, crc);
        Ok(Self {
            n,
            k,
            crc,
            frozen,
            info_positions,
            reliability_order: order,
            parity,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Non-frozen positions, CRC included.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn crc(&self) -> Crc {
        self.crc
    }

    /// Information bits per codeword, `K - crc degree`.
    pub fn payload_len(&self) -> usize {
        self.k - self.crc.degree()
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn reliability_order(&self) -> &[usize] {
        &self.reliability_order
    }

    pub fn parity_map(&self) -> &ParityMap {
        &self.parity
    }

    /// Frozen mask as hex: position 0 is the most significant bit of the
    /// first digit; the last digit is zero-padded on the right.
    pub fn frozen_mask_hex(&self) -> String {
        self.frozen
            .chunks(4)
            .map(|nib| {
                let v = nib
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &f)| acc | (u32::from(f) << (3 - i)));
                char::from_digit(v, 16).expect("nibble")
            })
            .collect()
    }

    /// Encodes `K` bits (payload and CRC) into an `N`-bit codeword.
    pub fn encode(&self, info_with_crc: &[u8]) -> Result<Vec<u8>, PolarError> {
        if info_with_crc.len() != self.k {
            return Err(PolarError::LengthMismatch {
                expected: self.k,
                got: info_with_crc.len(),
            });
        }
        let mut u = vec![0u8; self.n];
        for (&pos, &b) in self.info_positions.iter().zip(info_with_crc) {
            u[pos] = b & 1;
        }
        polar_transform(&mut u);
        Ok(u)
    }

    /// Attaches the CRC to `payload` and encodes.
    pub fn encode_payload(&self, payload: &[u8]) -> Result<Vec<u8>, PolarError> {
        if payload.len() != self.payload_len() {
            return Err(PolarError::LengthMismatch {
                expected: self.payload_len(),
                got: payload.len(),
            });
        }
        self.encode(&self.crc.attach(payload))
    }

    /// Non-frozen bits (payload then CRC) of the message behind `word`.
    pub fn unencode(&self, word: &[u8]) -> Vec<u8> {
        let mut u = word.to_vec();
        polar_transform(&mut u);
        self.info_positions.iter().map(|&p| u[p]).collect()
    }

    /// Payload bits carried by `word` (CRC stripped).
    pub fn extract_payload(&self, word: &[u8]) -> Vec<u8> {
        let mut info = self.unencode(word);
        info.truncate(self.payload_len());
        info
    }

    /// Codebook membership: frozen positions of `x F` are zero and the
    /// non-frozen part passes the CRC.
    pub fn is_codeword(&self, x: &[u8]) -> bool {
        if x.len() != self.n {
            return false;
        }
        let mut u = x.to_vec();
        polar_transform(&mut u);
        if self.frozen.iter().zip(&u).any(|(&f, &b)| f && b != 0) {
            return false;
        }
        let info: Vec<u8> = self.info_positions.iter().map(|&p| u[p]).collect();
        self.crc.check(&info)
    }
}

fn build_parity_map(n: usize, frozen: &[bool], info: &[usize], crc: Crc) -> ParityMap {
    let frozen_positions: Vec<usize> = (0..n).filter(|&i| frozen[i]).collect();
    let rows = frozen_positions.len() + crc.degree();
    let words = rows.div_ceil(64).max(1);
    let mut columns = vec![0u64; n * words];
    let mut unit = vec![0u8; n];
    for j in 0..n {
        unit.fill(0);
        unit[j] = 1;
        polar_transform(&mut unit);
        let col = &mut columns[j * words..(j + 1) * words];
        for (r, &p) in frozen_positions.iter().enumerate() {
            if unit[p] == 1 {
                col[r / 64] |= 1 << (r % 64);
            }
        }
        let info_bits: Vec<u8> = info.iter().map(|&p| unit[p]).collect();
        let rem = crc.remainder(&info_bits);
        for b in 0..crc.degree() {
            if (rem >> b) & 1 == 1 {
                let r = frozen_positions.len() + b;
                col[r / 64] |= 1 << (r % 64);
            }
        }
    }
    ParityMap { words, columns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    // Dense generator matrix F^{(x)n} built from Kronecker products.
    fn kron_generator(n: usize) -> Vec<Vec<u8>> {
        let mut g = vec![vec![1u8]];
        while g.len() < n {
            let m = g.len();
            let mut next = vec![vec![0u8; 2 * m]; 2 * m];
            for i in 0..m {
                for j in 0..m {
                    next[i][j] = g[i][j];
                    next[m + i][j] = g[i][j];
                    next[m + i][m + j] = g[i][j];
                }
            }
            g = next;
        }
        g
    }

    fn mul(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
        (0..u.len())
            .map(|j| (0..u.len()).fold(0u8, |acc, i| acc ^ (u[i] & g[i][j])))
            .collect()
    }

    #[test]
    fn transform_matches_kronecker_product() {
        assert_eq!(mul(&[0, 0, 1, 1], &kron_generator(4)), vec![0, 1, 0, 1]);
        let mut u = vec![0, 0, 1, 1];
        polar_transform(&mut u);
        assert_eq!(u, vec![0, 1, 0, 1]);
        let mut rng = seeded(1);
        for n in [2, 8, 32, 128] {
            let g = kron_generator(n);
            for _ in 0..50 {
                let u: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
                let mut x = u.clone();
                polar_transform(&mut x);
                assert_eq!(x, mul(&u, &g));
            }
        }
    }

    #[test]
    fn transform_is_involution() {
        let mut rng = seeded(2);
        for n in [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024] {
            for _ in 0..1000 {
                let w: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
                let mut x = w.clone();
                polar_transform(&mut x);
                polar_transform(&mut x);
                assert_eq!(x, w);
            }
        }
    }

    #[test]
    fn construction_examples() {
        let c = PolarCode::construct(2, 1, Crc::NONE).unwrap();
        assert_eq!(c.frozen_mask(), &[true, false]);
        let c = PolarCode::construct(4, 4, Crc::NONE).unwrap();
        assert!(c.frozen_mask().iter().all(|f| !f));
        let c = PolarCode::construct(64, 57, Crc::NR11).unwrap();
        assert_eq!(c.frozen_mask().iter().filter(|&&f| f).count(), 7);
        assert_eq!(c.payload_len(), 46);
        assert!(PolarCode::construct(48, 20, Crc::NR11).is_err());
        assert!(PolarCode::construct(64, 11, Crc::NR11).is_err());
        assert!(PolarCode::construct(64, 65, Crc::NONE).is_err());
    }

    #[test]
    fn weights_hand_computed() {
        let b = 2f64.powf(0.25);
        assert_eq!(polarization_weight(0), 0.0);
        assert_eq!(polarization_weight(1), 1.0);
        assert!((polarization_weight(2) - b).abs() < 1e-15);
        assert!((polarization_weight(3) - (1.0 + b)).abs() < 1e-15);
        assert!((polarization_weight(4) - b * b).abs() < 1e-15);
        // 0 < 1 < 2 < 4 < 3 for N = 8 prefix: w(4) = 1.414 < w(3) = 2.189
        assert_eq!(&reliability_order(8)[..5], &[0, 1, 2, 4, 3]);
    }

    #[test]
    fn frozen_set_is_least_reliable_prefix() {
        let c = PolarCode::construct(128, 116, Crc::NR11).unwrap();
        let mut expected = [false; 128];
        for &i in &c.reliability_order()[..12] {
            expected[i] = true;
        }
        assert_eq!(c.frozen_mask(), &expected[..]);
        // deterministic
        assert_eq!(c, PolarCode::construct(128, 116, Crc::NR11).unwrap());
    }

    #[test]
    fn hex_mask() {
        let c = PolarCode::construct(2, 1, Crc::NONE).unwrap();
        assert_eq!(c.frozen_mask_hex(), "8");
        let c = PolarCode::construct(8, 4, Crc::NONE).unwrap();
        // frozen {0, 1, 2, 4}: 1110 1000
        assert_eq!(c.frozen_mask_hex(), "e8");
    }

    #[test]
    fn encoder_basics() {
        let code = PolarCode::construct(64, 57, Crc::NR11).unwrap();
        assert_eq!(code.encode(&[0; 57]).unwrap(), vec![0; 64]);
        assert!(code.is_codeword(&[0; 64]));
        assert!(code.encode(&[0; 56]).is_err());
        let mut rng = seeded(3);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..1000 {
            let p: Vec<u8> = (0..46).map(|_| rng.random_range(0..2)).collect();
            let x = code.encode_payload(&p).unwrap();
            assert!(code.is_codeword(&x));
            assert_eq!(code.extract_payload(&x), p);
            seen.insert((p, x));
        }
        let distinct_cw: std::collections::HashSet<_> =
            seen.iter().map(|(_, x)| x.clone()).collect();
        let distinct_msg: std::collections::HashSet<_> =
            seen.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(distinct_cw.len(), distinct_msg.len());
    }

    #[test]
    fn membership_exhaustive_small_code() {
        // N = 16, K = 12 with a 4-bit CRC: 2^8 codewords
        let code = PolarCode::construct(16, 12, Crc::TEST4).unwrap();
        let images: std::collections::HashSet<Vec<u8>> = (0..256u32)
            .map(|m| {
                let p: Vec<u8> = (0..8).map(|i| ((m >> i) & 1) as u8).collect();
                code.encode_payload(&p).unwrap()
            })
            .collect();
        assert_eq!(images.len(), 256);
        let mut accepted = 0;
        for w in 0..(1u32 << 16) {
            let x: Vec<u8> = (0..16).map(|i| ((w >> i) & 1) as u8).collect();
            let member = code.is_codeword(&x);
            assert_eq!(member, images.contains(&x));
            accepted += usize::from(member);
        }
        assert_eq!(accepted, 256);
    }

    #[test]
    fn single_flips_are_detected() {
        // Every single flip of a codeword of a code with minimum distance >= 2
        // is rejected; count them exhaustively for N = 16.
        let code = PolarCode::construct(16, 12, Crc::TEST4).unwrap();
        let mut rng = seeded(4);
        for _ in 0..64 {
            let p: Vec<u8> = (0..8).map(|_| rng.random_range(0..2)).collect();
            let x = code.encode_payload(&p).unwrap();
            for j in 0..16 {
                let mut y = x.clone();
                y[j] ^= 1;
                assert!(!code.is_codeword(&y));
            }
        }
    }

    #[test]
    fn syndrome_agrees_with_membership() {
        let mut rng = seeded(5);
        for (n, k, crc) in [
            (16, 12, Crc::TEST4),
            (64, 57, Crc::NR11),
            (128, 116, Crc::NR11),
            (256, 128, Crc::NR11),
        ] {
            let code = PolarCode::construct(n, k, crc).unwrap();
            let pm = code.parity_map();
            let mut s = vec![0u64; pm.words()];
            for t in 0..2000 {
                let p: Vec<u8> = (0..code.payload_len())
                    .map(|_| rng.random_range(0..2))
                    .collect();
                let mut x = code.encode_payload(&p).unwrap();
                if t % 2 == 0 {
                    let flips = rng.random_range(1..4);
                    for _ in 0..flips {
                        let j = rng.random_range(0..n);
                        x[j] ^= 1;
                    }
                }
                pm.syndrome_into(&x, &mut s);
                assert_eq!(s.iter().all(|&w| w == 0), code.is_codeword(&x));
            }
        }
    }
}
