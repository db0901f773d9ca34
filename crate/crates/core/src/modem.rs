//! Gray-labelled BPSK and QPSK with unit average energy.
//!
//! Bit 0 maps to the positive amplitude on each rail. A point's label is an
//! integer whose most significant of the `q` bits is the first bit of the group.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModemError {
    #[error("bit vector of length {len} is not a multiple of {q} bits per symbol")]
    Framing { len: usize, q: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qpsk,
}

impl Modulation {
    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
        }
    }

    pub fn constellation(self) -> Constellation {
        Constellation::new(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<Complex64>,
    labels: Vec<u32>,
    q: usize,
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let (points, labels) = match modulation {
            Modulation::Bpsk => (
                vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
                vec![0, 1],
            ),
            Modulation::Qpsk => {
                let s = FRAC_1_SQRT_2;
                (
                    vec![
                        Complex64::new(s, s),
                        Complex64::new(s, -s),
                        Complex64::new(-s, s),
                        Complex64::new(-s, -s),
                    ],
                    vec![0b00, 0b01, 0b10, 0b11],
                )
            }
        };
        Self {
            modulation,
            points,
            labels,
            q: modulation.bits_per_symbol(),
        }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.q
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Bit `j` (0-based, first bit of the group is `j = 0`) of point `index`.
    #[inline]
    pub fn label_bit(&self, index: usize, j: usize) -> u8 {
        ((self.labels[index] >> (self.q - 1 - j)) & 1) as u8
    }

    pub fn label_bits(&self, index: usize) -> Vec<u8> {
        (0..self.q).map(|j| self.label_bit(index, j)).collect()
    }

    fn index_of_label(&self, label: u32) -> usize {
        self.labels
            .iter()
            .position(|&l| l == label)
            .expect("labels cover every q-bit value")
    }

    /// Index of the point closest to `y`. Ties go to the lowest index.
    pub fn nearest(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// Maps consecutive `q`-bit groups to constellation points.
pub fn map_bits(bits: &[u8], c: &Constellation) -> Result<Vec<Complex64>, ModemError> {
    let q = c.bits_per_symbol();
    if !bits.len().is_multiple_of(q) {
        return Err(ModemError::Framing { len: bits.len(), q });
    }
    Ok(bits
        .chunks_exact(q)
        .map(|group| {
            let label = group
                .iter()
                .fold(0u32, |acc, &b| (acc << 1) | (b & 1) as u32);
            c.points[c.index_of_label(label)]
        })
        .collect())
}

/// Minimum-distance decision on one equalised sample.
pub fn slice_hard(y_hat: Complex64, c: &Constellation) -> (Complex64, Vec<u8>) {
    let idx = c.nearest(y_hat);
    (c.points[idx], c.label_bits(idx))
}
