//! CRC-aided successive-cancellation list decoding.
//!
//! Path metric: each decision against the sign of its leaf LLR adds `|LLR|`.
//! After the last leaf the paths are ranked by metric and the first one that
//! passes the CRC is returned.

use super::{check_len, f_minsum, g_update, DecodeError, DecodeOutcome, DecodeStatus};
use crate::detect::ReliabilityVector;
use crate::polar::PolarCode;

#[derive(Clone)]
struct Path {
    // alpha[k] and beta[k] have length 2^k; alpha[n] holds the channel LLRs
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<u8>>,
    u: Vec<u8>,
    metric: f64,
}

struct ListDecoder<'a> {
    frozen: &'a [bool],
    list_size: usize,
    paths: Vec<Path>,
}

impl ListDecoder<'_> {
    fn node(&mut self, level: usize, offset: usize) {
        if level == 0 {
            self.leaf(offset);
            return;
        }
        let half = 1 << (level - 1);
        for p in &mut self.paths {
            let (lower, upper) = p.alpha.split_at_mut(level);
            let src = &upper[0];
            let dst = &mut lower[level - 1];
            for i in 0..half {
                dst[i] = f_minsum(src[i], src[i + half]);
            }
        }
        self.node(level - 1, offset);
        for p in &mut self.paths {
            let (lower, upper) = p.beta.split_at_mut(level);
            upper[0][..half].copy_from_slice(&lower[level - 1]);
            let (alo, ahi) = p.alpha.split_at_mut(level);
            let src = &ahi[0];
            let dst = &mut alo[level - 1];
            let left = &upper[0];
            for i in 0..half {
                dst[i] = g_update(src[i], src[i + half], left[i]);
            }
        }
        self.node(level - 1, offset + half);
        for p in &mut self.paths {
            let (lower, upper) = p.beta.split_at_mut(level);
            let right = &lower[level - 1];
            let out = &mut upper[0];
            for (o, r) in out[..half].iter_mut().zip(right) {
                *o ^= r;
            }
            out[half..2 * half].copy_from_slice(&right[..half]);
        }
    }

    fn leaf(&mut self, index: usize) {
        if self.frozen[index] {
            for p in &mut self.paths {
                let l = p.alpha[0][0];
                if l < 0.0 {
                    p.metric += -l;
                }
                p.beta[0][0] = 0;
                p.u[index] = 0;
            }
            return;
        }
        // (parent, bit, metric); parents in list order, bit 0 before bit 1
        let mut candidates: Vec<(usize, u8, f64)> = Vec::with_capacity(2 * self.paths.len());
        for (i, p) in self.paths.iter().enumerate() {
            let l = p.alpha[0][0];
            let pen0 = if l < 0.0 { -l } else { 0.0 };
            let pen1 = if l < 0.0 { 0.0 } else { l };
            candidates.push((i, 0, p.metric + pen0));
            candidates.push((i, 1, p.metric + pen1));
        }
        // stable: equal metrics keep parent order, then bit 0 first
        candidates.sort_by(|a, b| a.2.total_cmp(&b.2));
        candidates.truncate(self.list_size);

        let mut survivors = Vec::with_capacity(candidates.len());
        let mut uses = vec![0usize; self.paths.len()];
        for &(parent, _, _) in &candidates {
            uses[parent] += 1;
        }
        let mut old: Vec<Option<Path>> = std::mem::take(&mut self.paths)
            .into_iter()
            .map(Some)
            .collect();
        for &(parent, bit, metric) in &candidates {
            uses[parent] -= 1;
            let mut p = if uses[parent] == 0 {
                old[parent].take().expect("parent consumed once")
            } else {
                old[parent].clone().expect("parent still live")
            };
            p.metric = metric;
            p.beta[0][0] = bit;
            p.u[index] = bit;
            survivors.push(p);
        }
        self.paths = survivors;
    }
}

/// List decoding with `list_size` paths; `list_size = 1` is plain SC.
pub fn scl_decode(
    rel: &ReliabilityVector,
    code: &PolarCode,
    list_size: usize,
) -> Result<DecodeOutcome, DecodeError> {
    if list_size == 0 {
        return Err(DecodeError::BadListSize);
    }
    let n = code.n();
    check_len(rel, n)?;
    let levels = n.trailing_zeros() as usize;
    let mut alpha: Vec<Vec<f64>> = (0..=levels).map(|k| vec![0.0; 1 << k]).collect();
    alpha[levels] = rel.signed_llrs();
    let root = Path {
        alpha,
        beta: (0..=levels).map(|k| vec![0u8; 1 << k]).collect(),
        u: vec![0; n],
        metric: 0.0,
    };
    let mut dec = ListDecoder {
        frozen: code.frozen_mask(),
        list_size,
        paths: vec![root],
    };
    dec.node(levels, 0);

    let mut paths = dec.paths;
    paths.sort_by(|a, b| a.metric.total_cmp(&b.metric));
    let infos: Vec<Vec<u8>> = paths
        .iter()
        .map(|p| code.info_positions().iter().map(|&i| p.u[i]).collect())
        .collect();
    let chosen = infos.iter().position(|info| code.crc().check(info));
    let (rank, status) = match chosen {
        Some(r) => (r, DecodeStatus::Decoded),
        None => (0, DecodeStatus::CrcFailAllPaths),
    };
    let mut info = infos[rank].clone();
    info.truncate(code.payload_len());
    let codeword = paths.swap_remove(rank).beta.swap_remove(levels);
    Ok(DecodeOutcome {
        info_bits: info,
        codeword,
        queries: 0,
        list_rank: rank,
        status,
    })
}
