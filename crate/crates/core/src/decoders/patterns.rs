//! Noise-effect pattern generators for GRAND.
//!
//! Patterns are sets of reliability ranks (1 = least reliable bit). Hamming
//! order emits sets by size; logistic-weight order emits them by rank sum,
//! i.e. by distinct-part integer partitions of 1, 2, 3, ... Within one weight
//! fewer flips come first, then the lexicographically smallest set.

use crate::detect::ReliabilityVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternOrder {
    HammingWeight,
    LogisticWeight,
}

#[derive(Clone, Debug)]
pub struct PatternGenerator {
    order: PatternOrder,
    rank_permutation: Vec<usize>,
    budget: u64,
    emitted: u64,
    // current pattern, ascending ranks
    ranks: Vec<usize>,
    weight: usize,
    started: bool,
    exhausted: bool,
}

/// Builds a generator over `rel`'s bits. Ranks follow ascending magnitude with
/// index order breaking ties, so hard input ranks bits by position.
pub fn make_pattern_generator(
    rel: &ReliabilityVector,
    order: PatternOrder,
    budget: u64,
) -> PatternGenerator {
    let mut perm: Vec<usize> = (0..rel.len()).collect();
    if let Some(v) = rel.values() {
        perm.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    }
    PatternGenerator::new(order, perm, budget)
}

impl PatternGenerator {
    pub fn new(order: PatternOrder, rank_permutation: Vec<usize>, budget: u64) -> Self {
        Self {
            order,
            rank_permutation,
            budget,
            emitted: 0,
            ranks: Vec::new(),
            weight: 0,
            started: false,
            exhausted: false,
        }
    }

    pub fn order(&self) -> PatternOrder {
        self.order
    }

    /// Bit index of rank `r` (1-based).
    #[inline]
    pub fn position(&self, rank: usize) -> usize {
        self.rank_permutation[rank - 1]
    }

    pub fn rank_permutation(&self) -> &[usize] {
        &self.rank_permutation
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Moves to the next pattern and returns its ranks, or `None` once the
    /// budget or the pattern space is used up.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.exhausted || self.emitted >= self.budget {
            return None;
        }
        if !self.started {
            self.started = true;
        } else {
            let more = match self.order {
                PatternOrder::HammingWeight => self.next_hamming(),
                PatternOrder::LogisticWeight => self.next_logistic(),
            };
            if !more {
                self.exhausted = true;
                return None;
            }
        }
        self.emitted += 1;
        Some(&self.ranks)
    }

    /// Current pattern as bit positions.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.ranks.iter().map(|&r| self.rank_permutation[r - 1])
    }

    /// Weight of the current pattern under the generator's order.
    pub fn weight(&self) -> usize {
        match self.order {
            PatternOrder::HammingWeight => self.ranks.len(),
            PatternOrder::LogisticWeight => self.ranks.iter().sum(),
        }
    }

    fn n(&self) -> usize {
        self.rank_permutation.len()
    }

    fn next_hamming(&mut self) -> bool {
        let n = self.n();
        let k = self.ranks.len();
        // lexicographic successor among k-subsets of 1..=n
        for i in (0..k).rev() {
            if self.ranks[i] < n - (k - 1 - i) {
                self.ranks[i] += 1;
                for j in i + 1..k {
                    self.ranks[j] = self.ranks[j - 1] + 1;
                }
                return true;
            }
        }
        if k < n {
            self.ranks = (1..=k + 1).collect();
            true
        } else {
            false
        }
    }

    fn next_logistic(&mut self) -> bool {
        let n = self.n();
        let max_weight = n * (n + 1) / 2;
        let k = self.ranks.len();
        let w = self.weight;
        if k >= 2 && lex_next(&mut self.ranks, w, n) {
            return true;
        }
        let mut w = w;
        let mut k = k + 1;
        loop {
            if k * (k + 1) / 2 > w || k > n {
                w += 1;
                k = 1;
                if w > max_weight {
                    return false;
                }
            }
            let mut ranks = Vec::with_capacity(k);
            if fill_min(&mut ranks, 0, k, w, n) {
                self.ranks = ranks;
                self.weight = w;
                return true;
            }
            k += 1;
        }
    }
}

impl Iterator for PatternGenerator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.advance().map(|r| r.to_vec())
    }
}

// Can m distinct values in (prev, n] sum to s?
fn feasible(prev: usize, m: usize, s: usize, n: usize) -> bool {
    if m == 0 {
        return s == 0;
    }
    if prev + m > n {
        return false;
    }
    let min = m * prev + m * (m + 1) / 2;
    let max = m * n - m * (m - 1) / 2;
    min <= s && s <= max
}

// Appends the lexicographically smallest m increasing values above `prev`
// (all <= n) summing to s. Returns false if none exist.
fn fill_min(out: &mut Vec<usize>, prev: usize, m: usize, s: usize, n: usize) -> bool {
    if !feasible(prev, m, s, n) {
        return false;
    }
    let mut prev = prev;
    let mut s = s;
    for left in (1..=m).rev() {
        let mut v = prev + 1;
        while !feasible(v, left - 1, s - v, n) {
            v += 1;
        }
        out.push(v);
        prev = v;
        s -= v;
    }
    true
}

// Lexicographic successor among increasing k-tuples in [1, n] with sum w.
fn lex_next(ranks: &mut Vec<usize>, w: usize, n: usize) -> bool {
    let k = ranks.len();
    for i in (0..k - 1).rev() {
        let prefix: usize = ranks[..i].iter().sum();
        let rest = k - i - 1;
        let mut v = ranks[i] + 1;
        while v <= n && prefix + v <= w {
            let s = w - prefix - v;
            // the smallest completion only grows with v
            if rest * v + rest * (rest + 1) / 2 > s {
                break;
            }
            if feasible(v, rest, s, n) {
                ranks.truncate(i);
                ranks.push(v);
                let ok = fill_min(ranks, v, rest, s, n);
                debug_assert!(ok);
                return true;
            }
            v += 1;
        }
    }
    false
}
