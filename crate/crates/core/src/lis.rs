//! Longest weakly increasing subsequences and RSK shapes of words.
//!
//! Three routes to `LI_n` are kept deliberately independent:
//! [`lis_bruteforce`] enumerates subsequences, [`lis_patience`] is the usual
//! pile-tail algorithm, and [`lis_combinatorial`] evaluates the identity
//!
//! ```text
//! LI_n = n/m - (1/m) sum_r r S^r_n + max_{0 <= k_1 <= ... <= k_{m-1} <= n} sum_r S^r_{k_r}
//! ```
//!
//! where `S^r_k = a^r_k - a^{r+1}_k` is the difference of prefix letter counts.

use crate::chain::Word;
use crate::error::{Error, Result};

/// Longest word accepted by [`lis_bruteforce`].
pub const BRUTEFORCE_MAX_LEN: usize = 22;

/// Prefix letter counts `a^r_k` and difference walks `S^r_k` of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWalk {
    m: usize,
    n: usize,
    /// Row-major `(n+1) x m`.
    counts: Vec<u32>,
    /// Row-major `(n+1) x (m-1)`.
    s: Vec<i64>,
}

impl LatticeWalk {
    pub fn new(word: &Word) -> Self {
        let m = word.alphabet_size() as usize;
        let n = word.len();
        let mut counts = vec![0u32; (n + 1) * m];
        let mut s = vec![0i64; (n + 1) * (m - 1)];
        for (i, &x) in word.letters().iter().enumerate() {
            let k = i + 1;
            let (prev, cur) = counts.split_at_mut(k * m);
            cur[..m].copy_from_slice(&prev[(k - 1) * m..]);
            cur[x as usize - 1] += 1;
            for r in 0..m - 1 {
                s[k * (m - 1) + r] = cur[r] as i64 - cur[r + 1] as i64;
            }
        }
        Self { m, n, counts, s }
    }

    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `a^r_k`: occurrences of letter `r` (1-based) among the first `k` letters.
    pub fn count(&self, k: usize, r: usize) -> u32 {
        assert!((1..=self.m).contains(&r), "letter {r} outside 1..={}", self.m);
        self.counts[k * self.m + r - 1]
    }

    /// `S^r_k` for `1 <= r < m`.
    pub fn s(&self, k: usize, r: usize) -> i64 {
        assert!((1..self.m).contains(&r), "walk index {r} outside 1..{}", self.m);
        self.s[k * (self.m - 1) + r - 1]
    }

    /// `S^r_0, ..., S^r_n`.
    pub fn s_series(&self, r: usize) -> Vec<i64> {
        (0..=self.n).map(|k| self.s(k, r)).collect()
    }
}

/// Row lengths of an RSK insertion tableau, longest first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct YoungShape {
    pub rows: Vec<usize>,
}

impl YoungShape {
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Length of row `i` (0-based); 0 past the last row.
    pub fn row(&self, i: usize) -> usize {
        self.rows.get(i).copied().unwrap_or(0)
    }
}

/// Exhaustive scan over all `2^n` subsequences.
pub fn lis_bruteforce(word: &Word) -> Result<usize> {
    let xs = word.letters();
    let n = xs.len();
    if n > BRUTEFORCE_MAX_LEN {
        return Err(Error::OracleLimit {
            n,
            max: BRUTEFORCE_MAX_LEN,
        });
    }
    let mut best = 0;
    'masks: for mask in 0u32..(1u32 << n) {
        let len = mask.count_ones() as usize;
        if len <= best {
            continue;
        }
        let mut last = 0u8;
        for (i, &x) in xs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if x < last {
                    continue 'masks;
                }
                last = x;
            }
        }
        best = len;
    }
    Ok(best)
}

/// Patience sorting; `tails[j]` is the smallest possible last letter of a
/// weakly increasing subsequence of length `j + 1`.
pub fn lis_patience(word: &Word) -> usize {
    let mut tails: Vec<u8> = Vec::new();
    for &x in word.letters() {
        // first tail strictly greater than x
        let pos = tails.partition_point(|&t| t <= x);
        if pos == tails.len() {
            tails.push(x);
        } else {
            tails[pos] = x;
        }
    }
    tails.len()
}

/// `LI_n` from the difference walks, with the nested maximum evaluated by the
/// running recursion `M_r(k) = max(M_r(k-1), M_{r-1}(k) + S^r_k)`, `M_0 = 0`.
pub fn lis_combinatorial(word: &Word) -> usize {
    let m = word.alphabet_size() as usize;
    let n = word.len();
    let mut s = vec![0i64; m - 1];
    // best[r] = M_{r+1}(k); all zero at k = 0
    let mut best = vec![0i64; m - 1];
    for &x in word.letters() {
        let x = x as usize;
        // letter x is +1 in S^x and -1 in S^{x-1}
        if x < m {
            s[x - 1] += 1;
        }
        if x > 1 {
            s[x - 2] -= 1;
        }
        let mut below = 0i64;
        for r in 0..m - 1 {
            best[r] = best[r].max(below + s[r]);
            below = best[r];
        }
    }
    let weighted: i64 = s.iter().enumerate().map(|(r, &v)| (r as i64 + 1) * v).sum();
    let numer = n as i64 - weighted;
    debug_assert_eq!(numer % m as i64, 0, "a^m_n must be an integer");
    let last_count = numer / m as i64;
    (last_count + best[m - 2]) as usize
}

/// Shape of the RSK insertion tableau of `word` (row insertion, bumping the
/// leftmost entry strictly greater than the inserted letter).
pub fn rsk_shape(word: &Word) -> YoungShape {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for &x in word.letters() {
        let mut carry = x;
        let mut depth = 0;
        loop {
            if depth == rows.len() {
                rows.push(vec![carry]);
                break;
            }
            let row = &mut rows[depth];
            let pos = row.partition_point(|&t| t <= carry);
            if pos == row.len() {
                row.push(carry);
                break;
            }
            std::mem::swap(&mut row[pos], &mut carry);
            depth += 1;
        }
    }
    YoungShape {
        rows: rows.iter().map(Vec::len).collect(),
    }
}
