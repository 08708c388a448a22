//! Exact linear algebra for boundary matrices: rank over GF(2) on packed bit
//! rows, and rank plus invariant factors over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix over GF(2) with rows packed into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if self.get(r, c) != v {
            self.flip(r, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// `self * rhs` over GF(2).
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.words, k * rhs.words);
                    for w in 0..rhs.words {
                        out.data[dst + w] ^= rhs.data[src + w];
                    }
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination on the packed rows.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let w = self.words;
        let mut rank = 0;
        for col in 0..self.cols {
            let (word, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..self.rows).find(|&r| m[r * w + word] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..w {
                    m.swap(pivot * w + k, rank * w + k);
                }
            }
            for r in rank + 1..self.rows {
                if m[r * w + word] & bit != 0 {
                    // only words from `word` on can be nonzero in the pivot row
                    for k in word..w {
                        m[r * w + k] ^= m[rank * w + k];
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// Rank over GF(2) of the mod 2 reduction of `m`.
///
/// Columns are eliminated sparsely, sparsest first, each time pivoting on
/// the shortest row; once the live part has become dense enough, the rest is
/// finished on packed bit rows.
pub fn rank_mod2(m: &SparseIntMatrix) -> usize {
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); m.rows];
    for &(r, c, v) in &m.entries {
        if v.rem_euclid(2) == 1 {
            rows[r as usize].push(c);
        }
    }
    for row in &mut rows {
        row.sort_unstable();
        // entries may repeat; keep those with odd multiplicity
        let mut out: Vec<u32> = Vec::with_capacity(row.len());
        for &c in row.iter() {
            if out.last() == Some(&c) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        *row = out;
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row {
            col_rows[c as usize].push(r as u32);
        }
    }
    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&c| col_rows[c].len());
    let mut alive = vec![true; m.rows];
    let mut live_rows = m.rows;
    let mut nnz: usize = rows.iter().map(|r| r.len()).sum();
    let mut rank = 0;
    let mut scratch = Vec::new();
    for (done, &c) in order.iter().enumerate() {
        col_rows[c]
            .retain(|&r| alive[r as usize] && rows[r as usize].binary_search(&(c as u32)).is_ok());
        col_rows[c].sort_unstable();
        col_rows[c].dedup();
        let Some(&pivot) = col_rows[c].iter().min_by_key(|&&r| rows[r as usize].len()) else {
            continue;
        };
        let prow = std::mem::take(&mut rows[pivot as usize]);
        alive[pivot as usize] = false;
        live_rows -= 1;
        nnz -= prow.len();
        rank += 1;
        let members = std::mem::take(&mut col_rows[c]);
        for &r in &members {
            if r == pivot {
                continue;
            }
            let row = &mut rows[r as usize];
            xor_sorted(row, &prow, &mut scratch);
            nnz = nnz + scratch.len() - row.len();
            std::mem::swap(row, &mut scratch);
            // columns that gained this row
            for &cc in &prow {
                if row.binary_search(&cc).is_ok() {
                    col_rows[cc as usize].push(r);
                }
            }
        }
        // switch to packed rows when the remaining block is small and dense
        let live_cols = order.len() - done - 1;
        if live_cols > 0
            && live_rows > 0
            && nnz * 16 > live_rows * live_cols
            && live_rows * live_cols < 1 << 26
        {
            let rest: Vec<usize> = order[done + 1..].to_vec();
            let mut index = vec![usize::MAX; m.cols];
            for (k, &cc) in rest.iter().enumerate() {
                index[cc] = k;
            }
            let live: Vec<usize> = (0..m.rows).filter(|&r| alive[r]).collect();
            let mut dense = BitMatrix::zeros(live.len(), rest.len());
            for (k, &r) in live.iter().enumerate() {
                for &cc in &rows[r] {
                    dense.flip(k, index[cc as usize]);
                }
            }
            return rank + dense.rank();
        }
    }
    rank
}

/// `out = a xor b` for sorted column lists.
fn xor_sorted(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Sparse integer matrix given by `(row, col, value)` entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(u32, u32, i64)>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: i64) {
        if v != 0 {
            self.entries.push((r as u32, c as u32, v));
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r as usize][c as usize] += v;
        }
        out
    }

    /// Reduction mod 2.
    pub fn to_bits(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            if v.rem_euclid(2) == 1 {
                out.flip(r as usize, c as usize);
            }
        }
        out
    }

    /// Whether `self * rhs` vanishes exactly.
    pub fn mul_is_zero(&self, rhs: &SparseIntMatrix) -> bool {
        self.product_vanishes(rhs, false)
    }

    /// Whether `self * rhs` vanishes mod 2.
    pub fn mul_is_zero_mod2(&self, rhs: &SparseIntMatrix) -> bool {
        self.product_vanishes(rhs, true)
    }

    fn product_vanishes(&self, rhs: &SparseIntMatrix, mod2: bool) -> bool {
        assert_eq!(self.cols, rhs.rows);
        let mut by_row: Vec<Vec<(u32, i64)>> = vec![Vec::new(); rhs.rows];
        for &(r, c, v) in &rhs.entries {
            by_row[r as usize].push((c, v));
        }
        let mut acc: std::collections::HashMap<(u32, u32), i128> = Default::default();
        for &(r, k, v) in &self.entries {
            for &(c, w) in &by_row[k as usize] {
                *acc.entry((r, c)).or_default() += v as i128 * w as i128;
            }
        }
        acc.values()
            .all(|&x| if mod2 { x % 2 == 0 } else { x == 0 })
    }
}

/// Rank of an integer matrix and its invariant factors other than 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmithSummary {
    pub rank: usize,
    /// Invariant factors `d > 1`, ascending, each dividing the next.
    pub torsion: Vec<BigInt>,
}

/// Smith normal form summary. Unit pivots are eliminated sparsely first
/// (fill-in kept low by choosing short rows); whatever is left, usually
/// tiny, goes through a dense exact reduction.
pub fn smith_summary(m: &SparseIntMatrix) -> SmithSummary {
    match sparse_unit_elimination(m) {
        Some((rank, rest)) => {
            let mut s = dense_smith(rest);
            s.rank += rank;
            s
        }
        None => dense_smith(m.to_dense()),
    }
}

/// Returns the number of unit pivots removed and the remaining dense block,
/// or `None` if an intermediate entry overflowed `i64`.
fn sparse_unit_elimination(m: &SparseIntMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    use std::collections::BTreeMap;
    let mut rows: Vec<BTreeMap<u32, i64>> = vec![BTreeMap::new(); m.rows];
    for &(r, c, v) in &m.entries {
        let e = rows[r as usize].entry(c).or_insert(0);
        *e = e.checked_add(v)?;
        if *e == 0 {
            rows[r as usize].remove(&c);
        }
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c as usize].push(r as u32);
        }
    }
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; m.cols];
    let mut rank = 0;
    loop {
        let mut progress = false;
        for c in 0..m.cols {
            if !col_alive[c] {
                continue;
            }
            // stale entries are filtered lazily
            col_rows[c]
                .retain(|&r| row_alive[r as usize] && rows[r as usize].contains_key(&(c as u32)));
            col_rows[c].sort_unstable();
            col_rows[c].dedup();
            if col_rows[c].is_empty() {
                col_alive[c] = false;
                continue;
            }
            let pivot = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| rows[r as usize][&(c as u32)].abs() == 1)
                .min_by_key(|&r| rows[r as usize].len());
            let Some(pr) = pivot else {
                continue;
            };
            let prow = std::mem::take(&mut rows[pr as usize]);
            let pv = prow[&(c as u32)];
            let others: Vec<u32> = col_rows[c].iter().copied().filter(|&r| r != pr).collect();
            for r in others {
                let factor = rows[r as usize][&(c as u32)] * pv; // a_rc / pv with pv = ±1
                for (&cc, &v) in &prow {
                    let delta = factor.checked_mul(v)?;
                    let row = &mut rows[r as usize];
                    let e = row.entry(cc).or_insert(0);
                    let was_zero = *e == 0;
                    *e = e.checked_sub(delta)?;
                    if *e == 0 {
                        row.remove(&cc);
                    } else if was_zero {
                        col_rows[cc as usize].push(r);
                    }
                }
            }
            row_alive[pr as usize] = false;
            col_alive[c] = false;
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..m.rows)
        .filter(|&r| row_alive[r] && !rows[r].is_empty())
        .collect();
    let mut live_cols: Vec<u32> = live_rows
        .iter()
        .flat_map(|&r| rows[r].keys().copied())
        .collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let dense = live_rows
        .iter()
        .map(|&r| {
            live_cols
                .iter()
                .map(|c| BigInt::from(rows[r].get(c).copied().unwrap_or(0)))
                .collect()
        })
        .collect();
    Some((rank, dense))
}

/// Dense Smith normal form over Z; returns rank and the nontrivial
/// invariant factors.
#[allow(clippy::needless_range_loop)]
pub fn dense_smith(mut a: Vec<Vec<BigInt>>) -> SmithSummary {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag: Vec<BigInt> = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for i in t..rows {
                    let v = &a[i][t] * &q;
                    a[i][j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // enforce divisibility of the rest by the pivot
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&p));
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // move the smallest entry of the pivot row/column to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag.sort();
    SmithSummary {
        rank: diag.len(),
        torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sparse(rows: usize, cols: usize, dense: &[i64]) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.push(r, c, dense[r * cols + c]);
            }
        }
        m
    }

    #[test]
    fn bit_rank_basic() {
        let mut m = BitMatrix::zeros(3, 3);
        for (r, c) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)] {
            m.flip(r, c);
        }
        assert_eq!(m.rank(), 2);
        assert_eq!(BitMatrix::zeros(4, 0).rank(), 0);
    }

    #[test]
    fn smith_of_diagonal() {
        let m = sparse(2, 2, &[2, 0, 0, 3]);
        let s = smith_summary(&m);
        assert_eq!(s.rank, 2);
        assert_eq!(s.torsion, vec![BigInt::from(6)]);
    }

    #[test]
    fn smith_torsion_two() {
        let m = sparse(2, 2, &[1, 1, 1, -1]);
        let s = smith_summary(&m);
        assert_eq!(
            s,
            SmithSummary {
                rank: 2,
                torsion: vec![BigInt::from(2)]
            }
        );
    }

    /// Brute-force invariant factors via determinantal divisors.
    fn determinantal_factors(a: &[Vec<i64>]) -> Vec<i64> {
        fn det(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(k, _)| *k != j)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let (r, c) = (a.len(), a[0].len());
        let mut divisors = vec![1i64];
        for k in 1..=r.min(c) {
            let mut g = 0;
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<i64>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| a[i][j]).collect())
                        .collect();
                    g = gcd(g, det(&minor));
                }
            }
            if g == 0 {
                break;
            }
            divisors.push(g);
        }
        divisors.windows(2).map(|w| w[1] / w[0]).collect()
    }

    proptest! {
        #[test]
        fn smith_matches_determinantal_divisors(
            rows in 1usize..4, cols in 1usize..4, vals in proptest::collection::vec(-3i64..4, 9)
        ) {
            let dense: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| vals[r * 3 + c]).collect()).collect();
            let mut m = SparseIntMatrix::new(rows, cols);
            for r in 0..rows { for c in 0..cols { m.push(r, c, dense[r][c]); } }
            let expected = determinantal_factors(&dense);
            let s = smith_summary(&m);
            prop_assert_eq!(s.rank, expected.len());
            let torsion: Vec<i64> = expected.into_iter().filter(|&d| d != 1).collect();
            prop_assert_eq!(s.torsion, torsion.into_iter().map(BigInt::from).collect::<Vec<_>>());
        }

        #[test]
        fn sparse_path_matches_dense(
            rows in 1usize..12, cols in 1usize..12,
            entries in proptest::collection::vec((0usize..12, 0usize..12, -2i64..3), 0..60)
        ) {
            let mut m = SparseIntMatrix::new(rows, cols);
            for (r, c, v) in entries {
                if r < rows && c < cols { m.push(r, c, v); }
            }
            prop_assert_eq!(smith_summary(&m), dense_smith(m.to_dense()));
        }

        #[test]
        fn bit_rank_matches_mod2_smith(
            rows in 1usize..6, cols in 1usize..6, vals in proptest::collection::vec(0i64..2, 36)
        ) {
            let mut m = SparseIntMatrix::new(rows, cols);
            for r in 0..rows { for c in 0..cols { m.push(r, c, vals[r * 6 + c]); } }
            let bits = m.to_bits();
            prop_assert_eq!(rank_mod2(&m), bits.rank());
            // rank over GF(2) = number of invariant factors that are odd
            let s = smith_summary(&m);
            let odd = s.rank - s.torsion.iter().filter(|d| d.is_even()).count();
            prop_assert_eq!(bits.rank(), odd);
        }
    }
}
