//! Bit-packed vectors and matrices over GF(2).
//!
//! Rows are packed 64 bits per word; every elimination routine here works a
//! word at a time.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` of the integer going to position `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len >= 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    /// Inverse of [`BitVec::from_u64`]; panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64, "bit vector too long for u64");
        self.words.first().copied().unwrap_or(0)
    }

    /// Parses a string of `0`/`1` characters; character `i` is bit `i`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    /// Integer inner product (popcount of the AND).
    #[inline]
    pub fn and_count(&self, other: &BitVec) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    #[inline]
    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    /// Appends one bit at the end.
    pub fn push(&mut self, b: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, b);
    }

    /// Drops the last bit.
    pub fn pop(&mut self) -> Option<bool> {
        if self.len == 0 {
            return None;
        }
        let b = self.get(self.len - 1);
        self.set(self.len - 1, false);
        self.len -= 1;
        if self.len % WORD == 0 {
            self.words.pop();
        }
        Some(b)
    }

    /// Restriction to the listed positions, in order.
    pub fn select(&self, idx: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            if self.get(i) {
                v.set(k, true);
            }
        }
        v
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2) stored as packed rows.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            ncols,
            rows: vec![BitVec::zeros(ncols); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        BitMatrix { ncols, rows }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut BitVec {
        &mut self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    /// rows[dst] ^= rows[src]
    pub fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (a, b) = if src < dst {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        b.xor_assign(a);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    /// `v^T * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.nrows());
        let mut out = BitVec::zeros(self.ncols);
        for r in v.iter_ones() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows());
        let rows = self.rows.iter().map(|r| other.vec_mul(r)).collect();
        BitMatrix {
            ncols: other.ncols,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// leading row.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows() {
                break;
            }
            let Some(p) = (r..self.nrows()).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            for i in 0..self.nrows() {
                if i != r && self.rows[i].get(c) {
                    self.add_row(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Solves `self * x = b`, returning one solution and a kernel basis.
    pub fn solve(&self, b: &BitVec) -> Option<(BitVec, Vec<BitVec>)> {
        assert_eq!(b.len(), self.nrows());
        let n = self.ncols;
        // augmented matrix [A | b]
        let mut aug = BitMatrix::zeros(self.nrows(), n + 1);
        for (i, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                aug.rows[i].set(c, true);
            }
            if b.get(i) {
                aug.rows[i].set(n, true);
            }
        }
        let pivots = aug.row_reduce();
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = BitVec::zeros(n);
        for (r, &c) in pivots.iter().enumerate() {
            if aug.rows[r].get(n) {
                x.set(c, true);
            }
        }
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut kernel = Vec::new();
        for f in (0..n).filter(|&c| !is_pivot[c]) {
            let mut k = BitVec::unit(n, f);
            for (r, &c) in pivots.iter().enumerate() {
                if aug.rows[r].get(f) {
                    k.set(c, true);
                }
            }
            kernel.push(k);
        }
        Some((x, kernel))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.ncols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn push_pop_across_word_boundary() {
        let mut v = BitVec::zeros(63);
        v.push(true);
        v.push(true);
        assert_eq!(v.len(), 65);
        assert!(v.get(64));
        assert_eq!(v.pop(), Some(true));
        assert_eq!(v.words().len(), 1);
        assert!(v.get(63));
    }

    #[test]
    fn iter_ones_matches_get() {
        let v = BitVec::parse("0110000000000000000000000000000000000000000000000000000000000000001").unwrap();
        let ones: Vec<_> = v.iter_ones().collect();
        assert_eq!(ones, vec![1, 2, 66]);
    }

    #[test]
    fn solve_finds_kernel() {
        // x0 + x1 = 1, x1 + x2 = 0
        let a = BitMatrix::from_rows(
            3,
            vec![BitVec::parse("110").unwrap(), BitVec::parse("011").unwrap()],
        );
        let (x, ker) = a.solve(&BitVec::parse("10").unwrap()).unwrap();
        assert_eq!(a.mul_vec(&x), BitVec::parse("10").unwrap());
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).is_zero());
    }

    #[test]
    fn inconsistent_system() {
        let a = BitMatrix::from_rows(2, vec![BitVec::parse("11").unwrap(), BitVec::parse("11").unwrap()]);
        assert!(a.solve(&BitVec::parse("10").unwrap()).is_none());
    }

    proptest! {
        #[test]
        fn transpose_of_product(a in proptest::collection::vec(any::<u8>(), 5), b in proptest::collection::vec(any::<u8>(), 8)) {
            let ma = BitMatrix::from_rows(8, a.iter().map(|&w| BitVec::from_u64(8, w as u64)).collect());
            let mb = BitMatrix::from_rows(5, b.iter().map(|&w| BitVec::from_u64(5, w as u64)).collect());
            let lhs = ma.mul(&mb).transpose();
            let rhs = mb.transpose().mul(&ma.transpose());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
