//! Dense GF(3) vectors and matrices in a two-plane bit layout.
//!
//! Symbol `s` at position `i` is stored as bit `i` of the low plane when
//! `s == 1` and of the high plane when `s == 2`; zero leaves both clear.
//! The planes are never both set at one position, and bits past `len` are
//! always clear.

use std::fmt;

use crate::gf::Trit;

const WORD_BITS: usize = 64;

#[inline]
pub(crate) const fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Word-parallel GF(3) addition of two plane pairs.
#[inline(always)]
pub(crate) fn add_word(a_lo: u64, a_hi: u64, b_lo: u64, b_hi: u64) -> (u64, u64) {
    let t = (a_lo | b_hi) ^ (a_hi | b_lo);
    ((a_hi | b_hi) ^ t, (a_lo | b_lo) ^ t)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    len: usize,
    lo: Vec<u64>,
    hi: Vec<u64>,
}

impl TernaryVector {
    pub fn zeros(len: usize) -> Self {
        let w = words_for(len);
        TernaryVector {
            len,
            lo: vec![0; w],
            hi: vec![0; w],
        }
    }

    pub fn from_trits(trits: &[Trit]) -> Self {
        let mut v = Self::zeros(trits.len());
        for (i, &t) in trits.iter().enumerate() {
            v.set(i, t);
        }
        v
    }

    /// Builds a vector straight from its planes. Panics if the planes
    /// overlap or spill past `len`.
    pub fn from_planes(len: usize, lo: Vec<u64>, hi: Vec<u64>) -> Self {
        let w = words_for(len);
        assert!(lo.len() == w && hi.len() == w, "plane length mismatch");
        assert!(
            lo.iter().zip(&hi).all(|(a, b)| a & b == 0),
            "planes overlap"
        );
        let v = TernaryVector { len, lo, hi };
        if let (Some(&l), Some(&h)) = (v.lo.last(), v.hi.last()) {
            assert_eq!((l | h) & !tail_mask(len), 0, "bits past the end");
        }
        v
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
    pub fn lo(&self) -> &[u64] {
        &self.lo
    }

    #[inline]
    pub fn hi(&self) -> &[u64] {
        &self.hi
    }

    #[inline]
    pub fn get(&self, i: usize) -> Trit {
        debug_assert!(i < self.len);
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        (((self.lo[w] >> b) & 1) | (((self.hi[w] >> b) & 1) << 1)) as Trit
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: Trit) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        let mask = 1u64 << b;
        self.lo[w] &= !mask;
        self.hi[w] &= !mask;
        match value % 3 {
            1 => self.lo[w] |= mask,
            2 => self.hi[w] |= mask,
            _ => {}
        }
    }

    pub fn to_trits(&self) -> Vec<Trit> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(a, b)| a | b == 0)
    }

    /// Support bitset: one bit per nonzero position.
    pub fn support_words(&self) -> Vec<u64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| a | b).collect()
    }

    /// Nonzero positions in ascending order.
    pub fn support(&self) -> Vec<usize> {
        iter_bits(&self.support_words()).collect()
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.first_nonzero_from(0)
    }

    /// First nonzero position, starting the scan at word `from_word`.
    #[inline]
    pub(crate) fn first_nonzero_from(&self, from_word: usize) -> Option<usize> {
        for w in from_word..self.lo.len() {
            let bits = self.lo[w] | self.hi[w];
            if bits != 0 {
                return Some(w * WORD_BITS + bits.trailing_zeros() as usize);
            }
        }
        None
    }

    #[inline]
    pub fn add_assign(&mut self, other: &TernaryVector) {
        debug_assert_eq!(self.len, other.len);
        self.add_assign_from(other, 0);
    }

    /// Adds `other` into `self`, touching only words `from_word..`.
    #[inline]
    pub(crate) fn add_assign_from(&mut self, other: &TernaryVector, from_word: usize) {
        let lo = &mut self.lo[from_word..];
        let hi = &mut self.hi[from_word..];
        for (((al, ah), bl), bh) in lo
            .iter_mut()
            .zip(hi.iter_mut())
            .zip(&other.lo[from_word..])
            .zip(&other.hi[from_word..])
        {
            let (l, h) = add_word(*al, *ah, *bl, *bh);
            *al = l;
            *ah = h;
        }
    }

    #[inline]
    pub fn sub_assign(&mut self, other: &TernaryVector) {
        self.sub_assign_from(other, 0);
    }

    #[inline]
    pub(crate) fn sub_assign_from(&mut self, other: &TernaryVector, from_word: usize) {
        let lo = &mut self.lo[from_word..];
        let hi = &mut self.hi[from_word..];
        // subtracting b is adding -b, i.e. b with its planes swapped
        for (((al, ah), bl), bh) in lo
            .iter_mut()
            .zip(hi.iter_mut())
            .zip(&other.lo[from_word..])
            .zip(&other.hi[from_word..])
        {
            let (l, h) = add_word(*al, *ah, *bh, *bl);
            *al = l;
            *ah = h;
        }
    }

    /// self += c·other for a scalar c in GF(3).
    #[inline]
    pub fn add_scaled(&mut self, c: Trit, other: &TernaryVector) {
        match c % 3 {
            1 => self.add_assign(other),
            2 => self.sub_assign(other),
            _ => {}
        }
    }

    #[inline]
    pub fn neg_assign(&mut self) {
        std::mem::swap(&mut self.lo, &mut self.hi);
    }

    pub fn scaled(&self, c: Trit) -> TernaryVector {
        match c % 3 {
            0 => TernaryVector::zeros(self.len),
            1 => self.clone(),
            _ => {
                let mut v = self.clone();
                v.neg_assign();
                v
            }
        }
    }

    /// Standard inner product over GF(3).
    pub fn dot(&self, other: &TernaryVector) -> Trit {
        debug_assert_eq!(self.len, other.len);
        let mut plus = 0u32;
        let mut minus = 0u32;
        for i in 0..self.lo.len() {
            let (al, ah, bl, bh) = (self.lo[i], self.hi[i], other.lo[i], other.hi[i]);
            plus += ((al & bl) | (ah & bh)).count_ones();
            minus += ((al & bh) | (ah & bl)).count_ones();
        }
        ((plus + 2 * minus) % 3) as Trit
    }

    /// The vector with the sorted positions `drop` deleted.
    pub fn punctured(&self, drop: &[usize]) -> TernaryVector {
        let mut out = TernaryVector::zeros(self.len - drop.len());
        let mut j = 0;
        let mut skip = drop.iter().peekable();
        for i in 0..self.len {
            if skip.peek() == Some(&&i) {
                skip.next();
                continue;
            }
            out.set(j, self.get(i));
            j += 1;
        }
        out
    }
}

impl fmt::Debug for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.to_trits().iter().map(|t| (b'0' + t) as char).collect();
        write!(f, "TernaryVector({s})")
    }
}

#[inline]
pub(crate) fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Iterates the set bits of a bitset in ascending order.
pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(w * WORD_BITS + b)
        })
    })
}

/// Row-major GF(3) matrix; each row is a packed [`TernaryVector`].
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryMatrix {
    cols: usize,
    rows: Vec<TernaryVector>,
}

impl fmt::Debug for TernaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TernaryMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

impl TernaryMatrix {
    pub fn new(cols: usize) -> Self {
        TernaryMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TernaryMatrix {
            cols,
            rows: vec![TernaryVector::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<TernaryVector>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        TernaryMatrix { cols, rows }
    }

    pub fn from_trit_rows(cols: usize, rows: &[Vec<Trit>]) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| TernaryVector::from_trits(r)).collect())
    }

    pub fn push_row(&mut self, row: TernaryVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn rows(&self) -> &[TernaryVector] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &TernaryVector {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Trit {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: Trit) {
        self.rows[r].set(c, value)
    }

    /// Column `c` as a vector of length `nrows`.
    pub fn column(&self, c: usize) -> TernaryVector {
        let mut v = TernaryVector::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            v.set(i, r.get(c));
        }
        v
    }

    pub fn transpose(&self) -> TernaryMatrix {
        TernaryMatrix::from_rows(self.nrows(), (0..self.cols).map(|c| self.column(c)).collect())
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        for r in &self.rows {
            basis.insert(r.clone());
            if basis.rank() == self.cols {
                break;
            }
        }
        basis.rank()
    }

    /// Reduced row echelon form (zero rows dropped) and its pivot columns.
    pub fn rref(&self) -> (TernaryMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c) != 0) else {
                continue;
            };
            rows.swap(r, p);
            if rows[r].get(c) == 2 {
                rows[r].neg_assign();
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r {
                    let e = row.get(c);
                    if e != 0 {
                        row.add_scaled(3 - e, &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (TernaryMatrix::from_rows(self.cols, rows), pivots)
    }

    /// Basis of the right null space {x : M·x = 0}, one row per free column.
    pub fn null_space(&self) -> TernaryMatrix {
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = TernaryMatrix::new(self.cols);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = TernaryVector::zeros(self.cols);
            v.set(free, 1);
            for (row, &p) in reduced.rows().iter().zip(&pivots) {
                let e = row.get(free);
                if e != 0 {
                    v.set(p, 3 - e);
                }
            }
            out.push_row(v);
        }
        out
    }

    /// True iff both matrices span the same row space.
    pub fn same_row_space(&self, other: &TernaryMatrix) -> bool {
        self.cols == other.cols && self.rref().0 == other.rref().0
    }

    /// Row vector `msg` times this matrix.
    pub fn encode(&self, msg: &[Trit]) -> TernaryVector {
        assert_eq!(msg.len(), self.nrows());
        let mut out = TernaryVector::zeros(self.cols);
        for (&c, row) in msg.iter().zip(&self.rows) {
            out.add_scaled(c, row);
        }
        out
    }
}

/// Incrementally built echelon basis. Each stored row is normalised to
/// have a 1 at its pivot and zeros before it.
pub struct EchelonBasis {
    cols: usize,
    by_pivot: Vec<Option<TernaryVector>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis {
            cols,
            by_pivot: vec![None; cols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.cols
    }

    /// Reduces `row` against the basis; returns true if it was independent.
    pub fn insert(&mut self, mut row: TernaryVector) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut word = 0;
        while let Some(c) = row.first_nonzero_from(word) {
            word = c / WORD_BITS;
            let coeff = row.get(c);
            match &self.by_pivot[c] {
                Some(b) => {
                    if coeff == 1 {
                        row.sub_assign_from(b, word);
                    } else {
                        row.add_assign_from(b, word);
                    }
                }
                None => {
                    if coeff == 2 {
                        row.neg_assign();
                    }
                    self.by_pivot[c] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_addition_matches_mod3_table() {
        let enc = |s: u8| match s {
            0 => (0u64, 0u64),
            1 => (1, 0),
            _ => (0, 1),
        };
        for a in 0..3u8 {
            for b in 0..3u8 {
                let (al, ah) = enc(a);
                let (bl, bh) = enc(b);
                assert_eq!(add_word(al, ah, bl, bh), enc((a + b) % 3), "{a}+{b}");
            }
        }
    }

    #[test]
    fn set_get_weight_and_tail() {
        let mut v = TernaryVector::zeros(130);
        v.set(0, 1);
        v.set(64, 2);
        v.set(129, 2);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.get(64), 2);
        assert_eq!(v.support(), vec![0, 64, 129]);
        v.set(64, 0);
        assert_eq!(v.weight(), 2);
        assert_eq!(v.first_nonzero(), Some(0));
    }

    #[test]
    fn dot_and_negation() {
        let a = TernaryVector::from_trits(&[1, 2, 0, 1]);
        let b = TernaryVector::from_trits(&[1, 2, 2, 2]);
        // 1 + 4 + 0 + 2 = 7 = 1
        assert_eq!(a.dot(&b), 1);
        let mut s = a.clone();
        s.sub_assign(&a);
        assert!(s.is_zero());
        assert_eq!(a.scaled(2).to_trits(), vec![2, 1, 0, 2]);
    }

    #[test]
    fn rank_and_null_space() {
        let m = TernaryMatrix::from_trit_rows(
            4,
            &[vec![1, 0, 1, 2], vec![0, 1, 1, 1], vec![1, 1, 2, 0]],
        );
        assert_eq!(m.rank(), 2);
        let ns = m.null_space();
        assert_eq!(ns.nrows(), 2);
        for x in ns.rows() {
            for r in m.rows() {
                assert_eq!(r.dot(x), 0);
            }
        }
        let (rref, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert!(rref.same_row_space(&m));
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        assert_eq!(TernaryMatrix::new(5).rank(), 0);
        assert_eq!(TernaryMatrix::new(5).null_space().nrows(), 5);
    }

    #[test]
    fn puncture_removes_positions() {
        let v = TernaryVector::from_trits(&[1, 2, 0, 1, 2]);
        assert_eq!(v.punctured(&[1, 3]).to_trits(), vec![1, 0, 2]);
        assert_eq!(v.punctured(&[]), v);
    }
}
