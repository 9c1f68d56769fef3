//! Dense linear algebra over GF(2).
//!
//! Vectors are packed 64 bits to a word. Matrices are row-major lists of
//! such vectors. Elimination keeps one basis row per pivot, where the pivot
//! is the lowest set bit of the row; reducing a vector repeatedly clears its
//! lowest set bit until it is zero or hits a column with no pivot.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A dense vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    /// Builds a vector from a list of set positions. Repeated positions cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
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

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn lowest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn highest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    /// Adds `other` into `self` (symmetric difference).
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// Set positions in increasing order.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Lexicographic order of the sorted lists of set positions.
    ///
    /// With `x` the lowest position where the vectors differ, the vector
    /// holding `x` is smaller unless the other one has nothing above `x`,
    /// in which case the other one is a proper prefix.
    pub fn lex_cmp(&self, other: &BitVec) -> Ordering {
        assert_eq!(self.len, other.len, "length mismatch in lex_cmp");
        let first_diff = self
            .words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| i * WORD + (a ^ b).trailing_zeros() as usize);
        let Some(x) = first_diff else {
            return Ordering::Equal;
        };
        if self.get(x) {
            if other.highest_set().is_some_and(|h| h > x) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.highest_set().is_some_and(|h| h > x) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// A dense GF(2) matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    n_cols: usize,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            rows: vec![BitVec::zeros(n_cols); n_rows],
            n_cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(n_cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, n_cols })
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(n_rows: usize, cols: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(n_rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n_rows {
                return Err(Error::DimensionMismatch {
                    expected: n_rows,
                    found: c.len(),
                });
            }
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.n_rows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(c) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.n_rows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch {
                expected: self.n_cols,
                found: x.len(),
            });
        }
        Ok(BitVec::from_bools(
            &self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>(),
        ))
    }

    pub fn rank(&self) -> usize {
        f2_rank(self)
    }
}

/// Rank by Gaussian elimination.
pub fn f2_rank(m: &BitMatrix) -> usize {
    let mut ech = Echelon::new(m.n_cols(), None);
    for r in m.rows() {
        ech.insert(r.clone(), None);
    }
    ech.rank()
}

/// Returns some `x` with `m x = b`, or `None` when `b` is outside the column space.
pub fn f2_solve(m: &BitMatrix, b: &BitVec) -> Result<Option<BitVec>> {
    F2Solver::new(m).solve(b)
}

/// Factorization of a matrix's column space, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct F2Solver {
    n_rows: usize,
    ech: Echelon,
}

impl F2Solver {
    pub fn new(m: &BitMatrix) -> Self {
        let cols: Vec<BitVec> = (0..m.n_cols()).map(|j| m.column(j)).collect();
        Self::from_columns(m.n_rows(), cols)
    }

    pub fn from_columns(n_rows: usize, cols: Vec<BitVec>) -> Self {
        let n = cols.len();
        let mut ech = Echelon::new(n_rows, Some(n));
        for (j, c) in cols.into_iter().enumerate() {
            ech.insert(c, Some(BitVec::unit(n, j)));
        }
        Self { n_rows, ech }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>> {
        if b.len() != self.n_rows {
            return Err(Error::DimensionMismatch {
                expected: self.n_rows,
                found: b.len(),
            });
        }
        let (residual, combo) = self.ech.reduce(b);
        Ok(residual.is_zero().then(|| combo.expect("solver tracks combinations")))
    }

    /// Membership in the column space.
    pub fn in_span(&self, b: &BitVec) -> bool {
        self.ech.reduce(b).0.is_zero()
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: BitVec,
    combo: Option<BitVec>,
}

/// Incrementally built basis of a subspace, one row per pivot.
///
/// Each row may carry a tracking vector recording it as a combination of
/// whatever generators the caller chose to label.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    track_len: Option<usize>,
    rows: Vec<EchelonRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(dim: usize, track_len: Option<usize>) -> Self {
        Self {
            dim,
            track_len,
            rows: Vec::new(),
            pivot_row: vec![None; dim],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v`, returning the residual and the accumulated tracking vector.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, Option<BitVec>) {
        assert_eq!(v.len(), self.dim, "echelon dimension mismatch");
        let mut residual = v.clone();
        let mut combo = self.track_len.map(BitVec::zeros);
        let mut floor = 0;
        while let Some(p) = next_set_from(&residual, floor) {
            match self.pivot_row[p] {
                Some(r) => {
                    residual.xor_assign(&self.rows[r].vec);
                    if let (Some(c), Some(rc)) = (combo.as_mut(), self.rows[r].combo.as_ref()) {
                        c.xor_assign(rc);
                    }
                }
                None => floor = p + 1,
            }
        }
        (residual, combo)
    }

    /// Reduces `v` (with tracking `track`) and inserts the residual if nonzero.
    /// Returns true when the rank grew.
    pub fn insert(&mut self, v: BitVec, track: Option<BitVec>) -> bool {
        let (residual, reduced_combo) = self.reduce(&v);
        let Some(p) = residual.lowest_set() else {
            return false;
        };
        let combo = match (track, reduced_combo) {
            (Some(mut t), Some(c)) => {
                t.xor_assign(&c);
                Some(t)
            }
            (t, None) => t,
            (None, Some(c)) => Some(c),
        };
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(EchelonRow {
            vec: residual,
            combo,
        });
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Lowest set bit at or above `floor`.
fn next_set_from(v: &BitVec, floor: usize) -> Option<usize> {
    if floor >= v.len {
        return None;
    }
    let mut wi = floor / WORD;
    let mut w = v.words[wi] & (!0u64 << (floor % WORD));
    loop {
        if w != 0 {
            return Some(wi * WORD + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= v.words.len() {
            return None;
        }
        w = v.words[wi];
    }
}
