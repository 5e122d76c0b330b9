//! Dense linear algebra over GF(2).
//!
//! Bits are packed row-major into `u64` words, bit `i` of a row living in
//! word `i / 64` at position `i % 64`. Row operations are word-wide XORs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Errors raised by GF(2) operations and the matrix text format.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("matrix is rank deficient (rank {rank} < {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("invalid bit character {0:?}")]
    InvalidBit(String),
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// A binary vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinVec {
    len: usize,
    words: Vec<u64>,
}

impl BinVec {
    pub fn zeros(len: usize) -> Self {
        BinVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 values. Any nonzero entry is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BinVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a length-`len` vector whose bit 0 is the most significant bit of
    /// `value`, so that numeric order of `value` is lexicographic order of the
    /// vector.
    pub fn from_msb_first(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = BinVec::zeros(len);
        for i in 0..len {
            if (value >> (len - 1 - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Inverse of [`BinVec::from_msb_first`].
    pub fn to_msb_first(&self) -> u64 {
        assert!(self.len <= 64);
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
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
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// XORs `other` into `self`. Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BinVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        self.xor_words(&other.words);
    }

    #[inline]
    pub(crate) fn xor_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &BinVec) -> BinVec {
        let mut out = BinVec::zeros(self.len + other.len);
        for (i, b) in self.iter().chain(other.iter()).enumerate() {
            if b {
                out.set(i, true);
            }
        }
        out
    }

    /// Bits at positions `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> BinVec {
        let mut out = BinVec::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Gathers the bits at the given positions.
    pub fn select(&self, positions: impl IntoIterator<Item = usize>) -> BinVec {
        let bits: Vec<u8> = positions.into_iter().map(|p| self.get(p) as u8).collect();
        BinVec::from_bits(&bits)
    }

    /// Number of positions where `self` and `other` differ.
    pub fn distance(&self, other: &BinVec) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

impl fmt::Debug for BinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinVec({self})")
    }
}

impl fmt::Display for BinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinVec {
    type Err = Gf2Error;

    /// Parses a string of `0`/`1` characters; whitespace and commas are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() || c == ',' => {}
                c => return Err(Gf2Error::InvalidBit(c.to_string())),
            }
        }
        Ok(BinVec::from_bits(&bits))
    }
}

impl PartialOrd for BinVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on bit positions `0, 1, 2, …`, then by length.
impl Ord for BinVec {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                return a.reverse_bits().cmp(&b.reverse_bits());
            }
        }
        self.len.cmp(&other.len)
    }
}

/// A dense binary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, Gf2Error> {
        if rows == 0 || cols == 0 {
            return Err(Gf2Error::EmptyMatrix);
        }
        let stride = words_for(cols);
        Ok(BinMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        })
    }

    pub fn identity(n: usize) -> Result<Self, Gf2Error> {
        let mut m = BinMatrix::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from equal-length rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut m = BinMatrix::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn from_binvecs(rows: &[BinVec]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map(BinVec::len).unwrap_or(0);
        let mut m = BinMatrix::zeros(rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(row.words());
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BinVec {
        BinVec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BinVec) {
        assert_eq!(v.len(), self.cols);
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let (s, d) = (src * self.stride, dst * self.stride);
        for w in 0..self.stride {
            let x = self.data[s + w];
            self.data[d + w] ^= x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_range(&self, start: usize, end: usize) -> Result<BinMatrix, Gf2Error> {
        let mut out = BinMatrix::zeros(end.saturating_sub(start), self.cols)?;
        out.data
            .copy_from_slice(&self.data[start * self.stride..end * self.stride]);
        Ok(out)
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_range(&self, start: usize, end: usize) -> Result<BinMatrix, Gf2Error> {
        let mut out = BinMatrix::zeros(self.rows, end.saturating_sub(start))?;
        for r in 0..self.rows {
            for c in start..end {
                if self.get(r, c) {
                    out.set(r, c - start, true);
                }
            }
        }
        Ok(out)
    }

    /// Returns the matrix whose column `j` is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<BinMatrix, Gf2Error> {
        if perm.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: perm.len(),
            });
        }
        let mut out = BinMatrix::zeros(self.rows, self.cols)?;
        for r in 0..self.rows {
            for (j, &src) in perm.iter().enumerate() {
                if self.get(r, src) {
                    out.set(r, j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.cols, self.rows).expect("nonempty");
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            let row = encode(&self.row(r), other)?;
            out.set_row(r, &row);
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BinMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Whether the leading `rows × rows` block is the identity.
    pub fn is_systematic(&self) -> bool {
        self.rows <= self.cols
            && (0..self.rows).all(|r| (0..self.rows).all(|c| self.get(r, c) == (r == c)))
    }

    /// In-place Gauss-Jordan elimination to reduced row echelon form.
    ///
    /// Pivots are taken leftmost column first and, within a column, from the
    /// lowest available row index. Returns the pivot columns in order.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, next);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Serializes to the plain-text matrix format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the plain-text matrix format: a `rows cols` header line followed
    /// by `rows` lines of space-separated `0`/`1` entries.
    pub fn from_text(text: &str) -> Result<BinMatrix, Gf2Error> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let (m, _) = parse_matrix_lines(&mut lines)?;
        if lines.next().is_some() {
            return Err(Gf2Error::Parse("trailing content after matrix".into()));
        }
        Ok(m)
    }
}

/// Reads a matrix from the head of a line iterator. Returns the matrix and the
/// number of lines consumed.
pub(crate) fn parse_matrix_lines<'a, I>(lines: &mut I) -> Result<(BinMatrix, usize), Gf2Error>
where
    I: Iterator<Item = &'a str>,
{
    let header = lines
        .next()
        .ok_or_else(|| Gf2Error::Parse("missing header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| Gf2Error::Parse(format!("bad header {header:?}: {e}")))?;
    let [rows, cols] = dims[..] else {
        return Err(Gf2Error::Parse(format!(
            "header must be `rows cols`, got {header:?}"
        )));
    };
    let mut m = BinMatrix::zeros(rows, cols)?;
    for r in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Gf2Error::Parse(format!("expected {rows} rows, got {r}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Gf2Error::Parse(format!(
                "row {r} has {} entries, expected {cols}",
                entries.len()
            )));
        }
        for (c, e) in entries.iter().enumerate() {
            match *e {
                "0" => {}
                "1" => m.set(r, c, true),
                other => return Err(Gf2Error::InvalidBit(other.to_string())),
            }
        }
    }
    Ok((m, rows + 1))
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<&str> = (0..self.cols)
                .map(|c| if self.get(r, c) { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for BinMatrix {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BinMatrix::from_text(s)
    }
}

/// Computes `u·G` over GF(2).
pub fn encode(u: &BinVec, g: &BinMatrix) -> Result<BinVec, Gf2Error> {
    if u.len() != g.rows() {
        return Err(Gf2Error::DimensionMismatch {
            expected: g.rows(),
            got: u.len(),
        });
    }
    let mut v = BinVec::zeros(g.cols());
    for r in (0..g.rows()).filter(|&r| u.get(r)) {
        v.xor_words(g.row_words(r));
    }
    Ok(v)
}

/// GF(2) rank.
pub fn rank(g: &BinMatrix) -> usize {
    let mut m = g.clone();
    m.reduce().len()
}

/// Brings a full-row-rank matrix into systematic form `(I | B)`.
///
/// Returns the systematic matrix and the column permutation `perm` such that
/// column `j` of the result is a column `perm[j]` of a row-equivalent form of
/// `g`. Pivot columns come first, then the remaining columns in their original
/// order. The row space of `g.permute_columns(&perm)` equals that of the
/// result.
pub fn to_systematic(g: &BinMatrix) -> Result<(BinMatrix, Vec<usize>), Gf2Error> {
    let mut m = g.clone();
    let pivots = m.reduce();
    if pivots.len() < g.rows() {
        return Err(Gf2Error::RankDeficient {
            rank: pivots.len(),
            rows: g.rows(),
        });
    }
    let perm = pivot_permutation(&pivots, g.cols());
    let sys = m.permute_columns(&perm)?;
    Ok((sys, perm))
}

fn pivot_permutation(pivots: &[usize], cols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    pivots
        .iter()
        .copied()
        .chain((0..cols).filter(|&c| !is_pivot[c]))
        .collect()
}

/// Whether `a` and `b` generate the same code.
pub fn rowspace_equal(a: &BinMatrix, b: &BinMatrix) -> bool {
    if a.cols() != b.cols() {
        return false;
    }
    let ra = rank(a);
    ra == rank(b) && ra == rank(&a.vstack(b).expect("same width"))
}

/// Derives a systematic generator `(I_k | Aᵀ)` from a parity-check matrix.
///
/// `h` may be rank deficient. The returned permutation puts the information
/// (non-pivot) columns of `h` first, then its pivot columns; the generator
/// spans the null space of `h.permute_columns(&perm)`.
pub fn generator_from_parity_check(h: &BinMatrix) -> Result<(BinMatrix, Vec<usize>), Gf2Error> {
    let mut m = h.clone();
    let pivots = m.reduce();
    let n = h.cols();
    let r = pivots.len();
    let k = n - r;
    if k == 0 {
        return Err(Gf2Error::EmptyMatrix);
    }
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let perm: Vec<usize> = info.iter().chain(pivots.iter()).copied().collect();
    let mut g = BinMatrix::zeros(k, n)?;
    for (i, &col) in info.iter().enumerate() {
        g.set(i, i, true);
        // Pivot row `j` of the reduced H reads  x_{pivot j} = Σ A[j][info] x_info.
        for j in 0..r {
            if m.get(j, col) {
                g.set(i, k + j, true);
            }
        }
    }
    Ok((g, perm))
}

/// Derives a parity-check matrix for the code generated by a full-rank `g`.
pub fn parity_check_from_generator(g: &BinMatrix) -> Result<BinMatrix, Gf2Error> {
    let (sys, perm) = to_systematic(g)?;
    let (k, n) = (sys.rows(), sys.cols());
    if k == n {
        return Err(Gf2Error::EmptyMatrix);
    }
    // In permuted coordinates H' = (Bᵀ | I_{n-k}); undo the permutation.
    let mut h = BinMatrix::zeros(n - k, n)?;
    for j in 0..n - k {
        for i in 0..k {
            if sys.get(i, k + j) {
                h.set(j, perm[i], true);
            }
        }
        h.set(j, perm[k + j], true);
    }
    Ok(h)
}
