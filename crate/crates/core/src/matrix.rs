//! Dense (0,1)-matrices stored as rows of 64-bit words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

const WORD: usize = 64;

/// A 1-based cell index, as used in all external I/O.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub const fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

/// An `m x n` matrix over {0,1}.
///
/// Row `i` occupies `words_per_row` consecutive words of `bits`; bit `j % 64`
/// of word `j / 64` holds column `j`. Unused high bits of the last word are
/// always zero, so word-level comparisons and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    /// The zero matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        let words_per_row = cols.div_ceil(WORD);
        BinaryMatrix { rows, cols, words_per_row, bits: vec![0; rows * words_per_row] }
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut a = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                a.set(r, c, true);
            }
        }
        a
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a.set(i, i, true);
        }
        a
    }

    /// Builds a matrix from rows of booleans. All rows must have equal length.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self, Error> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::domain("matrix must have at least one row"));
        }
        let n = rows[0].as_ref().len();
        if n == 0 {
            return Err(Error::domain("matrix must have at least one column"));
        }
        let mut a = Self::zeros(m, n);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::domain(format!(
                    "row {} has {} entries, expected {}",
                    r + 1,
                    row.len(),
                    n
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                a.set(r, c, v);
            }
        }
        Ok(a)
    }

    /// Builds a matrix with a 1 at each listed 1-based position.
    pub fn from_positions(rows: usize, cols: usize, ones: &[Position]) -> Result<Self, Error> {
        let mut a = Self::zeros(rows, cols);
        for &p in ones {
            if p.row == 0 || p.col == 0 || p.row > rows || p.col > cols {
                return Err(Error::domain(format!("position ({p}) outside {rows}x{cols} matrix")));
            }
            a.set(p.row - 1, p.col - 1, true);
        }
        Ok(a)
    }

    /// Builds a matrix whose row `r` is the low `cols` bits of `masks[r]`.
    pub fn from_row_masks(cols: usize, masks: &[u64]) -> Self {
        assert!(cols <= WORD, "row masks only cover up to 64 columns");
        let mut a = Self::zeros(masks.len(), cols);
        let keep = low_mask(cols);
        for (r, &mask) in masks.iter().enumerate() {
            a.bits[r] = mask & keep;
        }
        a
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(r, c)`.
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.words_per_row + c / WORD] >> (c % WORD)) & 1 == 1
    }

    /// Entry at a 1-based position; `false` outside the matrix.
    pub fn at(&self, p: Position) -> bool {
        p.row >= 1 && p.col >= 1 && p.row <= self.rows && p.col <= self.cols && self.get(p.row - 1, p.col - 1)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let w = &mut self.bits[r * self.words_per_row + c / WORD];
        if value {
            *w |= 1 << (c % WORD);
        } else {
            *w &= !(1 << (c % WORD));
        }
    }

    /// A copy with entry `(r, c)` set to 1.
    pub fn with_one(&self, r: usize, c: usize) -> Self {
        let mut b = self.clone();
        b.set(r, c, true);
        b
    }

    /// The words backing row `r`.
    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Row `r` as a single mask. Only valid for matrices with at most 64 columns.
    #[inline]
    pub fn row_mask(&self, r: usize) -> u64 {
        debug_assert!(self.cols <= WORD);
        self.bits[r * self.words_per_row]
    }

    pub fn set_row_mask(&mut self, r: usize, mask: u64) {
        assert!(self.cols <= WORD);
        self.bits[r * self.words_per_row] = mask & low_mask(self.cols);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_count(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// 0-based coordinates of all ones in row-major order.
    pub fn ones_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| RowBits::new(self.row_words(r), 0).map(move |c| (r, c)))
    }

    /// 0-based coordinates of all zeros in row-major order.
    pub fn zeros_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).filter(move |&c| !self.get(r, c)).map(move |c| (r, c)))
    }

    /// 1-based positions of all ones.
    pub fn positions(&self) -> Vec<Position> {
        self.ones_iter().map(|(r, c)| Position::new(r + 1, c + 1)).collect()
    }

    /// Smallest column `>= from` holding a 1 in row `r`.
    #[inline]
    pub fn next_one_in_row(&self, r: usize, from: usize) -> Option<usize> {
        next_set_bit(self.row_words(r), from).filter(|&c| c < self.cols)
    }

    /// Entrywise `self <= other`.
    pub fn is_dominated_by(&self, other: &BinaryMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Entrywise OR. Panics on shape mismatch.
    pub fn union(&self, other: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        out
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for (r, c) in self.ones_iter() {
            t.set(c, r, true);
        }
        t
    }

    /// Mirror left-right: column `j` becomes column `n-1-j`.
    pub fn reverse_columns(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.rows, self.cols);
        for (r, c) in self.ones_iter() {
            t.set(r, self.cols - 1 - c, true);
        }
        t
    }

    /// Mirror top-bottom: row `i` becomes row `m-1-i`.
    pub fn reverse_rows(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.rows, self.cols);
        for (r, c) in self.ones_iter() {
            t.set(self.rows - 1 - r, c, true);
        }
        t
    }

    /// The submatrix on the given 0-based row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BinaryMatrix {
        let mut s = BinaryMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    s.set(i, j, true);
                }
            }
        }
        s
    }

    /// The text format: one line per row of '0'/'1', no whitespace.
    pub fn render(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            if r > 0 {
                s.push('\n');
            }
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
        }
        s
    }

    /// Rows in the text format, one string per row.
    pub fn render_rows(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect())
            .collect()
    }

    /// Parses the text format. Blank lines are skipped; spaces and tabs inside
    /// a line are ignored.
    pub fn parse(text: &str) -> Result<BinaryMatrix, Error> {
        let mut rows: Vec<Vec<bool>> = Vec::new();
        let mut first_line = 0;
        for (ln, line) in text.lines().enumerate() {
            let mut row = Vec::new();
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '0' => row.push(false),
                    '1' => row.push(true),
                    ' ' | '\t' | '\r' => {}
                    other => {
                        return Err(Error::Format {
                            line: ln + 1,
                            column: Some(col + 1),
                            message: format!("illegal character {other:?}"),
                        })
                    }
                }
            }
            if row.is_empty() {
                continue;
            }
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::Format {
                        line: ln + 1,
                        column: None,
                        message: format!(
                            "ragged row: {} entries, line {} has {}",
                            row.len(),
                            first_line + 1,
                            first.len()
                        ),
                    });
                }
            } else {
                first_line = ln;
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Format { line: 1, column: None, message: "empty matrix".into() });
        }
        BinaryMatrix::from_rows(&rows)
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BinaryMatrix::parse(s)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        f.write_str(&self.render())
    }
}

impl Serialize for BinaryMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.render_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<String> = Vec::deserialize(deserializer)?;
        BinaryMatrix::parse(&rows.join("\n")).map_err(serde::de::Error::custom)
    }
}

#[inline]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= WORD {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Smallest set bit index `>= from` in a multi-word bit vector.
#[inline]
pub(crate) fn next_set_bit(words: &[u64], from: usize) -> Option<usize> {
    let mut wi = from / WORD;
    if wi >= words.len() {
        return None;
    }
    let mut w = words[wi] & (u64::MAX << (from % WORD));
    loop {
        if w != 0 {
            return Some(wi * WORD + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= words.len() {
            return None;
        }
        w = words[wi];
    }
}

/// Iterator over set bit indices of a multi-word bit vector.
pub(crate) struct RowBits<'a> {
    words: &'a [u64],
    next: usize,
}

impl<'a> RowBits<'a> {
    pub(crate) fn new(words: &'a [u64], from: usize) -> Self {
        RowBits { words, next: from }
    }
}

impl Iterator for RowBits<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        let c = next_set_bit(self.words, self.next)?;
        self.next = c + 1;
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_identity_and_all_ones() {
        let i2 = BinaryMatrix::parse("10\n01").unwrap();
        assert_eq!(i2, BinaryMatrix::identity(2));
        let j3 = BinaryMatrix::parse("111\n111\n111").unwrap();
        assert_eq!(j3, BinaryMatrix::ones(3, 3));
        assert_eq!(j3.count_ones(), 9);
    }

    #[test]
    fn parse_pi3() {
        let p = BinaryMatrix::parse("001\n100\n010").unwrap();
        assert!(p.get(0, 2) && p.get(1, 0) && p.get(2, 1));
        assert_eq!(p.count_ones(), 3);
    }

    #[test]
    fn parse_ignores_interior_whitespace() {
        let a = BinaryMatrix::parse("1 0\t1\n0 1 0\n").unwrap();
        assert_eq!(a.render(), "101\n010");
    }

    #[test]
    fn ragged_rows_name_the_line() {
        match BinaryMatrix::parse("101\n01\n") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn illegal_character_reports_position() {
        match BinaryMatrix::parse("10\n0x") {
            Err(Error::Format { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, Some(2));
            }
            other => panic!("expected format error, got {other:?}"),
        }
        assert!(matches!(BinaryMatrix::parse(""), Err(Error::Format { .. })));
        assert!(matches!(BinaryMatrix::parse("  \n\n"), Err(Error::Format { .. })));
    }

    #[test]
    fn wide_rows_span_words() {
        let mut a = BinaryMatrix::zeros(2, 130);
        a.set(0, 0, true);
        a.set(0, 64, true);
        a.set(1, 129, true);
        assert_eq!(a.count_ones(), 3);
        assert_eq!(a.next_one_in_row(0, 1), Some(64));
        assert_eq!(a.next_one_in_row(1, 0), Some(129));
        assert_eq!(a.next_one_in_row(1, 130), None);
        let back = BinaryMatrix::parse(&a.render()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn symmetries() {
        let a = BinaryMatrix::parse("110\n001").unwrap();
        assert_eq!(a.reverse_columns().render(), "011\n100");
        assert_eq!(a.reverse_rows().render(), "001\n110");
        assert_eq!(a.transpose().render(), "10\n10\n01");
    }

    #[test]
    fn json_uses_row_strings() {
        let a = BinaryMatrix::parse("10\n01").unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["10","01"]"#);
        let back: BinaryMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
