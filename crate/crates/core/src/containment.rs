//! Pattern containment for matrices and sequences.
//!
//! A matrix contains `sigma = (p_1..p_k)` when there are rows `t_1 < .. < t_k`
//! and columns `c_1 < .. < c_k` with a 1 at every `(t_i, c_{p_i})`. The generic
//! search assigns pattern rows in order to ascending matrix rows and keeps each
//! candidate column inside the window left open by the pattern values already
//! placed, so the unplaced values on either side still have room.

use crate::matrix::{next_set_bit, BinaryMatrix};
use crate::permutation::Permutation;

/// Row-indexed 0/1 data searched by the embedding engine.
trait RowSource {
    fn height(&self) -> usize;
    fn width(&self) -> usize;
    /// Smallest column in `[from, to]` holding a 1 in row `t`.
    fn next_in(&self, t: usize, from: usize, to: usize) -> Option<usize>;
}

struct MatrixRows<'a> {
    a: &'a BinaryMatrix,
    height: usize,
}

impl RowSource for MatrixRows<'_> {
    #[inline]
    fn height(&self) -> usize {
        self.height
    }
    #[inline]
    fn width(&self) -> usize {
        self.a.cols()
    }
    #[inline]
    fn next_in(&self, t: usize, from: usize, to: usize) -> Option<usize> {
        next_set_bit(self.a.row_words(t), from).filter(|&c| c <= to)
    }
}

/// A sequence of distinct 1-based values viewed as a partial permutation matrix.
struct SequenceRows<'a> {
    seq: &'a [usize],
    width: usize,
}

impl RowSource for SequenceRows<'_> {
    #[inline]
    fn height(&self) -> usize {
        self.seq.len()
    }
    #[inline]
    fn width(&self) -> usize {
        self.width
    }
    #[inline]
    fn next_in(&self, t: usize, from: usize, to: usize) -> Option<usize> {
        let c = self.seq[t] - 1;
        (from <= c && c <= to).then_some(c)
    }
}

struct Embedder<'a, R> {
    rows: &'a R,
    /// 0-based pattern values in row order.
    pattern: Vec<usize>,
    /// Column assigned to each pattern value, if placed.
    placed: Vec<Option<usize>>,
    /// When set, the last pattern row must land on the last source row.
    pin_last: bool,
}

impl<'a, R: RowSource> Embedder<'a, R> {
    fn new(rows: &'a R, sigma: &Permutation, pin_last: bool) -> Self {
        Embedder {
            rows,
            pattern: sigma.values().iter().map(|v| v - 1).collect(),
            placed: vec![None; sigma.len()],
            pin_last,
        }
    }

    fn run(&mut self) -> bool {
        let k = self.pattern.len();
        if k > self.rows.height() || k > self.rows.width() {
            return false;
        }
        self.place(0, 0)
    }

    /// Column window for pattern value `v` given the values already placed.
    fn window(&self, v: usize) -> Option<(usize, usize)> {
        let k = self.pattern.len();
        let lo = (0..v)
            .rev()
            .find_map(|u| self.placed[u].map(|c| c + (v - u)))
            .unwrap_or(v);
        let hi = match (v + 1..k).find_map(|w| self.placed[w].map(|c| (w, c))) {
            Some((w, c)) => c.checked_sub(w - v)?,
            None => self.rows.width().checked_sub(k - v)?,
        };
        (lo <= hi).then_some((lo, hi))
    }

    fn place(&mut self, i: usize, first_row: usize) -> bool {
        let k = self.pattern.len();
        if i == k {
            return true;
        }
        let v = self.pattern[i];
        let Some((lo, hi)) = self.window(v) else { return false };
        let h = self.rows.height();
        let last_row = h - (k - i);
        let row_range = if self.pin_last && i == k - 1 { h - 1..=h - 1 } else { first_row..=last_row };
        for t in row_range {
            if t < first_row {
                continue;
            }
            let mut from = lo;
            while let Some(c) = self.rows.next_in(t, from, hi) {
                self.placed[v] = Some(c);
                if self.place(i + 1, t + 1) {
                    self.placed[v] = None;
                    return true;
                }
                from = c + 1;
            }
            self.placed[v] = None;
        }
        false
    }
}

/// Generic containment of `sigma` in `a` by backtracking over rows.
pub fn contains_pattern(a: &BinaryMatrix, sigma: &Permutation) -> bool {
    let rows = MatrixRows { a, height: a.rows() };
    Embedder::new(&rows, sigma, false).run()
}

/// Containment within the first `height` rows of `a`, using row `height - 1`
/// for the last pattern row. Used by row-by-row searches that only need to
/// test occurrences created by the newest row.
pub fn contains_pattern_ending_at_row(a: &BinaryMatrix, height: usize, sigma: &Permutation) -> bool {
    assert!(height >= 1 && height <= a.rows());
    let rows = MatrixRows { a, height };
    Embedder::new(&rows, sigma, true).run()
}

/// Containment of `sigma` in a sequence of distinct positive values.
pub fn sequence_contains(seq: &[usize], sigma: &Permutation) -> bool {
    let width = seq.iter().copied().max().unwrap_or(0);
    let rows = SequenceRows { seq, width };
    Embedder::new(&rows, sigma, false).run()
}

/// Containment of `sigma` in `seq` by an occurrence that uses the last element.
pub fn sequence_contains_ending_at_last(seq: &[usize], sigma: &Permutation) -> bool {
    if seq.is_empty() {
        return false;
    }
    let width = seq.iter().copied().max().unwrap_or(0);
    let rows = SequenceRows { seq, width };
    Embedder::new(&rows, sigma, true).run()
}

/// Length of the longest chain of ones strictly increasing in both row and
/// column. A matrix avoids `12..k` exactly when this is below `k`.
pub fn longest_increasing_chain(a: &BinaryMatrix) -> usize {
    let n = a.cols();
    // best[c]: longest chain among earlier rows ending in a column <= c.
    let mut best = vec![0usize; n];
    let mut row_vals = vec![0usize; n];
    for r in 0..a.rows() {
        let mut touched = false;
        for c in crate::matrix::RowBits::new(a.row_words(r), 0) {
            row_vals[c] = 1 + if c > 0 { best[c - 1] } else { 0 };
            touched = true;
        }
        if !touched {
            continue;
        }
        let mut run = 0;
        for c in 0..n {
            if row_vals[c] > 0 {
                run = run.max(row_vals[c]);
                row_vals[c] = 0;
            }
            run = run.max(best[c]);
            best[c] = run;
        }
    }
    best.last().copied().unwrap_or(0)
}

/// Specialized test for the pattern `312`.
///
/// For each column `j` the topmost 1 is the best candidate for the `3`. For
/// every lower row, its leftmost 1 (left of `j`) is the best `1`; a `2` then
/// exists iff some column strictly between has a 1 below that row, which is
/// read off the per-column lowest-1 table.
pub fn contains_312(a: &BinaryMatrix) -> bool {
    let (m, n) = (a.rows(), a.cols());
    if m < 3 || n < 3 {
        return false;
    }
    let mut top: Vec<Option<usize>> = vec![None; n];
    let mut lowest: Vec<Option<usize>> = vec![None; n];
    for (r, c) in a.ones_iter() {
        top[c].get_or_insert(r);
        lowest[c] = Some(r);
    }
    let leftmost: Vec<Option<usize>> = (0..m).map(|r| a.next_one_in_row(r, 0)).collect();
    for j in 2..n {
        let Some(t) = top[j] else { continue };
        for r2 in t + 1..m.saturating_sub(1) {
            let Some(c1) = leftmost[r2] else { continue };
            if c1 + 1 >= j {
                continue;
            }
            if (c1 + 1..j).any(|c2| lowest[c2].is_some_and(|low| low > r2)) {
                return true;
            }
        }
    }
    false
}

/// Containment with the fastest available checker for `sigma`.
pub fn contains(a: &BinaryMatrix, sigma: &Permutation) -> bool {
    let k = sigma.len();
    if k == 1 {
        !a.is_zero()
    } else if sigma.is_identity() {
        longest_increasing_chain(a) >= k
    } else if sigma.values() == [3, 1, 2] {
        contains_312(a)
    } else {
        contains_pattern(a, sigma)
    }
}

#[inline]
pub fn avoids(a: &BinaryMatrix, sigma: &Permutation) -> bool {
    !contains(a, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::all_permutations;

    fn p(w: &str) -> Permutation {
        w.parse().unwrap()
    }

    fn m(s: &str) -> BinaryMatrix {
        BinaryMatrix::parse(s).unwrap()
    }

    /// Direct definition: try every row subset and column subset.
    fn brute_contains(a: &BinaryMatrix, sigma: &Permutation) -> bool {
        let k = sigma.len();
        let (rows, cols) = (a.rows(), a.cols());
        if k > rows || k > cols {
            return false;
        }
        let subsets = |n: usize| -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == k)
                .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
                .collect()
        };
        let rs = subsets(rows);
        let cs = subsets(cols);
        rs.iter().any(|t| {
            cs.iter().any(|c| (0..k).all(|i| a.get(t[i], c[sigma.values()[i] - 1])))
        })
    }

    fn twozigzags_first() -> BinaryMatrix {
        m("000111\n001111\n001110\n011100\n111100\n111000")
    }

    fn three_first() -> BinaryMatrix {
        m("11000\n11000\n11000\n11111\n11111")
    }

    #[test]
    fn identity_contains_itself() {
        assert!(contains_pattern(&BinaryMatrix::identity(3), &p("123")));
    }

    #[test]
    fn twozigzags_matrix_avoids_123() {
        let a = twozigzags_first();
        assert_eq!(a.count_ones(), 20);
        assert!(!contains_pattern(&a, &p("123")));
        assert_eq!(longest_increasing_chain(&a), 2);
    }

    #[test]
    fn all_ones_contains_every_fitting_pattern() {
        let j3 = BinaryMatrix::ones(3, 3);
        for sigma in all_permutations(3) {
            assert!(contains_pattern(&j3, &sigma));
        }
        assert!(!contains_pattern(&j3, &p("1234")));
    }

    #[test]
    fn chain_lengths() {
        for n in 1..6 {
            assert_eq!(longest_increasing_chain(&BinaryMatrix::ones(n, n)), n);
        }
        assert_eq!(longest_increasing_chain(&BinaryMatrix::zeros(4, 5)), 0);
    }

    #[test]
    fn specialized_312() {
        assert!(contains_312(&p("312").to_matrix()));
        assert!(!contains_312(&three_first()));
        assert!(!contains_312(&BinaryMatrix::identity(3)));
    }

    #[test]
    fn singleton_pattern() {
        let one = p("1");
        assert!(!contains(&BinaryMatrix::zeros(2, 2), &one));
        assert!(contains(&BinaryMatrix::identity(2), &one));
        assert!(contains_pattern(&BinaryMatrix::identity(2), &one));
        assert!(!contains_pattern(&BinaryMatrix::zeros(2, 2), &one));
    }

    #[test]
    fn oversized_pattern_is_never_contained() {
        assert!(!contains_pattern(&BinaryMatrix::ones(2, 5), &p("123")));
        assert!(!contains_pattern(&BinaryMatrix::ones(5, 2), &p("312")));
    }

    #[test]
    fn generic_matches_definition_exhaustively_3x3() {
        let pats: Vec<Permutation> =
            ["1", "12", "21"].iter().map(|w| p(w)).chain(all_permutations(3)).collect();
        for bits in 0u32..1 << 9 {
            let masks: Vec<u64> = (0..3).map(|r| ((bits >> (3 * r)) & 7) as u64).collect();
            let a = BinaryMatrix::from_row_masks(3, &masks);
            for sigma in &pats {
                assert_eq!(contains_pattern(&a, sigma), brute_contains(&a, sigma), "{a:?} {sigma}");
                assert_eq!(contains(&a, sigma), brute_contains(&a, sigma), "{a:?} {sigma}");
            }
        }
    }

    #[test]
    fn ending_at_row_matches_difference() {
        let a = m("0110\n1001\n0110\n1010");
        let sigma = p("213");
        for h in 1..=4 {
            let mut prefix = BinaryMatrix::zeros(h, 4);
            for r in 0..h {
                prefix.set_row_mask(r, a.row_mask(r));
            }
            let shorter = if h > 1 {
                let mut s = BinaryMatrix::zeros(h - 1, 4);
                for r in 0..h - 1 {
                    s.set_row_mask(r, a.row_mask(r));
                }
                contains_pattern(&s, &sigma)
            } else {
                false
            };
            let full = contains_pattern(&prefix, &sigma);
            let last = contains_pattern_ending_at_row(&a, h, &sigma);
            assert_eq!(full, shorter || last);
        }
    }

    #[test]
    fn sequences() {
        let sigma = p("312");
        assert!(sequence_contains(&[3, 1, 2], &sigma));
        assert!(sequence_contains(&[5, 6, 3, 4, 1, 2], &sigma));
        assert!(!sequence_contains(&[2, 4, 5, 6, 3, 1], &sigma));
        assert!(!sequence_contains(&[4, 6, 1], &sigma));
        assert!(sequence_contains_ending_at_last(&[4, 1, 9, 2], &sigma));
        assert!(!sequence_contains_ending_at_last(&[4, 1, 2, 9], &sigma));
        for perm in all_permutations(5) {
            let a = perm.to_matrix();
            for sigma in all_permutations(3) {
                assert_eq!(sequence_contains(perm.values(), &sigma), contains_pattern(&a, &sigma));
            }
        }
    }
}
