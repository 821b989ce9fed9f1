//! Extremal one-counts, canonical maximal constructions, greedy saturation and
//! the zigzag decomposition of maximal `12..k`-avoiding matrices.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::containment::{avoids, contains, longest_increasing_chain};
use crate::error::Error;
use crate::matrix::{BinaryMatrix, Position};
use crate::permutation::Permutation;
use crate::zigzag::{Orientation, Step, ZigzagPath};

/// Maximum number of ones in an `m x n` matrix avoiding `12..k`.
///
/// `(k-1)(m+n-(k-1))`, which for `k = 2` is `m+n-1`.
pub fn max_ones_identity_avoiding(m: usize, n: usize, k: usize) -> Result<usize, Error> {
    if k < 2 || k > m.min(n) {
        return Err(Error::domain(format!("need 2 <= k <= min(m,n), got m={m} n={n} k={k}")));
    }
    Ok((k - 1) * (m + n - (k - 1)))
}

/// Maximum number of ones in an `m x n` matrix avoiding `312`.
pub fn max_ones_312_avoiding(m: usize, n: usize) -> usize {
    if m.min(n) <= 2 {
        // no 3x3 submatrix exists, so every cell can be a one
        m * n
    } else {
        2 * (m + n - 2)
    }
}

/// Whether a closed form is a theorem or only conjectured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaStatus {
    /// The pattern does not fit; every matrix avoids it.
    Trivial,
    Proven,
    Conjectured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalValue {
    pub value: usize,
    pub status: FormulaStatus,
}

/// The eight images of `sigma` under reversal, complement and inverse. These
/// correspond to the symmetries of the square acting on matrices, all of which
/// preserve one-counts (inverse swaps `m` and `n`).
pub fn symmetry_class(sigma: &Permutation) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = Vec::with_capacity(8);
    for base in [sigma.clone(), sigma.inverse()] {
        for p in [base.clone(), base.reversal(), base.complement(), base.reversal().complement()] {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

/// Closed-form maximum one-count for `sigma`-avoiding `m x n` matrices, when
/// one is known or conjectured. Covers every pattern of length at most 3, the
/// class of `12..k`, and (conjecturally) the class of `k12..(k-1)`.
pub fn extremal_formula(m: usize, n: usize, sigma: &Permutation) -> Option<ExtremalValue> {
    let k = sigma.len();
    if k > m.min(n) {
        return Some(ExtremalValue { value: m * n, status: FormulaStatus::Trivial });
    }
    let band = (k - 1) * (m + n - (k - 1));
    let proven = |value| Some(ExtremalValue { value, status: FormulaStatus::Proven });
    match k {
        1 => proven(0),
        2 | 3 => proven(band),
        _ => {
            let class = symmetry_class(sigma);
            if class.iter().any(Permutation::is_identity) {
                proven(band)
            } else if class.iter().any(Permutation::is_max_first) {
                Some(ExtremalValue { value: band, status: FormulaStatus::Conjectured })
            } else {
                None
            }
        }
    }
}

/// Retained left-justified cell counts `e_1 <= .. <= e_m` of a staircase array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseProfile {
    n: usize,
    e: Vec<usize>,
}

impl StaircaseProfile {
    pub fn new(e: Vec<usize>, n: usize) -> Result<Self, Error> {
        if e.is_empty() {
            return Err(Error::domain("staircase needs at least one row"));
        }
        if e.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("staircase counts must be nondecreasing"));
        }
        if let Some(&big) = e.iter().find(|&&x| x > n) {
            return Err(Error::domain(format!("row count {big} exceeds n={n}")));
        }
        Ok(StaircaseProfile { n, e })
    }

    pub fn rows(&self) -> usize {
        self.e.len()
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.e
    }

    /// The retained cells as a 0/1 mask.
    pub fn mask(&self) -> BinaryMatrix {
        let mut a = BinaryMatrix::zeros(self.rows(), self.n);
        for (r, &len) in self.e.iter().enumerate() {
            for c in 0..len {
                a.set(r, c, true);
            }
        }
        a
    }
}

/// Upper bound `max_i (e_i + m - i)` on the ones of a `12`-avoiding filling of
/// a staircase array.
pub fn staircase_max_ones(profile: &StaircaseProfile) -> usize {
    let m = profile.rows();
    profile.e.iter().enumerate().map(|(i, &e)| e + m - (i + 1)).max().unwrap()
}

/// The default base path of the canonical construction: `k-2` left steps, an
/// even interleaving of the remaining left and down steps, then `k-2` down
/// steps.
pub fn canonical_base_path(m: usize, n: usize, k: usize) -> Result<ZigzagPath, Error> {
    max_ones_identity_avoiding(m, n, k)?;
    let lefts = n - 1 - (k - 2);
    let downs = m - 1 - (k - 2);
    let mut steps = vec![Step::Horizontal; k - 2];
    let (mut l, mut d) = (0, 0);
    while l + d < lefts + downs {
        let take_left = d == downs || (l < lefts && (2 * l + 1) * downs <= (2 * d + 1) * lefts);
        if take_left {
            steps.push(Step::Horizontal);
            l += 1;
        } else {
            steps.push(Step::Down);
            d += 1;
        }
    }
    steps.extend(std::iter::repeat_n(Step::Down, k - 2));
    ZigzagPath::from_steps(Orientation::RightToLeft, Position::new(1, n), &steps)
}

/// A maximal `12..k`-avoiding matrix built as the union of a complete
/// right-to-left base path and its `k-2` diagonal translates by `(s, s)`.
///
/// The base path must begin with at least `k-1` cells in row 1 and end with at
/// least `k-1` cells in column 1, so that translate `s` clips to a complete
/// path of `m+n-1-2s` cells in the trailing `(m-s) x (n-s)` block.
pub fn construct_identity_avoiding_from_path(
    m: usize,
    n: usize,
    k: usize,
    base: &ZigzagPath,
) -> Result<BinaryMatrix, Error> {
    max_ones_identity_avoiding(m, n, k)?;
    if base.orientation() != Orientation::RightToLeft || !base.is_complete(m, n) {
        return Err(Error::domain("base must be a complete right-to-left path"));
    }
    let cells = base.cells();
    let head = cells.iter().take_while(|p| p.row == 1).count();
    let tail = cells.iter().rev().take_while(|p| p.col == 1).count();
    if head < k - 1 || tail < k - 1 {
        return Err(Error::domain(format!(
            "base path needs at least {} cells in row 1 and in column 1 (has {head} and {tail})",
            k - 1
        )));
    }
    let mut a = BinaryMatrix::zeros(m, n);
    for s in 0..k - 1 {
        for p in cells {
            let (r, c) = (p.row - 1 + s, p.col - 1 + s);
            if r < m && c < n {
                a.set(r, c, true);
            }
        }
    }
    Ok(a)
}

/// The canonical maximal `12..k`-avoiding `m x n` matrix with
/// `(k-1)(m+n-(k-1))` ones.
pub fn construct_canonical_identity_avoiding(m: usize, n: usize, k: usize) -> Result<BinaryMatrix, Error> {
    let base = canonical_base_path(m, n, k)?;
    construct_identity_avoiding_from_path(m, n, k, &base)
}

/// Row-major zero positions in a seed-derived order.
fn shuffled_zeros(a: &BinaryMatrix, seed: u64) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = a.zeros_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    cells.shuffle(&mut rng);
    cells
}

/// Adds ones to a `sigma`-avoiding matrix until no zero can be flipped.
///
/// Zeros are tried once each in a seed-derived order. One pass suffices:
/// containment is monotone, so a zero whose flip is rejected stays rejected as
/// more ones arrive.
pub fn greedy_saturate(a: &BinaryMatrix, sigma: &Permutation, seed: u64) -> Result<BinaryMatrix, Error> {
    if contains(a, sigma) {
        return Err(Error::precondition(format!("input already contains {sigma}")));
    }
    let mut out = a.clone();
    for (r, c) in shuffled_zeros(a, seed) {
        out.set(r, c, true);
        if contains(&out, sigma) {
            out.set(r, c, false);
        }
    }
    Ok(out)
}

/// True iff `a` avoids `sigma` and every single 0 -> 1 flip creates it.
pub fn validate_maximal(a: &BinaryMatrix, sigma: &Permutation) -> bool {
    if contains(a, sigma) {
        return false;
    }
    let mut b = a.clone();
    for (r, c) in a.zeros_iter() {
        b.set(r, c, true);
        let blocked = contains(&b, sigma);
        b.set(r, c, false);
        if !blocked {
            return false;
        }
    }
    true
}

/// Splits a maximal `12..k`-avoiding matrix into `k-1` disjoint right-to-left
/// zigzag paths of lengths `m+n-1, m+n-3, .., m+n-(2k-3)`.
///
/// Path `j` (0-based) runs through the trailing `(m-j) x (n-j)` block from its
/// top-right to its bottom-left corner over the ones not yet taken. The walk
/// steps left whenever the cell to the left is a one and otherwise steps down,
/// so it traces the leftmost ones of each row.
pub fn peel_zigzag_decomposition(a: &BinaryMatrix, k: usize) -> Result<Vec<ZigzagPath>, Error> {
    let (m, n) = (a.rows(), a.cols());
    let expected = max_ones_identity_avoiding(m, n, k)?;
    if longest_increasing_chain(a) >= k {
        return Err(Error::domain(format!("matrix contains {}", Permutation::identity(k))));
    }
    if a.count_ones() != expected {
        return Err(Error::domain(format!("matrix has {} ones, expected {expected}", a.count_ones())));
    }
    let mut rest = a.clone();
    let mut paths = Vec::with_capacity(k - 1);
    for j in 0..k - 1 {
        let (mut r, mut c) = (j, n - 1);
        if !rest.get(r, c) {
            return Err(Error::Structural {
                position: Position::new(r + 1, c + 1),
                message: format!("path {} has no starting one", j + 1),
            });
        }
        let mut cells = vec![Position::new(r + 1, c + 1)];
        rest.set(r, c, false);
        while (r, c) != (m - 1, j) {
            if c > j && rest.get(r, c - 1) {
                c -= 1;
            } else if r + 1 < m && rest.get(r + 1, c) {
                r += 1;
            } else {
                return Err(Error::Structural {
                    position: Position::new(r + 1, c + 1),
                    message: format!("path {} cannot continue left or down", j + 1),
                });
            }
            rest.set(r, c, false);
            cells.push(Position::new(r + 1, c + 1));
        }
        paths.push(ZigzagPath::new(Orientation::RightToLeft, cells)?);
    }
    if let Some((r, c)) = rest.ones_iter().next() {
        return Err(Error::Structural {
            position: Position::new(r + 1, c + 1),
            message: "one left uncovered by the peeled paths".into(),
        });
    }
    Ok(paths)
}

/// The `n` permutations `(n..1)`, `(n-1..1, n)`, .., `(1, n..2)` whose
/// permutation matrices sum to `J_n`.
pub fn decompose_jn(n: usize) -> Vec<Permutation> {
    assert!(n >= 1);
    (0..n)
        .map(|t| {
            let values: Vec<usize> = (1..=n - t).rev().chain((n - t + 1..=n).rev()).collect();
            Permutation::new(values).expect("rotation is a permutation")
        })
        .collect()
}

/// True iff `a` avoids `sigma` (re-exported for convenience next to the constructions).
pub fn is_avoiding(a: &BinaryMatrix, sigma: &Permutation) -> bool {
    avoids(a, sigma)
}
