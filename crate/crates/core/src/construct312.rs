//! Maximal `312`-avoiding matrices grown from a complete left-to-right zigzag
//! path, either by recursive splitting or by the vertical shadow of the path.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::{BinaryMatrix, Position};
use crate::zigzag::{Orientation, Step, ZigzagPath};

/// One decision of the recursive construction, in original 1-based columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitChoice {
    /// Put a one in the bottom row at this column and split there.
    Split(usize),
    /// The path ends in three vertical cells: put a one just above the
    /// bottom-left corner and drop the bottom row.
    DropRow,
}

impl fmt::Display for SplitChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitChoice::Split(q) => write!(f, "split {q}"),
            SplitChoice::DropRow => f.write_str("drop"),
        }
    }
}

/// Supplies decisions to [`construct_312_maximal`]. Called only when more than
/// one option is available; returns an index into `options`.
pub trait SplitChooser {
    fn choose(&mut self, options: &[SplitChoice]) -> Result<usize, Error>;
}

/// Uniform choices from a seeded generator.
pub struct SeededChooser {
    rng: ChaCha8Rng,
}

impl SeededChooser {
    pub fn new(seed: u64) -> Self {
        SeededChooser { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl SplitChooser for SeededChooser {
    fn choose(&mut self, options: &[SplitChoice]) -> Result<usize, Error> {
        Ok(self.rng.gen_range(0..options.len()))
    }
}

/// Replays a fixed list of decisions, consumed depth first (a subproblem's own
/// decisions, then its left part, then its right part).
#[derive(Debug, Clone)]
pub struct ScriptedChooser {
    script: Vec<SplitChoice>,
    next: usize,
}

impl ScriptedChooser {
    pub fn new(script: Vec<SplitChoice>) -> Self {
        ScriptedChooser { script, next: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.script.len() - self.next
    }
}

impl SplitChooser for ScriptedChooser {
    fn choose(&mut self, options: &[SplitChoice]) -> Result<usize, Error> {
        let Some(&want) = self.script.get(self.next) else {
            return Err(Error::domain(format!("script exhausted; options were {}", list(options))));
        };
        self.next += 1;
        options
            .iter()
            .position(|&o| o == want)
            .ok_or_else(|| Error::domain(format!("scripted {want} not among {}", list(options))))
    }
}

fn list(options: &[SplitChoice]) -> String {
    options.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Checks that `path` can seed a construction in an `m x n` matrix: a complete
/// left-to-right path starting `(1,1),(1,2)` and ending `(m-1,n),(m,n)`.
pub fn validate_312_path(m: usize, n: usize, path: &ZigzagPath) -> Result<(), Error> {
    if m < 2 || n < 2 {
        return Err(Error::domain(format!("need m, n >= 2, got {m} x {n}")));
    }
    if path.orientation() != Orientation::LeftToRight || !path.is_complete(m, n) {
        return Err(Error::domain(format!("path must be a complete left-to-right path in {m} x {n}")));
    }
    let cells = path.cells();
    if cells[1] != Position::new(1, 2) {
        return Err(Error::domain("path must start with a horizontal step"));
    }
    if cells[cells.len() - 2] != Position::new(m - 1, n) {
        return Err(Error::domain("path must end with a vertical step"));
    }
    Ok(())
}

/// A uniformly shuffled complete left-to-right path that starts right and ends down.
pub fn random_lr_path(m: usize, n: usize, seed: u64) -> Result<ZigzagPath, Error> {
    if m < 2 || n < 2 {
        return Err(Error::domain(format!("need m, n >= 2, got {m} x {n}")));
    }
    let mut middle: Vec<Step> = std::iter::repeat_n(Step::Horizontal, n - 2)
        .chain(std::iter::repeat_n(Step::Down, m - 2))
        .collect();
    middle.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut steps = vec![Step::Horizontal];
    steps.extend(middle);
    steps.push(Step::Down);
    ZigzagPath::from_steps(Orientation::LeftToRight, Position::new(1, 1), &steps)
}

struct Sub {
    rows: Vec<usize>,
    cols: Vec<usize>,
    // local (row, col), from (0,0),(0,1) to (h-2,w-1),(h-1,w-1)
    path: Vec<(usize, usize)>,
}

/// Builds a maximal `312`-avoiding `m x n` matrix with `2(m+n-2)` ones
/// containing `path`.
///
/// Each subproblem is a block whose path runs from its top-left corner to its
/// bottom-right corner and whose bottom-left corner is a one. A block that is
/// not `2 x 2` either splits at an interior column `q`, adding a one at the
/// bottom of column `q` and recursing on the blocks left and right of the
/// path's last cell in that column, or (when the path ends in three vertical
/// cells) adds a one just above its bottom-left corner and drops its bottom row.
pub fn construct_312_maximal(
    m: usize,
    n: usize,
    path: &ZigzagPath,
    chooser: &mut dyn SplitChooser,
) -> Result<BinaryMatrix, Error> {
    validate_312_path(m, n, path)?;
    let mut a = BinaryMatrix::zeros(m, n);
    let mut stack = vec![Sub {
        rows: (0..m).collect(),
        cols: (0..n).collect(),
        path: path.cells().iter().map(|p| (p.row - 1, p.col - 1)).collect(),
    }];
    while let Some(mut sub) = stack.pop() {
        for &(r, c) in &sub.path {
            a.set(sub.rows[r], sub.cols[c], true);
        }
        loop {
            let (h, w) = (sub.rows.len(), sub.cols.len());
            a.set(sub.rows[h - 1], sub.cols[0], true);
            if h == 2 && w == 2 {
                break;
            }
            let len = sub.path.len();
            let mut options: Vec<SplitChoice> = (1..w - 1).map(|q| SplitChoice::Split(sub.cols[q] + 1)).collect();
            if h >= 3 && sub.path[len - 3].1 == w - 1 {
                options.push(SplitChoice::DropRow);
            }
            let pick = if options.len() == 1 { 0 } else { chooser.choose(&options)? };
            match options[pick] {
                SplitChoice::DropRow => {
                    sub.rows.pop();
                    sub.path.pop();
                }
                SplitChoice::Split(orig) => {
                    let q = sub.cols.iter().position(|&c| c == orig - 1).unwrap();
                    a.set(sub.rows[h - 1], sub.cols[q], true);
                    let at = sub.path.iter().rposition(|&(_, c)| c == q).unwrap();
                    let p = sub.path[at].0;
                    let mut left_rows = sub.rows[..=p].to_vec();
                    left_rows.push(sub.rows[h - 1]);
                    let mut left_path = sub.path[..=at].to_vec();
                    left_path.push((p + 1, q));
                    let right = Sub {
                        rows: sub.rows[p..].to_vec(),
                        cols: sub.cols[q..].to_vec(),
                        path: sub.path[at..].iter().map(|&(r, c)| (r - p, c - q)).collect(),
                    };
                    let left = Sub { rows: left_rows, cols: sub.cols[..=q].to_vec(), path: left_path };
                    stack.push(right);
                    stack.push(left);
                    break;
                }
            }
        }
    }
    Ok(a)
}

/// [`construct_312_maximal`] with uniform seeded choices.
pub fn construct_312_maximal_seeded(m: usize, n: usize, path: &ZigzagPath, seed: u64) -> Result<BinaryMatrix, Error> {
    construct_312_maximal(m, n, path, &mut SeededChooser::new(seed))
}

/// [`construct_312_maximal`] replaying `script`, which must be used up exactly.
pub fn construct_312_maximal_scripted(
    m: usize,
    n: usize,
    path: &ZigzagPath,
    script: Vec<SplitChoice>,
) -> Result<BinaryMatrix, Error> {
    let mut chooser = ScriptedChooser::new(script);
    let a = construct_312_maximal(m, n, path, &mut chooser)?;
    if chooser.remaining() > 0 {
        return Err(Error::domain(format!("{} scripted choices left unused", chooser.remaining())));
    }
    Ok(a)
}

/// The path, each cell entered by a down step shifted one column left, and the
/// rest of the bottom row: a maximal `312`-avoiding matrix with `2(m+n-2)` ones.
pub fn construct_312_shadow(m: usize, n: usize, path: &ZigzagPath) -> Result<BinaryMatrix, Error> {
    validate_312_path(m, n, path)?;
    let mut a = BinaryMatrix::zeros(m, n);
    for w in path.cells().windows(2) {
        a.set(w[0].row - 1, w[0].col - 1, true);
        if w[1].col == w[0].col {
            a.set(w[1].row - 1, w[1].col - 2, true);
        }
    }
    for c in 0..n {
        a.set(m - 1, c, true);
    }
    Ok(a)
}
