//! Monotone staircase paths of ones.
//!
//! Paths are named by their endpoints: a right-to-left (`RL`) path runs from
//! the top-right towards the bottom-left, stepping one column left or one row
//! down; a left-to-right (`LR`) path runs from the top-left towards the
//! bottom-right, stepping one column right or one row down. Cells are listed
//! from the top end.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::{BinaryMatrix, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "RL")]
    RightToLeft,
    #[serde(rename = "LR")]
    LeftToRight,
}

impl Orientation {
    pub fn tag(self) -> &'static str {
        match self {
            Orientation::RightToLeft => "RL",
            Orientation::LeftToRight => "LR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Horizontal,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZigzagPath {
    orientation: Orientation,
    cells: Vec<Position>,
}

impl ZigzagPath {
    /// Validates that consecutive cells are single steps in the given orientation.
    pub fn new(orientation: Orientation, cells: Vec<Position>) -> Result<Self, Error> {
        if cells.is_empty() {
            return Err(Error::domain("zigzag path must have at least one cell"));
        }
        if let Some(bad) = cells.iter().find(|p| p.row == 0 || p.col == 0) {
            return Err(Error::domain(format!("position ({bad}) is not 1-based")));
        }
        for w in cells.windows(2) {
            let (a, b) = (w[0], w[1]);
            let horizontal = match orientation {
                Orientation::RightToLeft => b.row == a.row && b.col + 1 == a.col,
                Orientation::LeftToRight => b.row == a.row && b.col == a.col + 1,
            };
            let down = b.row == a.row + 1 && b.col == a.col;
            if !horizontal && !down {
                return Err(Error::domain(format!(
                    "({b}) does not follow ({a}) by one {} or down step",
                    if orientation == Orientation::RightToLeft { "left" } else { "right" }
                )));
            }
        }
        Ok(ZigzagPath { orientation, cells })
    }

    /// Builds a path from its start cell and a step sequence.
    pub fn from_steps(orientation: Orientation, start: Position, steps: &[Step]) -> Result<Self, Error> {
        let mut cells = Vec::with_capacity(steps.len() + 1);
        let mut cur = start;
        cells.push(cur);
        for &s in steps {
            cur = match (s, orientation) {
                (Step::Down, _) => Position::new(cur.row + 1, cur.col),
                (Step::Horizontal, Orientation::LeftToRight) => Position::new(cur.row, cur.col + 1),
                (Step::Horizontal, Orientation::RightToLeft) => {
                    if cur.col <= 1 {
                        return Err(Error::domain("path steps left of column 1"));
                    }
                    Position::new(cur.row, cur.col - 1)
                }
            };
            cells.push(cur);
        }
        ZigzagPath::new(orientation, cells)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn cells(&self) -> &[Position] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn first(&self) -> Position {
        self.cells[0]
    }

    pub fn last(&self) -> Position {
        *self.cells.last().unwrap()
    }

    pub fn steps(&self) -> Vec<Step> {
        self.cells
            .windows(2)
            .map(|w| if w[1].row == w[0].row { Step::Horizontal } else { Step::Down })
            .collect()
    }

    /// True when the path joins the two corners of an `m x n` matrix that its
    /// orientation names, which forces exactly `m + n - 1` cells.
    pub fn is_complete(&self, m: usize, n: usize) -> bool {
        let (start, end) = match self.orientation {
            Orientation::RightToLeft => (Position::new(1, n), Position::new(m, 1)),
            Orientation::LeftToRight => (Position::new(1, 1), Position::new(m, n)),
        };
        self.first() == start && self.last() == end
    }

    /// Smallest `(rows, cols)` that holds every cell.
    pub fn extent(&self) -> (usize, usize) {
        let rows = self.cells.iter().map(|p| p.row).max().unwrap();
        let cols = self.cells.iter().map(|p| p.col).max().unwrap();
        (rows, cols)
    }

    pub fn to_matrix(&self, m: usize, n: usize) -> Result<BinaryMatrix, Error> {
        BinaryMatrix::from_positions(m, n, &self.cells)
    }

    /// Text form: an `RL`/`LR` header line then one `r,c` pair per line.
    pub fn render(&self) -> String {
        let mut s = String::from(self.orientation.tag());
        for p in &self.cells {
            s.push('\n');
            s.push_str(&p.to_string());
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((hl, header)) = lines.next() else {
            return Err(Error::format("empty path file"));
        };
        let orientation = match header.trim() {
            "RL" => Orientation::RightToLeft,
            "LR" => Orientation::LeftToRight,
            other => {
                return Err(Error::Format {
                    line: hl + 1,
                    column: None,
                    message: format!("expected RL or LR header, found {other:?}"),
                })
            }
        };
        let mut cells = Vec::new();
        for (ln, line) in lines {
            let bad = |msg: String| Error::Format { line: ln + 1, column: None, message: msg };
            let (r, c) = line.trim().split_once(',').ok_or_else(|| bad(format!("expected r,c in {line:?}")))?;
            let row = r.trim().parse::<usize>().map_err(|_| bad(format!("bad row {r:?}")))?;
            let col = c.trim().parse::<usize>().map_err(|_| bad(format!("bad column {c:?}")))?;
            cells.push(Position::new(row, col));
        }
        ZigzagPath::new(orientation, cells).map_err(|e| match e {
            Error::Domain(msg) => Error::format(msg),
            other => other,
        })
    }
}

impl fmt::Display for ZigzagPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// If the ones of `a` form exactly one complete right-to-left zigzag path,
/// returns it.
///
/// Every one other than the bottom-left corner must have a one immediately to
/// its left or immediately below, but not both; the walk from the top-right
/// corner then has to visit every one.
pub fn recognize_zigzag(a: &BinaryMatrix) -> Option<ZigzagPath> {
    let (m, n) = (a.rows(), a.cols());
    if a.count_ones() != m + n - 1 || !a.get(0, n - 1) || !a.get(m - 1, 0) {
        return None;
    }
    let (mut r, mut c) = (0, n - 1);
    let mut cells = vec![Position::new(1, n)];
    while (r, c) != (m - 1, 0) {
        let left = c > 0 && a.get(r, c - 1);
        let down = r + 1 < m && a.get(r + 1, c);
        match (left, down) {
            (true, false) => c -= 1,
            (false, true) => r += 1,
            _ => return None,
        }
        cells.push(Position::new(r + 1, c + 1));
    }
    (cells.len() == m + n - 1).then(|| ZigzagPath { orientation: Orientation::RightToLeft, cells })
}

/// Crucial ones are where a horizontal run of the path turns downward; each
/// has a corner position one row down and one column back toward the path's
/// start side. Returns the two parallel lists.
pub fn crucial_and_corner_ones(path: &ZigzagPath) -> Result<(Vec<Position>, Vec<Position>), Error> {
    let cells = path.cells();
    let (rows, cols) = path.extent();
    let mut crucial = Vec::new();
    let mut corner = Vec::new();
    for i in 1..cells.len().saturating_sub(1) {
        let (prev, cur, next) = (cells[i - 1], cells[i], cells[i + 1]);
        if prev.row == cur.row && next.row == cur.row + 1 {
            let corner_col = match path.orientation() {
                Orientation::LeftToRight => cur.col.checked_sub(1),
                Orientation::RightToLeft => Some(cur.col + 1),
            };
            let pos = match corner_col {
                Some(c) if c >= 1 && c <= cols && cur.row < rows => Position::new(cur.row + 1, c),
                _ => {
                    return Err(Error::Structural {
                        position: cur,
                        message: "corner position falls outside the matrix".into(),
                    })
                }
            };
            crucial.push(cur);
            corner.push(pos);
        }
    }
    Ok((crucial, corner))
}
