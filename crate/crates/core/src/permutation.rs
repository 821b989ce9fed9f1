//! Permutations of `{1,..,k}`, used both as patterns and as members of `S_n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::matrix::BinaryMatrix;

/// A permutation `(p_1, .., p_k)` of `{1, .., k}`, stored 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

/// A permutation used as a forbidden pattern.
pub type PermutationPattern = Permutation;

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, Error> {
        let k = values.len();
        if k == 0 {
            return Err(Error::domain("permutation must be nonempty"));
        }
        let mut seen = vec![false; k];
        for &v in &values {
            if v == 0 || v > k {
                return Err(Error::domain(format!("value {v} outside 1..={k}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::domain(format!("value {v} repeated")));
            }
        }
        Ok(Permutation { values })
    }

    /// `12..k`.
    pub fn identity(k: usize) -> Self {
        assert!(k >= 1);
        Permutation { values: (1..=k).collect() }
    }

    /// `k(k-1)..1`.
    pub fn anti_identity(k: usize) -> Self {
        assert!(k >= 1);
        Permutation { values: (1..=k).rev().collect() }
    }

    /// `k12..(k-1)`: the largest value first, then the rest increasing.
    pub fn max_first(k: usize) -> Self {
        assert!(k >= 1);
        let mut values = vec![k];
        values.extend(1..k);
        Permutation { values }
    }

    /// Parses the compact word form (`"312"`) or a comma-separated list (`"10,1,2,..."`).
    pub fn parse_word(word: &str) -> Result<Self, Error> {
        let word = word.trim();
        if word.is_empty() {
            return Err(Error::format("empty permutation word"));
        }
        let values: Vec<usize> = if word.contains(',') {
            word.split(',')
                .enumerate()
                .map(|(i, part)| {
                    part.trim().parse::<usize>().map_err(|_| Error::Format {
                        line: 1,
                        column: Some(i + 1),
                        message: format!("bad entry {:?} in permutation list", part.trim()),
                    })
                })
                .collect::<Result<_, _>>()?
        } else {
            word.chars()
                .enumerate()
                .map(|(i, ch)| match ch.to_digit(10) {
                    Some(d) if d > 0 => Ok(d as usize),
                    _ => Err(Error::Format {
                        line: 1,
                        column: Some(i + 1),
                        message: format!("bad character {ch:?} in permutation word"),
                    }),
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(values).map_err(|e| match e {
            Error::Domain(msg) => Error::format(format!("not a permutation: {msg}")),
            other => other,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The 1-based values.
    #[inline]
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// True for `k12..(k-1)`.
    pub fn is_max_first(&self) -> bool {
        let k = self.len();
        self.values[0] == k && self.values[1..].iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// The `k x k` permutation matrix with a 1 at `(i, p_i)`.
    pub fn to_matrix(&self) -> BinaryMatrix {
        let k = self.len();
        let mut q = BinaryMatrix::zeros(k, k);
        for (i, &v) in self.values.iter().enumerate() {
            q.set(i, v - 1, true);
        }
        q
    }

    /// Reads a permutation matrix back. Fails if `a` is not one.
    pub fn from_matrix(a: &BinaryMatrix) -> Result<Self, Error> {
        if !a.is_square() {
            return Err(Error::domain("permutation matrix must be square"));
        }
        let mut values = Vec::with_capacity(a.rows());
        for r in 0..a.rows() {
            if a.row_count(r) != 1 {
                return Err(Error::domain(format!("row {} does not have exactly one 1", r + 1)));
            }
            values.push(a.next_one_in_row(r, 0).unwrap() + 1);
        }
        Permutation::new(values)
    }

    /// `i_j` moves to position `k+1-j`.
    pub fn reversal(&self) -> Self {
        Permutation { values: self.values.iter().rev().copied().collect() }
    }

    /// `i_j` is replaced with `k+1-i_j`.
    pub fn complement(&self) -> Self {
        let k = self.len();
        Permutation { values: self.values.iter().map(|&v| k + 1 - v).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut values = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            values[v - 1] = i + 1;
        }
        Permutation { values }
    }

    /// Number of adjacent positions with `i_j > i_{j+1}`.
    pub fn descents(&self) -> usize {
        self.values.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// Number of adjacent positions with `i_j < i_{j+1}`.
    pub fn ascents(&self) -> usize {
        self.values.windows(2).filter(|w| w[0] < w[1]).count()
    }

    /// The compact word when every value is a single digit, else a comma list.
    pub fn word(&self) -> String {
        if self.len() <= 9 {
            self.values.iter().map(|v| char::from(b'0' + *v as u8)).collect()
        } else {
            self.comma_list()
        }
    }

    pub fn comma_list(&self) -> String {
        self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Permutation::parse_word(s)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.comma_list())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.comma_list())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let values: Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
        let values = values.map_err(serde::de::Error::custom)?;
        Permutation::new(values).map_err(serde::de::Error::custom)
    }
}

/// All permutations of `{1..k}` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if prefix.len() == used.len() {
            out.push(Permutation { values: prefix.clone() });
            return;
        }
        for v in 1..=used.len() {
            if !used[v - 1] {
                used[v - 1] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}
