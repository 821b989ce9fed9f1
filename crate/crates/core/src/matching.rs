//! Perfect matchings of square (0,1)-matrices viewed as bipartite graphs, and
//! the support predicates built on them.

use crate::error::Error;
use crate::matrix::BinaryMatrix;

const NONE: usize = usize::MAX;

struct Kuhn<'a> {
    a: &'a BinaryMatrix,
    skip_col: usize,
    row_of_col: Vec<usize>,
    col_of_row: Vec<usize>,
    seen: Vec<bool>,
}

impl<'a> Kuhn<'a> {
    fn new(a: &'a BinaryMatrix) -> Self {
        let n = a.rows();
        Kuhn {
            a,
            skip_col: NONE,
            row_of_col: vec![NONE; n],
            col_of_row: vec![NONE; n],
            seen: vec![false; n],
        }
    }

    fn augment(&mut self, r: usize) -> bool {
        let mut c = self.a.next_one_in_row(r, 0);
        while let Some(col) = c {
            if col != self.skip_col && !self.seen[col] {
                self.seen[col] = true;
                let owner = self.row_of_col[col];
                if owner == NONE || self.augment(owner) {
                    self.row_of_col[col] = r;
                    self.col_of_row[r] = col;
                    return true;
                }
            }
            c = self.a.next_one_in_row(r, col + 1);
        }
        false
    }

    fn try_row(&mut self, r: usize) -> bool {
        self.seen.iter_mut().for_each(|s| *s = false);
        self.augment(r)
    }
}

fn check_square(a: &BinaryMatrix) -> Result<(), Error> {
    if !a.is_square() {
        return Err(Error::domain(format!("matrix must be square, got {} x {}", a.rows(), a.cols())));
    }
    Ok(())
}

fn check_nonzero(a: &BinaryMatrix) -> Result<(), Error> {
    check_square(a)?;
    if a.is_zero() {
        return Err(Error::domain("the zero matrix is excluded"));
    }
    Ok(())
}

/// A permutation `p` (0-based, `p[r]` = column of row `r`) with `P <= A`, if any.
pub fn perfect_matching(a: &BinaryMatrix) -> Result<Option<Vec<usize>>, Error> {
    check_square(a)?;
    let mut k = Kuhn::new(a);
    for r in 0..a.rows() {
        if !k.try_row(r) {
            return Ok(None);
        }
    }
    Ok(Some(k.col_of_row))
}

/// Whether the minor without row `i` and column `j` supports a permutation,
/// given a perfect matching `m` of `a`. Deleting `i` and `j` leaves one free
/// row, so a single augmenting search decides it.
fn minor_matches(a: &BinaryMatrix, m: &[usize], i: usize, j: usize) -> bool {
    if m[i] == j {
        return true;
    }
    let mut k = Kuhn::new(a);
    for (r, &c) in m.iter().enumerate() {
        if r != i && c != j {
            k.col_of_row[r] = c;
            k.row_of_col[c] = r;
        }
    }
    k.skip_col = j;
    let free = m.iter().position(|&c| c == j).unwrap();
    // row i owns no column now, so the search never enters it
    k.try_row(free)
}

/// Every one of `a` lies on a permutation matrix `P <= A`.
pub fn is_total_support(a: &BinaryMatrix) -> Result<bool, Error> {
    check_nonzero(a)?;
    let Some(m) = perfect_matching(a)? else {
        return Ok(false);
    };
    Ok(a.ones_iter().all(|(i, j)| minor_matches(a, &m, i, j)))
}

/// Deleting any row and any column leaves a matrix that supports a permutation.
pub fn is_fully_indecomposable(a: &BinaryMatrix) -> Result<bool, Error> {
    check_nonzero(a)?;
    let Some(m) = perfect_matching(a)? else {
        return Ok(false);
    };
    let n = a.rows();
    Ok((0..n).all(|i| (0..n).all(|j| minor_matches(a, &m, i, j))))
}

/// Whether the rows and columns not yet used (`row_free`, `col_free`) carry a
/// perfect matching.
pub(crate) fn residual_matches(a: &BinaryMatrix, row_free: &[bool], col_free: &[bool]) -> bool {
    let rows: Vec<usize> = (0..a.rows()).filter(|&r| row_free[r]).collect();
    let cols: Vec<usize> = (0..a.cols()).filter(|&c| col_free[c]).collect();
    if rows.len() != cols.len() {
        return false;
    }
    if rows.is_empty() {
        return true;
    }
    perfect_matching(&a.submatrix(&rows, &cols)).map(|m| m.is_some()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::all_permutations;

    fn m(s: &str) -> BinaryMatrix {
        BinaryMatrix::parse(s).unwrap()
    }

    fn supported(a: &BinaryMatrix) -> Vec<Vec<usize>> {
        all_permutations(a.rows())
            .into_iter()
            .map(|p| p.values().iter().map(|v| v - 1).collect::<Vec<_>>())
            .filter(|p| p.iter().enumerate().all(|(r, &c)| a.get(r, c)))
            .collect()
    }

    fn brute_total_support(a: &BinaryMatrix) -> bool {
        let perms = supported(a);
        a.ones_iter().all(|(r, c)| perms.iter().any(|p| p[r] == c))
    }

    fn brute_fully_indecomposable(a: &BinaryMatrix) -> bool {
        let n = a.rows();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                n == 1 || !supported(&a.submatrix(&rows, &cols)).is_empty()
            })
        })
    }

    #[test]
    fn examples() {
        for n in 1..=6 {
            assert!(is_total_support(&BinaryMatrix::ones(n, n)).unwrap());
            assert!(is_fully_indecomposable(&BinaryMatrix::ones(n, n)).unwrap());
            assert!(is_total_support(&BinaryMatrix::identity(n)).unwrap());
            assert_eq!(is_fully_indecomposable(&BinaryMatrix::identity(n)).unwrap(), n == 1);
        }
        assert!(!is_total_support(&m("11\n01")).unwrap());
        let guess = m("11100\n11110\n10111\n10011\n10001");
        assert!(is_fully_indecomposable(&guess).unwrap());
        assert!(matches!(is_total_support(&BinaryMatrix::zeros(3, 3)), Err(Error::Domain(_))));
        assert!(matches!(is_fully_indecomposable(&BinaryMatrix::ones(2, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn agrees_with_enumeration_on_all_3x3() {
        for bits in 1u64..512 {
            let masks: Vec<u64> = (0..3).map(|r| (bits >> (3 * r)) & 7).collect();
            let a = BinaryMatrix::from_row_masks(3, &masks);
            assert_eq!(perfect_matching(&a).unwrap().is_some(), !supported(&a).is_empty(), "{a}");
            assert_eq!(is_total_support(&a).unwrap(), brute_total_support(&a), "{a}");
            assert_eq!(is_fully_indecomposable(&a).unwrap(), brute_fully_indecomposable(&a), "{a}");
        }
    }

    #[test]
    fn agrees_with_enumeration_on_sampled_4x4() {
        for bits in (1u64..65536).step_by(37) {
            let masks: Vec<u64> = (0..4).map(|r| (bits >> (4 * r)) & 15).collect();
            let a = BinaryMatrix::from_row_masks(4, &masks);
            assert_eq!(is_total_support(&a).unwrap(), brute_total_support(&a), "{a}");
            assert_eq!(is_fully_indecomposable(&a).unwrap(), brute_fully_indecomposable(&a), "{a}");
        }
    }
}
