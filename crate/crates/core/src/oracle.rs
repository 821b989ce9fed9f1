//! Exhaustive searches over small matrices, used to check the closed forms.
//!
//! Every search is deterministic: parallel workers never share state, and
//! their results are merged by value and then by task order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{avoiding_permanent, is_fully_indecomposable, is_sigma_permutation_avoiding, is_total_support, permanent};
use crate::containment::{contains, contains_pattern_ending_at_row, sequence_contains_ending_at_last};
use crate::error::Error;
use crate::extremal::{extremal_formula, greedy_saturate, validate_maximal, FormulaStatus};
use crate::matrix::BinaryMatrix;
use crate::permutation::Permutation;

/// Largest `m * n` accepted by [`brute_max_ones`] and [`check_conjecture_k1`].
pub const MAX_ONES_CELL_CAP: usize = 25;
/// Largest `m * n` accepted by [`enumerate_maximal`].
pub const ENUMERATE_CELL_CAP: usize = 20;
/// Largest `m * n` at which [`check_conjecture_k1`] also checks saturation.
pub const SATURATION_CELL_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub m: usize,
    pub n: usize,
    pub sigma: Permutation,
    pub exhaustive_max: usize,
    pub formula_value: Option<usize>,
    pub formula_status: Option<FormulaStatus>,
    /// True when a formula value exists and equals the exhaustive maximum.
    pub agreement: bool,
    pub witness: BinaryMatrix,
    /// Candidate rows tried across the whole search.
    pub matrices_scanned: u64,
}

fn check_cap(m: usize, n: usize, cap: usize) -> Result<(), Error> {
    if m == 0 || n == 0 {
        return Err(Error::domain("dimensions must be positive"));
    }
    if m * n > cap {
        return Err(Error::resource(format!("{m} x {n} exceeds the cap of {cap} cells")));
    }
    Ok(())
}

/// All row masks of width `n`, most ones first, ties by value.
fn masks_by_weight(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_key(|&x| (std::cmp::Reverse(x.count_ones()), x));
    masks
}

struct MaxSearch<'a> {
    m: usize,
    n: usize,
    sigma: &'a Permutation,
    masks: &'a [u64],
    a: BinaryMatrix,
    // -1 before anything is found
    best: i64,
    witness: Option<BinaryMatrix>,
    scanned: u64,
}

impl MaxSearch<'_> {
    fn dfs(&mut self, r: usize, ones: usize) {
        if r == self.m {
            if ones as i64 > self.best {
                self.best = ones as i64;
                self.witness = Some(self.a.clone());
            }
            return;
        }
        let rows_after = self.m - r - 1;
        for i in 0..self.masks.len() {
            let mask = self.masks[i];
            let w = mask.count_ones() as usize;
            // masks are sorted by weight, so no later mask can do better
            if (ones + w + rows_after * self.n) as i64 <= self.best {
                break;
            }
            self.scanned += 1;
            self.a.set_row_mask(r, mask);
            if !contains_pattern_ending_at_row(&self.a, r + 1, self.sigma) {
                self.dfs(r + 1, ones + w);
            }
        }
        self.a.set_row_mask(r, 0);
    }
}

/// Exhaustive maximum number of ones in a `sigma`-avoiding `m x n` matrix.
///
/// Rows are filled top to bottom; a row is rejected as soon as it completes a
/// copy of `sigma`, and a branch is cut when filling every remaining cell could
/// not beat the incumbent. Each first-row choice is a separate task whose
/// incumbent starts just below the size of a greedily saturated matrix.
pub fn brute_max_ones(m: usize, n: usize, sigma: &Permutation) -> Result<OracleReport, Error> {
    check_cap(m, n, MAX_ONES_CELL_CAP)?;
    let masks = masks_by_weight(n);
    let floor = greedy_saturate(&BinaryMatrix::zeros(m, n), sigma, 0)?.count_ones();
    let results: Vec<(i64, Option<BinaryMatrix>, u64)> = masks
        .par_iter()
        .map(|&first| {
            let mut s = MaxSearch {
                m,
                n,
                sigma,
                masks: &masks,
                a: BinaryMatrix::zeros(m, n),
                best: floor as i64 - 1,
                witness: None,
                scanned: 1,
            };
            let w = first.count_ones() as usize;
            if (w + (m - 1) * n) as i64 > s.best {
                s.a.set_row_mask(0, first);
                if !contains_pattern_ending_at_row(&s.a, 1, sigma) {
                    s.dfs(1, w);
                }
            }
            (s.best, s.witness, s.scanned)
        })
        .collect();
    let scanned = results.iter().map(|r| r.2).sum();
    let (best, witness) = results
        .into_iter()
        .filter_map(|(b, w, _)| w.map(|w| (b, w)))
        .fold(None::<(i64, BinaryMatrix)>, |acc, (b, w)| match acc {
            Some((ab, aw)) if ab >= b => Some((ab, aw)),
            _ => Some((b, w)),
        })
        .expect("the greedy matrix is always reachable");
    let best = best as usize;
    let formula = extremal_formula(m, n, sigma);
    Ok(OracleReport {
        m,
        n,
        sigma: sigma.clone(),
        exhaustive_max: best,
        formula_value: formula.map(|f| f.value),
        formula_status: formula.map(|f| f.status),
        agreement: formula.is_some_and(|f| f.value == best),
        witness,
        matrices_scanned: scanned,
    })
}

/// Streams every maximal `sigma`-avoiding `m x n` matrix once, in
/// lexicographic order of the row masks (row 1 most significant).
pub struct MaximalMatrices {
    m: usize,
    n: usize,
    sigma: Permutation,
    a: BinaryMatrix,
    // next mask to try in each row of the current branch
    next: Vec<u64>,
    done: bool,
}

impl Iterator for MaximalMatrices {
    type Item = BinaryMatrix;

    fn next(&mut self) -> Option<BinaryMatrix> {
        let limit = 1u64 << self.n;
        while !self.done {
            let r = self.next.len() - 1;
            let mask = self.next[r];
            if mask == limit {
                self.next.pop();
                self.a.set_row_mask(r, 0);
                if self.next.is_empty() {
                    self.done = true;
                }
                continue;
            }
            self.next[r] = mask + 1;
            self.a.set_row_mask(r, mask);
            if contains_pattern_ending_at_row(&self.a, r + 1, &self.sigma) {
                continue;
            }
            if r + 1 < self.m {
                self.next.push(0);
            } else if validate_maximal(&self.a, &self.sigma) {
                return Some(self.a.clone());
            }
        }
        None
    }
}

/// Every matrix that avoids `sigma` and admits no single `0 -> 1` flip that
/// keeps avoiding it. Only avoiding prefixes are expanded.
pub fn enumerate_maximal(m: usize, n: usize, sigma: &Permutation) -> Result<MaximalMatrices, Error> {
    check_cap(m, n, ENUMERATE_CELL_CAP)?;
    Ok(MaximalMatrices { m, n, sigma: sigma.clone(), a: BinaryMatrix::zeros(m, n), next: vec![0], done: false })
}

/// Result of the empirical check that every maximal matrix reaches the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationCheck {
    pub maximal_matrices: u64,
    pub all_at_bound: bool,
    /// A maximal matrix with fewer ones than the bound, if one exists.
    pub counterexample: Option<BinaryMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub k: usize,
    pub bound: usize,
    pub bound_exact: bool,
    /// A matrix beating the bound, if the search found one.
    pub counterexample: Option<BinaryMatrix>,
    pub oracle: OracleReport,
    pub saturation: Option<SaturationCheck>,
}

/// Checks the conjectured bound `(k-1)(m+n-(k-1))` for `k12..(k-1)`-avoiding
/// matrices by exhaustive search, and at `m*n <= 16` also checks that every
/// maximal matrix has exactly that many ones. A counterexample is reported,
/// not raised.
pub fn check_conjecture_k1(m: usize, n: usize, k: usize) -> Result<ConjectureReport, Error> {
    if k < 4 || m < k || n < k {
        return Err(Error::domain(format!("need m, n >= k >= 4, got m={m} n={n} k={k}")));
    }
    check_cap(m, n, MAX_ONES_CELL_CAP)?;
    let sigma = Permutation::max_first(k);
    let bound = (k - 1) * (m + n - (k - 1));
    let oracle = brute_max_ones(m, n, &sigma)?;
    let counterexample = (oracle.exhaustive_max > bound).then(|| oracle.witness.clone());
    let saturation = if m * n <= SATURATION_CELL_CAP {
        let mut count = 0u64;
        let mut low = None;
        for a in enumerate_maximal(m, n, &sigma)? {
            count += 1;
            if low.is_none() && a.count_ones() != bound {
                low = Some(a);
            }
        }
        Some(SaturationCheck { maximal_matrices: count, all_at_bound: low.is_none(), counterexample: low })
    } else {
        None
    };
    Ok(ConjectureReport {
        k,
        bound,
        bound_exact: oracle.exhaustive_max == bound,
        counterexample,
        oracle,
        saturation,
    })
}

/// Whether a given matrix avoids `k12..(k-1)` and how it sits against the bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub k: usize,
    pub avoids: bool,
    pub ones: usize,
    pub bound: usize,
    pub maximal: bool,
}

pub fn conjecture_membership(a: &BinaryMatrix, k: usize) -> Result<MembershipReport, Error> {
    if k < 2 || k > a.rows().min(a.cols()) {
        return Err(Error::domain(format!("need 2 <= k <= min(m,n), got k={k}")));
    }
    let sigma = Permutation::max_first(k);
    let avoids = !contains(a, &sigma);
    Ok(MembershipReport {
        k,
        avoids,
        ones: a.count_ones(),
        bound: (k - 1) * (a.rows() + a.cols() - (k - 1)),
        maximal: avoids && validate_maximal(a, &sigma),
    })
}

/// Restriction on the matrices over which [`search_max_avoiding_permanent`] maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermanentConstraint {
    None,
    TotalSupport,
    FullyIndecomposable,
    /// Every supported permutation avoids the pattern; the objective is then
    /// the ordinary permanent, which equals the avoiding one.
    PermutationAvoiding,
    /// Both of the previous two.
    FullyIndecomposablePermutationAvoiding,
}

impl PermanentConstraint {
    fn needs_permutation_avoiding(self) -> bool {
        matches!(
            self,
            PermanentConstraint::PermutationAvoiding | PermanentConstraint::FullyIndecomposablePermutationAvoiding
        )
    }

    fn needs_fully_indecomposable(self) -> bool {
        matches!(
            self,
            PermanentConstraint::FullyIndecomposable | PermanentConstraint::FullyIndecomposablePermutationAvoiding
        )
    }
}

impl std::str::FromStr for PermanentConstraint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.replace('-', "_").as_str() {
            "none" => Ok(PermanentConstraint::None),
            "total_support" => Ok(PermanentConstraint::TotalSupport),
            "fully_indecomposable" => Ok(PermanentConstraint::FullyIndecomposable),
            "permutation_avoiding" => Ok(PermanentConstraint::PermutationAvoiding),
            "fully_indecomposable_permutation_avoiding" => {
                Ok(PermanentConstraint::FullyIndecomposablePermutationAvoiding)
            }
            other => Err(Error::format(format!("unknown constraint {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermanentSearchReport {
    pub n: usize,
    pub sigma: Permutation,
    pub constraint: PermanentConstraint,
    pub maximum: u64,
    pub witness: BinaryMatrix,
    pub matrices_scanned: u64,
}

fn full_scan_objective(a: &BinaryMatrix, sigma: &Permutation, constraint: PermanentConstraint) -> Option<u64> {
    if a.is_zero() && constraint != PermanentConstraint::None {
        return None;
    }
    let ok = match constraint {
        PermanentConstraint::None => true,
        PermanentConstraint::TotalSupport => is_total_support(a).ok()?,
        PermanentConstraint::FullyIndecomposable => is_fully_indecomposable(a).ok()?,
        PermanentConstraint::PermutationAvoiding => is_sigma_permutation_avoiding(a, sigma).ok()?,
        PermanentConstraint::FullyIndecomposablePermutationAvoiding => {
            is_fully_indecomposable(a).ok()? && is_sigma_permutation_avoiding(a, sigma).ok()?
        }
    };
    if !ok {
        None
    } else if constraint.needs_permutation_avoiding() {
        Some(permanent(a).expect("small square matrix") as u64)
    } else {
        Some(avoiding_permanent(a, sigma, false).expect("square").value)
    }
}

/// Largest order for the full scan over all `2^(n*n)` matrices.
pub const PERMANENT_SCAN_MAX_N: usize = 4;
/// Largest order for the pruned search, allowed only under constraints that
/// include permutation avoidance.
pub const PERMANENT_PRUNED_MAX_N: usize = 5;

/// Exhaustive maximum of the `sigma`-avoiding permanent over `n x n` matrices
/// meeting `constraint`, with a maximizer.
///
/// Up to `n = 4` every matrix is scanned and the witness is the first
/// maximizer in row-mask order. At `n = 5` only the permutation-avoiding
/// constraints are accepted, searched row by row over partial permutations.
pub fn search_max_avoiding_permanent(
    n: usize,
    sigma: &Permutation,
    constraint: PermanentConstraint,
) -> Result<PermanentSearchReport, Error> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let (maximum, witness, scanned) = if n <= PERMANENT_SCAN_MAX_N && !constraint.needs_permutation_avoiding() {
        full_scan(n, sigma, constraint)
    } else if n <= PERMANENT_PRUNED_MAX_N && constraint.needs_permutation_avoiding() {
        permutation_avoiding_search(n, sigma, constraint.needs_fully_indecomposable())
    } else {
        return Err(Error::resource(format!(
            "the permanent search allows n <= {PERMANENT_SCAN_MAX_N}, or n <= {PERMANENT_PRUNED_MAX_N} under a permutation-avoiding constraint; got n={n}"
        )));
    };
    Ok(PermanentSearchReport { n, sigma: sigma.clone(), constraint, maximum, witness, matrices_scanned: scanned })
}

fn from_bits(n: usize, bits: u64) -> BinaryMatrix {
    let masks: Vec<u64> = (0..n).map(|r| (bits >> (r * n)) & ((1 << n) - 1)).collect();
    BinaryMatrix::from_row_masks(n, &masks)
}

fn full_scan(n: usize, sigma: &Permutation, constraint: PermanentConstraint) -> (u64, BinaryMatrix, u64) {
    let total = 1u64 << (n * n);
    let (best, bits) = (0..total)
        .into_par_iter()
        .filter_map(|bits| full_scan_objective(&from_bits(n, bits), sigma, constraint).map(|v| (v, bits)))
        .reduce(|| (0, u64::MAX), |x, y| if x.0 > y.0 || (x.0 == y.0 && x.1 < y.1) { x } else { y });
    let bits = if bits == u64::MAX { 0 } else { bits };
    (best, from_bits(n, bits), total)
}

/// A partial permutation supported by the rows filled so far.
#[derive(Clone, Copy)]
struct Prefix {
    seq: [usize; PERMANENT_PRUNED_MAX_N],
    used: u64,
    contains: bool,
}

struct PermSearch<'a> {
    n: usize,
    sigma: &'a Permutation,
    fully_indecomposable: bool,
    rows: Vec<u64>,
    best: u64,
    witness: Option<Vec<u64>>,
    scanned: u64,
    factorial: Vec<u64>,
}

impl PermSearch<'_> {
    fn extend(&self, prefixes: &[Prefix], r: usize, mask: u64) -> Vec<Prefix> {
        let mut next = Vec::new();
        for p in prefixes {
            let mut free = mask & !p.used;
            while free != 0 {
                let c = free.trailing_zeros() as usize;
                free &= free - 1;
                let mut q = *p;
                q.seq[r] = c + 1;
                q.used |= 1 << c;
                q.contains = q.contains || sequence_contains_ending_at_last(&q.seq[..=r], self.sigma);
                next.push(q);
            }
        }
        next
    }

    fn dfs(&mut self, prefixes: &[Prefix]) {
        let r = self.rows.len();
        if r == self.n {
            self.scanned += 1;
            let value = prefixes.len() as u64;
            if value <= self.best || prefixes.iter().any(|p| p.contains) {
                return;
            }
            if self.fully_indecomposable {
                let a = BinaryMatrix::from_row_masks(self.n, &self.rows);
                if !is_fully_indecomposable(&a).unwrap_or(false) {
                    return;
                }
            }
            self.best = value;
            self.witness = Some(self.rows.clone());
            return;
        }
        for mask in (1..1u64 << self.n).rev() {
            let next = self.extend(prefixes, r, mask);
            let avoiding = next.iter().filter(|p| !p.contains).count() as u64;
            // each avoiding prefix completes in at most (n-r-1)! ways
            if avoiding * self.factorial[self.n - r - 1] <= self.best {
                continue;
            }
            self.rows.push(mask);
            self.dfs(&next);
            self.rows.pop();
        }
    }
}

/// Row-by-row search under permutation avoidance. Each first row is an
/// independent task; ties go to the earliest task, then to the first leaf.
fn permutation_avoiding_search(n: usize, sigma: &Permutation, fully_indecomposable: bool) -> (u64, BinaryMatrix, u64) {
    assert!(n <= PERMANENT_PRUNED_MAX_N);
    let factorial: Vec<u64> = (0..=n as u64).map(|i| (1..=i).product()).collect();
    let root = [Prefix { seq: [0; PERMANENT_PRUNED_MAX_N], used: 0, contains: false }];
    let firsts: Vec<u64> = (1..1u64 << n).rev().collect();
    let results: Vec<(u64, Option<Vec<u64>>, u64)> = firsts
        .into_par_iter()
        .map(|first| {
            let mut s = PermSearch {
                n,
                sigma,
                fully_indecomposable,
                rows: vec![first],
                best: 0,
                witness: None,
                scanned: 0,
                factorial: factorial.clone(),
            };
            let next = s.extend(&root, 0, first);
            s.dfs(&next);
            (s.best, s.witness, s.scanned)
        })
        .collect();
    let scanned = results.iter().map(|r| r.2).sum();
    let best = results
        .into_iter()
        .filter_map(|(b, w, _)| w.map(|w| (b, w)))
        .fold(None::<(u64, Vec<u64>)>, |acc, (b, w)| match acc {
            Some((ab, aw)) if ab >= b => Some((ab, aw)),
            _ => Some((b, w)),
        });
    match best {
        Some((b, rows)) => (b, BinaryMatrix::from_row_masks(n, &rows), scanned),
        None => (0, BinaryMatrix::zeros(n, n), scanned),
    }
}
