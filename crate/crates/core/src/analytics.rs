//! Avoiding permutations, permanents and related predicates.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::containment::{sequence_contains, sequence_contains_ending_at_last};
use crate::error::Error;
use crate::matching::residual_matches;
use crate::matrix::BinaryMatrix;
use crate::permutation::Permutation;

pub use crate::matching::{is_fully_indecomposable, is_total_support, perfect_matching};

/// A permutation of `{1..n}` given as its value list.
pub type PermutationList = Permutation;

/// Largest order accepted by [`permanent`].
pub const PERMANENT_MAX_N: usize = 30;

/// `binom(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> BigUint {
    let mut c = BigUint::from(1u32);
    for k in 0..n {
        // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// [`catalan`] when it fits in 64 bits (up to `n = 36`).
pub fn catalan_u64(n: u32) -> Option<u64> {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c.checked_mul(2 * (2 * k + 1))? / (k + 2);
    }
    u64::try_from(c).ok()
}

/// Streams the `sigma`-avoiding permutations of `{1..n}` in lexicographic order.
pub struct AvoidingPermutations {
    n: usize,
    sigma: Permutation,
    prefix: Vec<usize>,
    used: Vec<bool>,
    // next value to try at each open depth
    cand: Vec<usize>,
    done: bool,
}

impl Iterator for AvoidingPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        while !self.done {
            let d = self.prefix.len();
            if self.cand.len() == d {
                self.cand.push(1);
            }
            let mut v = self.cand[d];
            while v <= self.n && self.used[v - 1] {
                v += 1;
            }
            if v > self.n {
                self.cand.pop();
                match self.prefix.pop() {
                    Some(last) => self.used[last - 1] = false,
                    None => self.done = true,
                }
                continue;
            }
            self.cand[d] = v + 1;
            self.prefix.push(v);
            if sequence_contains_ending_at_last(&self.prefix, &self.sigma) {
                self.prefix.pop();
                continue;
            }
            if self.prefix.len() == self.n {
                let out = Permutation::new(self.prefix.clone()).expect("distinct values");
                self.prefix.pop();
                return Some(out);
            }
            self.used[v - 1] = true;
        }
        None
    }
}

/// The `sigma`-avoiding permutations of `{1..n}`; prefixes that already
/// contain `sigma` are cut off.
pub fn enumerate_avoiding(n: usize, sigma: &Permutation) -> AvoidingPermutations {
    assert!(n >= 1, "n must be positive");
    AvoidingPermutations {
        n,
        sigma: sigma.clone(),
        prefix: Vec::with_capacity(n),
        used: vec![false; n],
        cand: Vec::with_capacity(n),
        done: false,
    }
}

fn check_square(a: &BinaryMatrix) -> Result<(), Error> {
    if !a.is_square() {
        return Err(Error::domain(format!("matrix must be square, got {} x {}", a.rows(), a.cols())));
    }
    Ok(())
}

/// Number of permutation matrices `P <= A`, by Ryser's formula over column
/// subsets in Gray-code order.
///
/// Arithmetic wraps modulo `2^128`. The permanent is at most `30! < 2^128`, so
/// the wrapped sum equals the true value.
pub fn permanent(a: &BinaryMatrix) -> Result<u128, Error> {
    check_square(a)?;
    let n = a.rows();
    if n > PERMANENT_MAX_N {
        return Err(Error::resource(format!("permanent is limited to n <= {PERMANENT_MAX_N}, got {n}")));
    }
    if (0..n).any(|r| a.row_count(r) == 0) {
        return Ok(0);
    }
    let rows: Vec<u64> = (0..n).map(|r| a.row_mask(r)).collect();
    let cols_of: Vec<Vec<usize>> = (0..n).map(|c| (0..n).filter(|&r| a.get(r, c)).collect()).collect();
    // top bits fixed per task, Gray code over the low bits
    let low = n.min(16);
    let high = n - low;
    let total = (0..1u64 << high)
        .into_par_iter()
        .map(|h| {
            let base = h << low;
            let mut sums: Vec<i64> = rows.iter().map(|&row| (row & base).count_ones() as i64).collect();
            let mut subset = base;
            let mut acc: u128 = 0;
            let mut term = |subset: u64, sums: &[i64]| {
                let mut prod: u128 = 1;
                for &s in sums {
                    if s == 0 {
                        return;
                    }
                    prod = prod.wrapping_mul(s as u128);
                }
                if subset.count_ones() % 2 == 1 {
                    acc = acc.wrapping_sub(prod);
                } else {
                    acc = acc.wrapping_add(prod);
                }
            };
            term(subset, &sums);
            for g in 1..1u64 << low {
                let j = g.trailing_zeros() as usize;
                let bit = 1u64 << j;
                let delta = if subset & bit == 0 { 1 } else { -1 };
                subset ^= bit;
                for &r in &cols_of[j] {
                    sums[r] += delta;
                }
                term(subset, &sums);
            }
            acc
        })
        .reduce(|| 0u128, u128::wrapping_add);
    Ok(if n % 2 == 1 { total.wrapping_neg() } else { total })
}

/// The `sigma`-avoiding permanent of a square matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidingPermanentReport {
    pub value: u64,
    pub witness_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Permutation>>,
}

struct RowSearch<'a> {
    a: &'a BinaryMatrix,
    sigma: &'a Permutation,
    prefix: Vec<usize>,
    used: Vec<bool>,
}

impl RowSearch<'_> {
    /// Visits every supported permutation avoiding `sigma`; stops when `visit`
    /// returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let n = self.a.rows();
        let r = self.prefix.len();
        if r == n {
            return visit(&self.prefix);
        }
        let mut c = self.a.next_one_in_row(r, 0);
        while let Some(col) = c {
            if !self.used[col] {
                self.prefix.push(col + 1);
                if !sequence_contains_ending_at_last(&self.prefix, self.sigma) {
                    self.used[col] = true;
                    let go_on = self.run(visit);
                    self.used[col] = false;
                    if !go_on {
                        self.prefix.pop();
                        return false;
                    }
                }
                self.prefix.pop();
            }
            c = self.a.next_one_in_row(r, col + 1);
        }
        true
    }
}

/// Counts permutations that avoid `sigma` and are supported by `a`, optionally
/// listing them in lexicographic order.
pub fn avoiding_permanent(
    a: &BinaryMatrix,
    sigma: &Permutation,
    with_witnesses: bool,
) -> Result<AvoidingPermanentReport, Error> {
    check_square(a)?;
    let mut count = 0u64;
    let mut list = Vec::new();
    let mut search = RowSearch { a, sigma, prefix: Vec::new(), used: vec![false; a.cols()] };
    search.run(&mut |p| {
        count += 1;
        if with_witnesses {
            list.push(Permutation::new(p.to_vec()).expect("distinct values"));
        }
        true
    });
    Ok(AvoidingPermanentReport {
        value: count,
        witness_count: count,
        witnesses: with_witnesses.then_some(list),
    })
}

/// True iff every permutation matrix `P <= A` avoids `sigma`.
///
/// Searches supported prefixes; a prefix that already contains `sigma` is a
/// counterexample exactly when the unused rows and columns still match.
pub fn is_sigma_permutation_avoiding(a: &BinaryMatrix, sigma: &Permutation) -> Result<bool, Error> {
    check_square(a)?;
    fn rec(a: &BinaryMatrix, sigma: &Permutation, prefix: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = a.rows();
        let r = prefix.len();
        if r == n {
            return true;
        }
        let mut c = a.next_one_in_row(r, 0);
        while let Some(col) = c {
            if !used[col] {
                prefix.push(col + 1);
                used[col] = true;
                let ok = if sequence_contains_ending_at_last(prefix, sigma) {
                    let row_free: Vec<bool> = (0..n).map(|i| i > r).collect();
                    let col_free: Vec<bool> = used.iter().map(|u| !u).collect();
                    !residual_matches(a, &row_free, &col_free)
                } else {
                    rec(a, sigma, prefix, used)
                };
                used[col] = false;
                prefix.pop();
                if !ok {
                    return false;
                }
            }
            c = a.next_one_in_row(r, col + 1);
        }
        true
    }
    Ok(rec(a, sigma, &mut Vec::new(), &mut vec![false; a.cols()]))
}

/// At most one descent.
pub fn is_grassmannian(pi: &Permutation) -> bool {
    pi.descents() <= 1
}

/// At most one ascent.
pub fn is_reverse_grassmannian(pi: &Permutation) -> bool {
    pi.ascents() <= 1
}

/// True iff `sub` occurs in `seq` as a (not necessarily contiguous) subsequence.
pub fn is_subsequence(sub: &[usize], seq: &[usize]) -> bool {
    let mut it = seq.iter();
    sub.iter().all(|x| it.any(|y| y == x))
}

/// The lexicographically least `sigma`-avoiding permutation of `{1..n}` that
/// contains `sub` as a subsequence, if one exists.
pub fn extend_avoiding(sub: &[usize], n: usize, sigma: &Permutation) -> Result<Option<Permutation>, Error> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let mut in_sub = vec![false; n];
    for &v in sub {
        if v == 0 || v > n {
            return Err(Error::domain(format!("value {v} outside 1..={n}")));
        }
        if std::mem::replace(&mut in_sub[v - 1], true) {
            return Err(Error::domain(format!("value {v} repeated")));
        }
    }
    if sequence_contains(sub, sigma) {
        return Err(Error::precondition(format!("the given values already contain {sigma}")));
    }

    fn rec(
        n: usize,
        sub: &[usize],
        in_sub: &[bool],
        sigma: &Permutation,
        placed: usize,
        prefix: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        if prefix.len() == n {
            return true;
        }
        for v in 1..=n {
            let allowed = !used[v - 1] && if in_sub[v - 1] { sub.get(placed) == Some(&v) } else { true };
            if !allowed {
                continue;
            }
            prefix.push(v);
            if !sequence_contains_ending_at_last(prefix, sigma) {
                used[v - 1] = true;
                let next = placed + usize::from(in_sub[v - 1]);
                if rec(n, sub, in_sub, sigma, next, prefix, used) {
                    return true;
                }
                used[v - 1] = false;
            }
            prefix.pop();
        }
        false
    }

    let mut prefix = Vec::with_capacity(n);
    if rec(n, sub, &in_sub, sigma, 0, &mut prefix, &mut vec![false; n]) {
        Ok(Some(Permutation::new(prefix).expect("distinct values")))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::decompose_jn;
    use crate::permutation::all_permutations;

    fn p(w: &str) -> Permutation {
        w.parse().unwrap()
    }

    fn guess() -> BinaryMatrix {
        BinaryMatrix::parse("11100\n11110\n10111\n10011\n10001").unwrap()
    }

    fn factorial(n: u128) -> u128 {
        (1..=n).product()
    }

    fn brute_permanent(a: &BinaryMatrix) -> u128 {
        all_permutations(a.rows())
            .iter()
            .filter(|q| q.values().iter().enumerate().all(|(r, &c)| a.get(r, c - 1)))
            .count() as u128
    }

    #[test]
    fn catalan_values() {
        let first: Vec<u64> = (0..=10).map(|n| catalan_u64(n).unwrap()).collect();
        assert_eq!(first, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]);
        assert_eq!(catalan(8), BigUint::from(1430u32));
        for n in 0..=36 {
            assert_eq!(BigUint::from(catalan_u64(n).unwrap()), catalan(n), "{n}");
        }
        assert_eq!(catalan_u64(37), None);
        assert_eq!(catalan(30).to_string(), "3814986502092304");
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_avoiding(3, &p("123")).count(), 5);
        assert_eq!(enumerate_avoiding(4, &p("312")).count(), 14);
        assert_eq!(enumerate_avoiding(2, &p("12")).collect::<Vec<_>>(), vec![p("21")]);
        assert_eq!(enumerate_avoiding(1, &p("12")).collect::<Vec<_>>(), vec![p("1")]);
        assert_eq!(enumerate_avoiding(4, &p("12345")).count(), 24);
    }

    #[test]
    fn enumeration_matches_filtered_full_list() {
        for sigma in all_permutations(3).into_iter().chain([p("2413"), p("1234")]) {
            for n in 1..=7 {
                let streamed: Vec<Permutation> = enumerate_avoiding(n, &sigma).collect();
                let filtered: Vec<Permutation> =
                    all_permutations(n).into_iter().filter(|q| !sequence_contains(q.values(), &sigma)).collect();
                assert_eq!(streamed, filtered, "{sigma} n={n}");
            }
        }
    }

    #[test]
    fn catalan_counts_all_s3_patterns() {
        for sigma in all_permutations(3) {
            for n in 1..=8 {
                assert_eq!(enumerate_avoiding(n, &sigma).count() as u64, catalan_u64(n as u32).unwrap());
            }
        }
    }

    #[test]
    fn permanent_examples() {
        assert_eq!(permanent(&BinaryMatrix::ones(4, 4)).unwrap(), 24);
        assert_eq!(permanent(&BinaryMatrix::identity(5)).unwrap(), 1);
        assert_eq!(permanent(&guess()).unwrap(), 12);
        assert_eq!(permanent(&BinaryMatrix::zeros(3, 3)).unwrap(), 0);
        for n in 1..=12 {
            assert_eq!(permanent(&BinaryMatrix::ones(n, n)).unwrap(), factorial(n as u128));
        }
        assert_eq!(permanent(&BinaryMatrix::ones(20, 20)).unwrap(), factorial(20));
        assert!(matches!(permanent(&BinaryMatrix::ones(2, 3)), Err(Error::Domain(_))));
        assert!(matches!(permanent(&BinaryMatrix::ones(31, 31)), Err(Error::Resource(_))));
    }

    #[test]
    fn permanent_of_upper_triangular_ones_is_one() {
        let mut a = BinaryMatrix::zeros(18, 18);
        for r in 0..18 {
            for c in r..18 {
                a.set(r, c, true);
            }
        }
        assert_eq!(permanent(&a).unwrap(), 1);
    }

    #[test]
    fn permanent_matches_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let mut a = BinaryMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    a.set(r, c, rng.gen_bool(0.6));
                }
            }
            let per = permanent(&a).unwrap();
            assert_eq!(per, brute_permanent(&a), "{a}");
            for sigma in all_permutations(3) {
                let avoiding = avoiding_permanent(&a, &sigma, false).unwrap().value as u128;
                let containing = all_permutations(n)
                    .iter()
                    .filter(|q| q.values().iter().enumerate().all(|(r, &c)| a.get(r, c - 1)))
                    .filter(|q| sequence_contains(q.values(), &sigma))
                    .count() as u128;
                assert_eq!(per, avoiding + containing);
                if is_sigma_permutation_avoiding(&a, &sigma).unwrap() {
                    assert_eq!(containing, 0);
                    assert_eq!(per, avoiding);
                } else {
                    assert!(containing > 0);
                }
            }
        }
    }

    #[test]
    fn avoiding_permanent_examples() {
        assert_eq!(avoiding_permanent(&BinaryMatrix::ones(4, 4), &p("123"), false).unwrap().value, 14);
        assert_eq!(avoiding_permanent(&BinaryMatrix::ones(3, 3), &p("312"), false).unwrap().value, 5);
        let r = avoiding_permanent(&guess(), &p("312"), true).unwrap();
        assert_eq!(r.value, 12);
        assert_eq!(r.witness_count, 12);
        let w = r.witnesses.unwrap();
        assert_eq!(w.len(), 12);
        assert!(w.windows(2).all(|x| x[0] < x[1]));
        for n in 1..=8 {
            for sigma in all_permutations(3) {
                let v = avoiding_permanent(&BinaryMatrix::ones(n, n), &sigma, false).unwrap().value;
                assert_eq!(v, catalan_u64(n as u32).unwrap());
            }
        }
    }

    #[test]
    fn permutation_avoiding_examples() {
        assert!(is_sigma_permutation_avoiding(&guess(), &p("312")).unwrap());
        assert!(is_sigma_permutation_avoiding(&BinaryMatrix::parse("01\n10").unwrap(), &p("12")).unwrap());
        assert!(!is_sigma_permutation_avoiding(&BinaryMatrix::identity(2), &p("12")).unwrap());
        assert!(!is_sigma_permutation_avoiding(&BinaryMatrix::ones(3, 3), &p("312")).unwrap());
    }

    #[test]
    fn grassmannian_examples() {
        let q = p("563412");
        assert!(!is_grassmannian(&q));
        assert!(!is_reverse_grassmannian(&q));
        assert!(!sequence_contains(q.values(), &p("123")));
        assert!(is_grassmannian(&Permutation::identity(7)));
        for n in 1..=10 {
            assert!(decompose_jn(n).iter().all(is_reverse_grassmannian));
        }
    }

    #[test]
    fn extension_examples() {
        let w = extend_avoiding(&[4, 6, 1], 6, &p("312")).unwrap().unwrap();
        assert!(!sequence_contains(w.values(), &p("312")));
        assert!(is_subsequence(&[4, 6, 1], w.values()));
        let known = [2, 4, 5, 6, 3, 1];
        assert!(!sequence_contains(&known, &p("312")));
        assert!(is_subsequence(&[4, 6, 1], &known));
        assert!(w.values() <= &known[..]);
        assert_eq!(extend_avoiding(&[1, 2, 3, 4], 4, &p("321")).unwrap(), Some(Permutation::identity(4)));
        assert!(matches!(extend_avoiding(&[3, 1, 2], 3, &p("312")), Err(Error::Precondition(_))));
        assert!(matches!(extend_avoiding(&[7], 6, &p("312")), Err(Error::Domain(_))));
        assert_eq!(extend_avoiding(&[1], 2, &p("12")).unwrap(), Some(p("21")));
        assert_eq!(extend_avoiding(&[2, 3], 3, &p("12")), Err(Error::Precondition("the given values already contain 12".into())));
    }

    #[test]
    fn extension_agrees_with_enumeration() {
        let sigma = p("312");
        for n in 1..=6 {
            let all: Vec<Permutation> = enumerate_avoiding(n, &sigma).collect();
            // every sub-sequence of length <= 3 drawn from {1..n}
            let mut subs: Vec<Vec<usize>> = vec![vec![]];
            for len in 1..=3.min(n) {
                for q in all_permutations(n) {
                    let s: Vec<usize> = q.values()[..len].to_vec();
                    if !subs.contains(&s) {
                        subs.push(s);
                    }
                }
            }
            for s in subs {
                if sequence_contains(&s, &sigma) {
                    continue;
                }
                let got = extend_avoiding(&s, n, &sigma).unwrap();
                let want = all.iter().find(|q| is_subsequence(&s, q.values())).cloned();
                assert_eq!(got, want, "{s:?} n={n}");
            }
        }
    }
}
