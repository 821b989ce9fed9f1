use proptest::prelude::*;

use pamat::containment::{contains, contains_312, contains_pattern, longest_increasing_chain};
use pamat::extremal::{greedy_saturate, validate_maximal};
use pamat::matrix::BinaryMatrix;
use pamat::permutation::{all_permutations, Permutation};
use pamat::zigzag::{recognize_zigzag, ZigzagPath};

fn matrix(max: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::bool::weighted(0.45), m * n).prop_map(move |cells| {
            let rows: Vec<Vec<bool>> = cells.chunks(n).map(<[bool]>::to_vec).collect();
            BinaryMatrix::from_rows(&rows).unwrap()
        })
    })
}

fn pattern() -> impl Strategy<Value = Permutation> {
    let mut all: Vec<Permutation> = (1..=4).flat_map(all_permutations).collect();
    all.sort();
    proptest::sample::select(all)
}

/// Definition-level containment: some choice of k rows and k columns carries
/// the pattern's ones.
fn brute_contains(a: &BinaryMatrix, sigma: &Permutation) -> bool {
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = choose(n - 1, k);
        for mut c in choose(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }
    let k = sigma.len();
    let cols = choose(a.cols(), k);
    choose(a.rows(), k).iter().any(|rs| {
        cols.iter().any(|cs| sigma.values().iter().enumerate().all(|(i, &v)| a.get(rs[i], cs[v - 1])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn generic_matches_definition(a in matrix(5), sigma in pattern()) {
        prop_assert_eq!(contains_pattern(&a, &sigma), brute_contains(&a, &sigma));
        prop_assert_eq!(contains(&a, &sigma), brute_contains(&a, &sigma));
    }

    #[test]
    fn specialized_checkers_agree(a in matrix(8)) {
        let chain = longest_increasing_chain(&a);
        for k in 1..=6 {
            prop_assert_eq!(contains_pattern(&a, &Permutation::identity(k)), chain >= k);
        }
        prop_assert_eq!(contains_312(&a), contains_pattern(&a, &"312".parse().unwrap()));
    }

    #[test]
    fn raising_a_bit_keeps_containment(a in matrix(7), sigma in pattern(), r in 0usize..7, c in 0usize..7) {
        let b = a.with_one(r % a.rows(), c % a.cols());
        prop_assert!(!contains(&a, &sigma) || contains(&b, &sigma));
    }

    #[test]
    fn symmetries_transport_patterns(a in matrix(6), sigma in pattern()) {
        let base = contains(&a, &sigma);
        prop_assert_eq!(contains(&a.transpose(), &sigma.inverse()), base);
        prop_assert_eq!(contains(&a.reverse_rows(), &sigma.reversal()), base);
        prop_assert_eq!(contains(&a.reverse_columns(), &sigma.complement()), base);
    }

    #[test]
    fn text_and_json_round_trip(a in matrix(9)) {
        prop_assert_eq!(&BinaryMatrix::parse(&a.render()).unwrap(), &a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(&serde_json::from_str::<BinaryMatrix>(&json).unwrap(), &a);
    }

    #[test]
    fn permutation_round_trip(sigma in pattern()) {
        prop_assert_eq!(&Permutation::parse_word(&sigma.word()).unwrap(), &sigma);
        prop_assert_eq!(&Permutation::parse_word(&sigma.comma_list()).unwrap(), &sigma);
        prop_assert_eq!(&Permutation::from_matrix(&sigma.to_matrix()).unwrap(), &sigma);
        let json = serde_json::to_string(&sigma).unwrap();
        prop_assert_eq!(&serde_json::from_str::<Permutation>(&json).unwrap(), &sigma);
    }

    #[test]
    fn greedy_output_is_maximal_and_dominates(a in matrix(6), sigma in pattern(), seed in any::<u64>()) {
        prop_assume!(!contains(&a, &sigma));
        let b = greedy_saturate(&a, &sigma, seed).unwrap();
        prop_assert!(a.is_dominated_by(&b));
        prop_assert!(validate_maximal(&b, &sigma));
    }

    #[test]
    fn recognized_paths_round_trip(a in matrix(6)) {
        if let Some(path) = recognize_zigzag(&a) {
            prop_assert_eq!(&path.to_matrix(a.rows(), a.cols()).unwrap(), &a);
            prop_assert_eq!(&ZigzagPath::parse(&path.render()).unwrap(), &path);
        }
    }
}
