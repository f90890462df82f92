use johnson_levine::exactla::rational_rank;
use johnson_levine::freelie::sequences::{check_p_sequence, check_s_sequence};
use johnson_levine::freelie::{bracket_map, dk_basis, lyndon_basis, normalize_bracket, witt, LieTree};
use proptest::prelude::*;

const N: usize = 3;

fn tree(max_depth: u32) -> impl Strategy<Value = LieTree> {
    let leaf = (0..N).prop_map(LieTree::leaf);
    leaf.prop_recursive(max_depth, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| LieTree::node(a, b)))
}

#[test]
fn lyndon_counts_match_witt() {
    for n in 1..=4 {
        for k in 1..=6 {
            assert_eq!(lyndon_basis(n, k).len(), witt(n, k), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn bracket_map_is_rationally_surjective() {
    for n in 1..=4 {
        for k in 1..=3 {
            let b = bracket_map(n, k);
            assert_eq!(rational_rank(&b.to_rows()), witt(n, k + 2), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn dk_ranks_are_binomial() {
    for (g, r) in [(1, 0), (2, 4), (3, 20)] {
        assert_eq!(dk_basis(2 * g, 1).rank(), r);
    }
}

#[test]
fn quasi_lie_sequences_are_exact() {
    for n in [2, 4] {
        for j in [1, 2] {
            assert!(check_s_sequence(n, j).unwrap().exact(), "s at n = {n}, j = {j}");
        }
        assert!(check_p_sequence(n, 1).unwrap().exact(), "p at n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn jacobi_identity(x in tree(1), y in tree(1), z in tree(2)) {
        let deg = x.degree() + y.degree() + z.degree();
        let n = |t: LieTree| normalize_bracket(&t, N);
        let a = n(LieTree::node(x.clone(), LieTree::node(y.clone(), z.clone())));
        let b = n(LieTree::node(LieTree::node(x.clone(), y.clone()), z.clone()));
        let c = n(LieTree::node(y, LieTree::node(x, z)));
        let minus = num_bigint::BigInt::from(-1);
        prop_assert!(a.add(&b.scale(&minus)).add(&c.scale(&minus)).is_zero(), "degree {}", deg);
    }

    #[test]
    fn antisymmetry(x in tree(2), y in tree(2)) {
        let a = normalize_bracket(&LieTree::node(x.clone(), y.clone()), N);
        let b = normalize_bracket(&LieTree::node(y, x), N);
        prop_assert!(a.add(&b).is_zero());
    }
}
