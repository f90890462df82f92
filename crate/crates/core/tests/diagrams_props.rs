use johnson_levine::diagrams::{check_eta, eta_q_kernel, eta_tree, normal_form, tree_space, Combination, Diagram};
use johnson_levine::freelie::LieTree;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const N: usize = 3;

fn tree_with(leaves: usize) -> BoxedStrategy<LieTree> {
    if leaves == 1 {
        return (0..N).prop_map(LieTree::leaf).boxed();
    }
    (1..leaves).prop_flat_map(move |cut| (tree_with(cut), tree_with(leaves - cut)).prop_map(|(a, b)| LieTree::node(a, b))).boxed()
}

fn rooted(k: usize) -> impl Strategy<Value = Diagram> {
    ((0..N as u32), tree_with(k + 1)).prop_map(|(r, t)| Diagram::from_rooted(r, &t))
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

#[test]
fn eta_lands_in_dk() {
    for n in [2, 4] {
        for k in 1..=3 {
            for t in &tree_space(n, k).gens {
                assert!(eta_tree(n, t).bracket_vanishes(), "n = {n}, k = {k}");
            }
        }
    }
}

#[test]
fn eta_is_a_rational_isomorphism() {
    for (g, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        assert!(check_eta(2 * g, k).unwrap().holds(), "g = {g}, k = {k}");
    }
}

#[test]
fn quasi_kernel_is_killed_by_k_plus_two() {
    for g in [1, 2] {
        for k in [1, 2] {
            let (free, torsion) = eta_q_kernel(2 * g, k).unwrap();
            assert_eq!(free, 0);
            assert!(torsion.iter().all(|t| (BigInt::from(k + 2) % t) == BigInt::from(0)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normal_form_is_idempotent(ts in prop::collection::vec((rooted(3), -3i64..=3), 1..4)) {
        let raw: Combination = ts.into_iter().filter(|(d, _)| d.ideg() == 3).map(|(d, c)| (d, BigRational::from_integer(c.into()))).collect();
        let v = normal_form(N, 3, &raw).unwrap();
        prop_assert_eq!(normal_form(N, 3, &v.to_combination()).unwrap(), v);
    }

    #[test]
    fn flip_negates(d in rooted(2)) {
        let v = normal_form(N, 2, &vec![(d.clone(), one())]).unwrap();
        let tri = d.verts.iter().position(|x| *x == johnson_levine::diagrams::Vertex::Tri).unwrap();
        let w = normal_form(N, 2, &vec![(d.flip(tri), one())]).unwrap();
        prop_assert!(v.coeffs.iter().zip(&w.coeffs).all(|(a, b)| a == &-b.clone()));
    }

    #[test]
    fn ihx_vanishes(r in 0..N as u32, x in tree_with(1), y in tree_with(1), z in tree_with(2)) {
        let m = -one();
        let raw = vec![
            (Diagram::from_rooted(r, &LieTree::node(x.clone(), LieTree::node(y.clone(), z.clone()))), one()),
            (Diagram::from_rooted(r, &LieTree::node(LieTree::node(x.clone(), y.clone()), z.clone())), m.clone()),
            (Diagram::from_rooted(r, &LieTree::node(y, LieTree::node(x, z))), m),
        ];
        prop_assert!(normal_form(N, 3, &raw).unwrap().is_zero());
    }
}
