use johnson_levine::exactla::{integer_kernel, invariant_factors, rational_rank, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| {
            IntMatrix::from_rows(v.chunks(c).map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
        })
    })
}

fn unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && invariant_factors(m).len() == m.rows() && invariant_factors(m).iter().all(One::is_one)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_decomposition_is_exact(a in matrix()) {
        let d = smith_normal_form(&a);
        prop_assert_eq!(d.u.mul(&a).unwrap().mul(&d.v).unwrap(), d.s.clone());
        prop_assert!(unimodular(&d.u) && unimodular(&d.v));
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                prop_assert!(i == j || d.s.get(i, j).is_zero());
            }
        }
        let f = d.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(f.iter().all(|x| *x > BigInt::zero()));
    }

    #[test]
    fn rank_counts_invariant_factors(a in matrix()) {
        prop_assert_eq!(rational_rank(&a.to_rows()), invariant_factors(&a).len());
        prop_assert_eq!(a.rank(), invariant_factors(&a).len());
    }

    #[test]
    fn kernel_is_a_basis(a in matrix()) {
        let k = integer_kernel(&a);
        prop_assert_eq!(k.rows(), a.cols());
        prop_assert_eq!(k.cols(), a.cols() - a.rank());
        if k.cols() > 0 {
            prop_assert!(a.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
            // saturated: the kernel lattice has no torsion quotient
            prop_assert!(invariant_factors(&k).iter().all(One::is_one));
        }
    }
}
