use johnson_levine::diagrams::{eta, normal_form, Diagram};
use johnson_levine::freegroup::{Alphabet, Endo};
use johnson_levine::johnson::samples::random_boundary_jkl;
use johnson_levine::johnson::tau_k_levine;
use johnson_levine::tsa::samples::{random_ilc_morphism, random_small_morphism};
use johnson_levine::tsa::{
    classify_cobordism, compose, diagrammatic_tau_levine, leading_additivity_check, strut_exp, LinkingMatrix, TsMorphism, Verdict,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: usize = 4;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn strut_exponential_of_the_trivial_cylinder() {
    for g in 1..=3 {
        let half: Vec<Vec<BigRational>> = LinkingMatrix::identity_cylinder(g)
            .entries
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), BigInt::from(2))).collect())
            .collect();
        assert_eq!(strut_exp(g, g, &half, CAP).unwrap(), TsMorphism::identity(g, CAP));
    }
}

#[test]
fn diagrammatic_value_of_a_y_element() {
    let y = vec![(Diagram::y(0, 1, 2), BigRational::one())];
    let target = eta(3, 1, &y);
    let mut r = rng(3);
    let h = (0..4000)
        .find_map(|_| {
            let h = random_boundary_jkl(&mut r, 3, 1);
            let v = tau_k_levine(&h.map, 1).unwrap().value;
            if v == target {
                Some(h.map)
            } else if v == target.scale(&-BigRational::one()) {
                Some(h.inverse)
            } else {
                None
            }
        })
        .expect("a sample with value ±Y(t1,t2,t3)");
    assert_eq!(diagrammatic_tau_levine(&h, 1).unwrap(), normal_form(3, 1, &y).unwrap());
    assert!(diagrammatic_tau_levine(&Endo::identity(Alphabet::surface(3)), 1).unwrap().is_zero());
}

fn block_matrix(r: &mut ChaCha8Rng, g: usize) -> LinkingMatrix {
    let mut m = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
    let mut set = |i: usize, j: usize, x: i64| {
        m[i][j] = x.into();
        m[j][i] = x.into();
    };
    let (pp, lam_id, delta_zero) = (r.gen_bool(0.3), r.gen_bool(0.6), r.gen_bool(0.5));
    for i in 0..g {
        for j in 0..g {
            if pp && j >= i {
                set(i, j, r.gen_range(-1..=1));
            }
            set(g + i, j, if lam_id { i64::from(i == j) } else { r.gen_range(-2..=2) });
            if !delta_zero && j >= i {
                set(g + i, g + j, r.gen_range(-2..=2));
            }
        }
    }
    LinkingMatrix::new(g, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identity_and_associativity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=2);
        let (a, b, c) = (random_small_morphism(&mut r, g, CAP), random_small_morphism(&mut r, g, CAP), random_small_morphism(&mut r, g, CAP));
        let id = TsMorphism::identity(g, CAP);
        prop_assert_eq!(&compose(&id, &a, CAP).unwrap(), &a);
        prop_assert_eq!(&compose(&a, &id, CAP).unwrap(), &a);
        let left = compose(&compose(&a, &b, CAP).unwrap(), &c, CAP).unwrap();
        let right = compose(&a, &compose(&b, &c, CAP).unwrap(), CAP).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composites_stay_top_substantial_with_additive_degree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = r.gen_range(1..=2);
        let (a, b) = (random_small_morphism(&mut r, g, CAP), random_small_morphism(&mut r, g, CAP));
        let ab = compose(&a, &b, CAP).unwrap();
        prop_assert!(ab.is_top_substantial());
        let da: Vec<usize> = a.y.terms().iter().map(|(t, _)| t.ideg()).collect();
        let db: Vec<usize> = b.y.terms().iter().map(|(t, _)| t.ideg()).collect();
        for (t, _) in ab.y.terms() {
            prop_assert!(da.iter().any(|x| db.iter().any(|y| x + y == t.ideg())), "i-degree {} not a sum", t.ideg());
        }
    }

    #[test]
    fn leading_terms_add(seed in any::<u64>(), k in 1usize..=2, g in 2usize..=3) {
        let mut r = rng(seed);
        let (d, e) = (random_ilc_morphism(&mut r, g, k), random_ilc_morphism(&mut r, g, k));
        prop_assert!(leading_additivity_check(&d, &e, k).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn classification_is_monotone(seed in any::<u64>(), g in 1usize..=3) {
        let l = block_matrix(&mut rng(seed), g);
        let e = &l.entries;
        let lc = (0..g).all(|i| (0..g).all(|j| e[i][j].is_zero()));
        let ilc = lc && (0..g).all(|i| (0..g).all(|j| e[g + i][j] == BigInt::from(u8::from(i == j))));
        let ic = ilc && (0..g).all(|i| (0..g).all(|j| e[g + i][g + j].is_zero()));
        let v = classify_cobordism(&l).unwrap().verdict;
        prop_assert_eq!(v >= Verdict::Lc, lc);
        prop_assert_eq!(v >= Verdict::Ilc, ilc);
        prop_assert_eq!(v >= Verdict::Ic, ic);
    }
}
