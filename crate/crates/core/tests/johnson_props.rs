use johnson_levine::exactla::IntMatrix;
use johnson_levine::freegroup::{Alphabet, Endo};
use johnson_levine::johnson::samples::{
    boundary_generators, meridian_twist, random_boundary_jkl, random_jk, random_levine_pair, Automorphism,
};
use johnson_levine::johnson::{iota_star_dk, jkl_member, sp_classify, tau_k, tau_k_levine};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn commuting_square(seed in any::<u64>(), k in 1usize..=2) {
        let h = random_jk(&mut ChaCha8Rng::seed_from_u64(seed), 2, k);
        prop_assert_eq!(iota_star_dk(&tau_k(&h, k).unwrap().value).unwrap(), tau_k_levine(&h, k).unwrap().value);
    }

    #[test]
    fn levine_additivity(seed in any::<u64>(), k in 1usize..=2, g in 2usize..=3) {
        let (h, ht) = random_levine_pair(&mut ChaCha8Rng::seed_from_u64(seed), g, k);
        let sum = tau_k_levine(&h, k).unwrap().value.add(&tau_k_levine(&ht, k).unwrap().value);
        prop_assert_eq!(tau_k_levine(&h.compose(&ht).unwrap(), k).unwrap().value, sum);
    }

    #[test]
    fn boundary_fixing_values_lie_in_dk(seed in any::<u64>(), k in 1usize..=2, g in 2usize..=3) {
        let h = random_boundary_jkl(&mut ChaCha8Rng::seed_from_u64(seed), g, k);
        let t = tau_k_levine(&h.map, k).unwrap();
        prop_assert!(t.boundary_fixed && t.value.bracket_vanishes());
    }

    #[test]
    fn vanishing_value_means_next_filtration_step(seed in any::<u64>(), k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (h, ht) = random_levine_pair(&mut rng, 2, k);
        let b = random_boundary_jkl(&mut rng, 2, k).map;
        for m in [h, ht, b] {
            if tau_k_levine(&m, k).unwrap().value.is_zero() {
                prop_assert!(jkl_member(&m, k + 1));
            }
        }
    }

    #[test]
    fn symplectic_blocks(seed in any::<u64>(), g in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = boundary_generators(g);
        let len = rng.gen_range(0..6);
        let f = (0..len).fold(Automorphism::identity(g), |acc, _| acc.compose(gens.choose(&mut rng).unwrap()));
        let c = sp_classify(&f.map.abelianization()).unwrap();
        prop_assert!(c.is_sp);
        if c.is_strongly_lagrangian {
            prop_assert_eq!(&c.blocks.as_ref().unwrap().2, &IntMatrix::identity(g));
        }
        let twists = (0..rng.gen_range(1..4)).fold(Automorphism::identity(g), |acc, _| acc.compose(&meridian_twist(g, rng.gen_range(0..g))));
        prop_assert!(sp_classify(&twists.map.abelianization()).unwrap().is_strongly_lagrangian);
    }
}

#[test]
fn identity_has_zero_values() {
    let id = Endo::identity(Alphabet::surface(2));
    assert!(tau_k(&id, 1).unwrap().value.is_zero());
    assert!(tau_k_levine(&id, 2).unwrap().value.is_zero());
}
