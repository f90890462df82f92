use johnson_levine::freegroup::{iota_project, lcs_class, leading_lie_class, magnus, Alphabet, Endo, Word};
use johnson_levine::johnson::samples::{random_commutator_in, random_word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const G: usize = 2;
const N: usize = 2 * G;

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1i32..=N as i32, any::<bool>()), 0..max)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(i, s)| if s { i } else { -i })))
}

fn commutator(seed: u64, k: usize) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<usize> = (0..N).collect();
    loop {
        let w = random_commutator_in(&mut rng, &gens, k);
        if w.len() <= 8 || k > 3 {
            return w;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn magnus_is_multiplicative(v in word(8), w in word(8), cap in 1usize..=5) {
        prop_assert_eq!(magnus(N, &v.mul(&w), cap), magnus(N, &v, cap).mul(&magnus(N, &w, cap)));
    }

    #[test]
    fn magnus_of_inverse(w in word(10), cap in 1usize..=5) {
        prop_assert!(magnus(N, &w, cap).mul(&magnus(N, &w.inverse(), cap)).is_one());
    }

    #[test]
    fn reduction_is_stable(w in word(12)) {
        let again = Word::from_letters(w.letters().iter().copied());
        prop_assert_eq!(&again, &w);
        prop_assert!(w.letters().windows(2).all(|p| p[0] != -p[1]));
    }

    #[test]
    fn commutators_sit_in_their_weight(seed in any::<u64>(), k in 1usize..=4) {
        let c = commutator(seed, k);
        prop_assert!(lcs_class(N, &c, k + 1).at_least(k));
    }

    #[test]
    fn leading_class_is_additive(s1 in any::<u64>(), s2 in any::<u64>(), k in 1usize..=4) {
        let (x, y) = (commutator(s1, k), commutator(s2, k));
        let sum = leading_lie_class(N, &x, k).unwrap().add(&leading_lie_class(N, &y, k).unwrap());
        prop_assert_eq!(leading_lie_class(N, &x.mul(&y), k).unwrap(), sum);
    }

    #[test]
    fn projection_kills_conjugated_meridians(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Alphabet::surface(G);
        let mut changes = Vec::new();
        for i in 0..G {
            changes.push((i, Word::generator(i).conjugate(&random_word(&mut rng, N, 3))));
            changes.push((G + i, random_word(&mut rng, N, 4)));
        }
        let h = Endo::with_images(a, &changes);
        for i in 0..G {
            prop_assert!(iota_project(&a, &h.apply(&Word::generator(i))).unwrap().is_empty());
        }
    }
}
