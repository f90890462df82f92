//! Leading upper-tree terms add when ILC-shaped morphisms are composed.

use johnson_levine::tsa::samples::random_ilc_morphism;
use johnson_levine::tsa::leading_additivity;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in [1, 2] {
        for g in [2, 3] {
            let d = random_ilc_morphism(&mut rng, g, k);
            let e = random_ilc_morphism(&mut rng, g, k);
            let r = leading_additivity(&d, &e, k).unwrap();
            let nonzero = r.expected.coeffs.iter().filter(|c| !c.is_zero()).count();
            println!("g = {g}, k = {k}: holds {}, {nonzero} nonzero leading coordinates", r.holds());
        }
    }
}
