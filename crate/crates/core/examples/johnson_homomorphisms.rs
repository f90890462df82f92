//! The Johnson and Johnson-Levine homomorphisms on explicit maps.

use johnson_levine::freegroup::{check_boundary_fixed, Alphabet, Endo};
use johnson_levine::johnson::samples::random_jk;
use johnson_levine::johnson::{iota_star_dk, jkl_member, tau_k, tau_k_levine};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let g = 2;
    let a = Alphabet::surface(g);
    let surface: Vec<String> = (0..2 * g).map(|i| a.name(i)).collect();
    let handle: Vec<String> = (0..g).map(|i| Alphabet::handlebody(g).name(i)).collect();

    // α1 ↦ α1·[β1,β2]: in J_1^L, but the boundary word moves
    let pairs = vec![("a1".to_string(), "a1 b1 b2 b1^-1 b2^-1".to_string())];
    let h = Endo::parse(a, &pairs).unwrap();
    println!("in J_1^L: {}, boundary fixed: {}", jkl_member(&h, 1), check_boundary_fixed(&h).unwrap());
    let t = tau_k_levine(&h, 1).unwrap();
    println!("tau^L_1 = {}", t.value.to_json(&handle));
    println!("bracket vanishes: {}", t.value.bracket_vanishes());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (h, tau) = loop {
        let h = random_jk(&mut rng, g, 1);
        let tau = tau_k(&h, 1).unwrap().value;
        if !tau.coeffs.iter().all(|c| c.is_zero()) {
            break (h, tau);
        }
    };
    println!("random map in J_1: {}", h.to_json());
    println!("tau_1 = {}", tau.to_json(&surface));
    println!("iota_* tau_1 = tau^L_1: {}", iota_star_dk(&tau).unwrap() == tau_k_levine(&h, 1).unwrap().value);
}
