//! A boundary-fixing map with tau^L_1 = eta(Y(t1,t2,t3)) and its tree.

use johnson_levine::diagrams::{eta, json::combination_to_json, Diagram};
use johnson_levine::johnson::samples::random_boundary_jkl;
use johnson_levine::johnson::tau_k_levine;
use johnson_levine::tsa::{diagrammatic_tau_levine, plus_names};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let one = BigRational::from_integer(1.into());
    let target = eta(3, 1, &vec![(Diagram::y(0, 1, 2), one.clone())]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tries = 0;
    let h = loop {
        tries += 1;
        let h = random_boundary_jkl(&mut rng, 3, 1);
        let v = tau_k_levine(&h.map, 1).unwrap().value;
        if v == target {
            break h.map;
        }
        if v == target.scale(&-one.clone()) {
            break h.inverse;
        }
    };
    println!("found after {tries} samples: {}", h.to_json());
    let d = diagrammatic_tau_levine(&h, 1).unwrap();
    println!("{}", combination_to_json(&d.to_combination(), &plus_names(3)));
}
