//! Composition in the top-substantial diagram category.

use johnson_levine::diagrams::Diagram;
use johnson_levine::tsa::samples::random_small_morphism;
use johnson_levine::tsa::{compose, minus, plus, upper_tree_reduction, LinkingMatrix, Series, TsMorphism};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let cap = 4;
    let id = TsMorphism::identity(2, cap);
    println!("identity strut generator: {:?}", id.strut_generator().iter().map(|(a, b, c)| (a, b, c.to_string())).collect::<Vec<_>>());

    let one = BigRational::from_integer(1.into());
    let y = Series::from_combination(&vec![(Diagram::empty(), one.clone()), (Diagram::y(plus(0), plus(1), minus(0)), one)]);
    let lk = LinkingMatrix::identity_cylinder(2);
    let base = TsMorphism::from_linking(&lk, cap).unwrap();
    let d = TsMorphism::new(2, 2, cap, base.lk.clone(), y).unwrap();
    let dd = compose(&d, &d, cap).unwrap();
    println!("D∘D has {} terms", dd.y.len());
    println!("{}", serde_json::to_string(&dd.to_json()).unwrap());
    println!("upper-tree part: {} terms", upper_tree_reduction(&dd).len());

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (a, b, c) = (random_small_morphism(&mut rng, 2, cap), random_small_morphism(&mut rng, 2, cap), random_small_morphism(&mut rng, 2, cap));
    let assoc = compose(&compose(&a, &b, cap).unwrap(), &c, cap).unwrap() == compose(&a, &compose(&b, &c, cap).unwrap(), cap).unwrap();
    println!("associative on a random triple: {assoc}");
}
