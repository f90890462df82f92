//! Tree diagrams modulo AS and IHX, the map eta and its rational inverse.

use johnson_levine::diagrams::{check_eta, eta, eta_inverse, ker_iota_generators, normal_form, tree_space, Diagram};
use num_rational::BigRational;

fn main() {
    for (n, k) in [(3, 1), (2, 2), (4, 2)] {
        println!("dim T_{k}(Z^{n}) = {}", tree_space(n, k).dim());
    }

    let one = BigRational::from_integer(1.into());
    let y = vec![(Diagram::y(0, 1, 2), one.clone())];
    let flipped = vec![(Diagram::y(1, 0, 2), one)];
    println!("Y(1,2,3) + Y(2,1,3) = 0: {}", normal_form(3, 1, &[y.clone(), flipped].concat()).unwrap().is_zero());

    let x = eta(3, 1, &y);
    let names: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    println!("eta(Y) = {}", x.to_json(&names));
    println!("eta_inverse(eta(Y)) = Y: {}", eta_inverse(&x).unwrap() == normal_form(3, 1, &y).unwrap());

    let r = check_eta(4, 2).unwrap();
    println!("n = 4, k = 2: tree dim {}, D_k rank {}, isomorphism {}", r.tree_dim, r.dk_rank, r.holds());

    let kg = ker_iota_generators(2, 2);
    println!("ker(iota_*) at g = 2, k = 2: rank {}, spanned {}", kg.kernel_rank, kg.spans());
}
