//! The degree-2 Milnor invariant of the Borromean rings' longitudes.

use johnson_levine::freelie::DkElement;
use num_rational::BigRational;
use johnson_levine::johnson::{mj_identify, milnor_mu, parse_longitudes};

fn main() {
    let words: Vec<String> = ["u2 u3 u2^-1 u3^-1", "u3 u1 u3^-1 u1^-1", "u1 u2 u1^-1 u2^-1"].map(String::from).to_vec();
    let m = milnor_mu(3, 2, &parse_longitudes(3, &words).unwrap()).unwrap();
    let names: Vec<String> = (1..=3).map(|i| format!("u{i}")).collect();
    println!("mu_2 = {}", m.value.to_json(&names));
    println!("bracket vanishes: {}", m.bracket_vanishes);

    // a_1 ↦ −u_1, b_1 ↦ u_2 on a genus-1 tensor
    let mut x = DkElement::zero(2, 1);
    x.coeffs[0] = BigRational::from_integer(1.into());
    let names2: Vec<String> = (1..=2).map(|i| format!("u{i}")).collect();
    println!("identified: {}", mj_identify(&x).unwrap().to_json(&names2));
}
