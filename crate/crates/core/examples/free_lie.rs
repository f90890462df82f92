//! Lyndon bases, the kernel D_k of the bracket map, and quasi-Lie torsion.

use johnson_levine::freelie::quasi::quasi_lie;
use johnson_levine::freelie::{default_names, dk_basis, lyndon_basis, normalize_bracket, witt, LieTree};

fn main() {
    for k in 1..=5 {
        println!("n = 2, degree {k}: {} Lyndon words (Witt {})", lyndon_basis(2, k).len(), witt(2, k));
    }

    let names = default_names(3);
    let t = LieTree::parse("[x2,[x1,x3]]", &names).unwrap();
    println!("{} = {}", t.render(&names), normalize_bracket(&t, 3).to_json(&names));

    for g in 1..=3 {
        println!("rank D_1(Z^{}) = {}", 2 * g, dk_basis(2 * g, 1).rank());
    }

    for k in 2..=4 {
        let q = quasi_lie(2, k);
        println!("quasi-Lie degree {k} on 2 generators: free rank {}, torsion {:?}", q.free_rank(), q.torsion());
    }
}
