//! Magnus expansions, lower central series classes and leading Lie terms.

use johnson_levine::freegroup::{lcs_class, leading_lie_class, magnus, Alphabet, Word};

fn main() {
    let a = Alphabet::surface(1);
    let n = a.rank();
    let names: Vec<String> = (0..n).map(|i| a.name(i)).collect();
    let x = Word::parse(&a, "a1").unwrap();
    let y = Word::parse(&a, "b1").unwrap();
    let c = Word::commutator(&x, &y);
    let cc = Word::commutator(&x, &c);

    println!("[a1,b1] = {}", c.display(&a));
    println!("magnus([a1,b1]) to degree 2: {}", magnus(n, &c, 2).to_json(&a));
    for (label, w) in [("a1", &x), ("[a1,b1]", &c), ("[a1,[a1,b1]]", &cc)] {
        println!("lcs class of {label}: {}", lcs_class(n, w, 4));
    }
    println!("leading class of [a1,[a1,b1]] in degree 3: {}", leading_lie_class(n, &cc, 3).unwrap().to_json(&names));
}
