//! Lagrangian cobordism classes read off linking matrices.

use johnson_levine::tsa::{classify_cobordism, LinkingMatrix};
use num_bigint::BigInt;

fn z(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn main() {
    let cases = [
        ("trivial cylinder", LinkingMatrix::identity_cylinder(2)),
        ("(0 Id; Id Δ)", LinkingMatrix::from_blocks(&z(&[&[1, 0], &[0, 1]]), &z(&[&[-1, 1], &[1, 0]])).unwrap()),
        ("(0 Λᵀ; Λ Δ)", LinkingMatrix::from_blocks(&z(&[&[1, 2], &[0, 1]]), &z(&[&[0, 0], &[0, 0]])).unwrap()),
    ];
    for (label, l) in &cases {
        let c = classify_cobordism(l).unwrap();
        println!("{label}: {}", c.verdict);
    }
    let sparse = serde_json::json!({"1+": {"1-": 1}, "1-": {"1-": 2}});
    let l = LinkingMatrix::from_json(&sparse).unwrap();
    println!("{sparse} → {}", classify_cobordism(&l).unwrap().to_json());
}
