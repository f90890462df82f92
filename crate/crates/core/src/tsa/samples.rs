//! Seeded synthetic morphisms for the category laws and the leading-term
//! additivity check.

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{minus, plus, Series, TsMorphism};
use crate::diagrams::{Color, Dart, Diagram};
use crate::freelie::LieTree;

fn random_shape(rng: &mut impl Rng, leaves: &[Color]) -> LieTree {
    if leaves.len() == 1 {
        return LieTree::leaf(leaves[0] as usize);
    }
    let cut = rng.gen_range(1..leaves.len());
    LieTree::node(random_shape(rng, &leaves[..cut]), random_shape(rng, &leaves[cut..]))
}

/// A random tree of i-degree `k ≥ 1` with legs drawn from `palette`.
pub fn random_tree(rng: &mut impl Rng, palette: &[Color], k: usize) -> Diagram {
    let leaves: Vec<Color> = (0..=k).map(|_| *palette.choose(rng).expect("nonempty palette")).collect();
    Diagram::from_rooted(*palette.choose(rng).expect("nonempty palette"), &random_shape(rng, &leaves))
}

/// Two trivalent vertices joined by a double edge, each carrying one leg.
pub fn bubble(a: Color, b: Color) -> Diagram {
    let mut d = Diagram::empty();
    let (u, v) = (d.add_tri(), d.add_tri());
    let (x, y) = (d.add_leg(a), d.add_leg(b));
    d.connect(Dart::new(u, 0), Dart::new(x, 0));
    d.connect(Dart::new(v, 0), Dart::new(y, 0));
    d.connect(Dart::new(u, 1), Dart::new(v, 1));
    d.connect(Dart::new(u, 2), Dart::new(v, 2));
    d
}

fn small_coeff(rng: &mut impl Rng) -> BigRational {
    let n = *[-2i64, -1, 1, 2, 3].choose(rng).expect("nonempty");
    let d = *[1i64, 1, 2].choose(rng).expect("nonempty");
    BigRational::new(n.into(), d.into())
}

fn small_int(rng: &mut impl Rng) -> BigRational {
    BigRational::from_integer(rng.gen_range(-1i64..=1).into())
}

/// A random top-substantial record on `⌊g⌉⁺ ⊔ ⌊g⌉⁻`.
fn random_record(rng: &mut impl Rng, g: usize) -> Vec<Vec<BigRational>> {
    let mut lk = vec![vec![BigRational::zero(); 2 * g]; 2 * g];
    for i in 0..g {
        for j in 0..g {
            let x = small_int(rng);
            lk[i][g + j] = x.clone();
            lk[g + j][i] = x;
            if j >= i {
                let y = small_int(rng);
                lk[g + i][g + j] = y.clone();
                lk[g + j][g + i] = y;
            }
        }
    }
    lk
}

/// An endomorphism of `g` with a random record and at most two summands of
/// i-degree at most 2 next to `∅`, some of them looped.
pub fn random_small_morphism(rng: &mut impl Rng, g: usize, cap: usize) -> TsMorphism {
    let palette: Vec<Color> = (0..g).flat_map(|i| [plus(i), minus(i)]).collect();
    let mut terms = vec![(Diagram::empty(), BigRational::from_integer(1.into()))];
    for _ in 0..rng.gen_range(1..=2) {
        let d = if rng.gen_bool(0.2) {
            bubble(*palette.choose(rng).expect("nonempty"), *palette.choose(rng).expect("nonempty"))
        } else {
            let k = rng.gen_range(1..=2);
            random_tree(rng, &palette, k)
        };
        terms.push((d, small_coeff(rng)));
    }
    TsMorphism::new(g, g, cap, random_record(rng, g), Series::from_combination(&terms)).expect("top-substantial by construction")
}

/// An ILC-shaped endomorphism of `g`: record `(0 Id; Id Δ)` and
/// `∅ + D_k + (terms with ⌊g⌉⁻ legs or loops below k) + (i-deg > k)`.
pub fn random_ilc_morphism(rng: &mut impl Rng, g: usize, k: usize) -> TsMorphism {
    let cap = k + 1;
    let mut lk = random_record(rng, g);
    for i in 0..g {
        for j in 0..g {
            let x = BigRational::from_integer(((i == j) as i64).into());
            lk[i][g + j] = x.clone();
            lk[g + j][i] = x;
        }
    }
    let pluses: Vec<Color> = (0..g).map(plus).collect();
    let all: Vec<Color> = (0..g).flat_map(|i| [plus(i), minus(i)]).collect();
    let mut terms = vec![(Diagram::empty(), BigRational::from_integer(1.into()))];
    for _ in 0..rng.gen_range(1..=2) {
        terms.push((random_tree(rng, &pluses, k), small_coeff(rng)));
    }
    for low in 1..k {
        let mut t = random_tree(rng, &all, low);
        let (leg, _) = t.legs().next().expect("trees have legs");
        t.verts[leg] = crate::diagrams::Vertex::Leg(minus(rng.gen_range(0..g)));
        terms.push((t, small_coeff(rng)));
    }
    terms.push((random_tree(rng, &all, k + 1), small_coeff(rng)));
    if k >= 2 {
        terms.push((bubble(*pluses.choose(rng).expect("nonempty"), *pluses.choose(rng).expect("nonempty")), small_coeff(rng)));
    }
    TsMorphism::new(g, g, cap, lk, Series::from_combination(&terms)).expect("top-substantial by construction")
}
