//! Seeded random elements of the filtrations, built so that membership holds
//! by construction and is then re-checked.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::freegroup::{check_boundary_fixed, Alphabet, Endo, Word};
use crate::johnson::{jk_member, jkl_member};
use crate::memo::Memo;

/// An automorphism together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub map: Endo,
    pub inverse: Endo,
}

impl Automorphism {
    pub fn identity(g: usize) -> Self {
        let e = Endo::identity(Alphabet::surface(g));
        Automorphism { map: e.clone(), inverse: e }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: self.map.compose(&other.map).expect("same alphabet"),
            inverse: other.inverse.compose(&self.inverse).expect("same alphabet"),
        }
    }

    pub fn inverted(&self) -> Automorphism {
        Automorphism { map: self.inverse.clone(), inverse: self.map.clone() }
    }

    /// `f ∘ self ∘ f⁻¹`
    pub fn conjugate_by(&self, f: &Automorphism) -> Automorphism {
        f.compose(self).compose(&f.inverted())
    }

    /// `self ∘ other ∘ self⁻¹ ∘ other⁻¹`
    pub fn commutator(&self, other: &Automorphism) -> Automorphism {
        self.compose(other).compose(&self.inverted()).compose(&other.inverted())
    }

    pub fn size(&self) -> usize {
        self.map.max_image_length().max(self.inverse.max_image_length())
    }
}

fn w(g: usize, text: &str) -> Word {
    Word::parse(&Alphabet::surface(g), text).expect("generator names")
}

fn endo(g: usize, images: &[(usize, String)]) -> Endo {
    let changes: Vec<(usize, Word)> = images.iter().map(|(i, t)| (*i, w(g, t))).collect();
    Endo::with_images(Alphabet::surface(g), &changes)
}

/// `β_i ↦ α_i β_i`.
pub fn meridian_twist(g: usize, i: usize) -> Automorphism {
    let (a, b) = (format!("a{}", i + 1), format!("b{}", i + 1));
    Automorphism {
        map: endo(g, &[(g + i, format!("{a} {b}"))]),
        inverse: endo(g, &[(g + i, format!("{a}^-1 {b}"))]),
    }
}

/// `α_i ↦ α_i β_i⁻¹`.
pub fn longitude_twist(g: usize, i: usize) -> Automorphism {
    let (a, b) = (format!("a{}", i + 1), format!("b{}", i + 1));
    Automorphism {
        map: endo(g, &[(i, format!("{a} {b}^-1"))]),
        inverse: endo(g, &[(i, format!("{a} {b}"))]),
    }
}

/// A boundary-fixing map mixing handles `i` and `i + 1`.
pub fn handle_mix(g: usize, i: usize) -> Automorphism {
    let (a1, a2, b1, b2) = (format!("a{}", i + 1), format!("a{}", i + 2), format!("b{}", i + 1), format!("b{}", i + 2));
    let t = |s: &str| s.replace("A1", &a1).replace("A2", &a2).replace("B1", &b1).replace("B2", &b2);
    Automorphism {
        map: endo(
            g,
            &[
                (i, t("B1 A1^-1 B2^-1 A2 A1")),
                (i + 1, t("B2 A1 B1^-1")),
                (g + i, t("B1 A1^-1 B2^-1 A2 B1")),
                (g + i + 1, t("B2 A2^-1 B2 A1 B1^-1")),
            ],
        ),
        inverse: endo(
            g,
            &[
                (i, t("A2^-1 B2 A1 B1^-1 A1")),
                (i + 1, t("A2 B1 A1^-1 B2^-1 A2")),
                (g + i, t("A2^-1 B2 A1")),
                (g + i + 1, t("B2 B1 A1^-1 B2^-1 A2")),
            ],
        ),
    }
}

/// The boundary-fixing generators used for sampling, with their inverses.
pub fn boundary_generators(g: usize) -> Vec<Automorphism> {
    let mut out = Vec::new();
    for i in 0..g {
        out.push(meridian_twist(g, i));
        out.push(longitude_twist(g, i));
    }
    for i in 0..g.saturating_sub(1) {
        out.push(handle_mix(g, i));
    }
    let inv: Vec<Automorphism> = out.iter().map(Automorphism::inverted).collect();
    out.extend(inv);
    out
}

pub fn random_letter(rng: &mut impl Rng, n: usize) -> Word {
    let i = rng.gen_range(0..n);
    if rng.gen_bool(0.5) {
        Word::generator(i)
    } else {
        Word::generator_inverse(i)
    }
}

pub fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> Word {
    (0..len).fold(Word::identity(), |acc, _| acc.mul(&random_letter(rng, n)))
}

/// Word in the given generators.
pub fn random_word_in(rng: &mut impl Rng, gens: &[usize], len: usize) -> Word {
    (0..len).fold(Word::identity(), |acc, _| {
        let i = *gens.choose(rng).expect("nonempty");
        acc.mul(&if rng.gen_bool(0.5) { Word::generator(i) } else { Word::generator_inverse(i) })
    })
}

fn short_word_in(rng: &mut impl Rng, gens: &[usize]) -> Word {
    let len = rng.gen_range(1..=2);
    random_word_in(rng, gens, len)
}

/// A nested commutator of weight `weight` whose entries are short words in
/// the given generators.
pub fn random_commutator_in(rng: &mut impl Rng, gens: &[usize], weight: usize) -> Word {
    let mut c = short_word_in(rng, gens);
    for _ in 1..weight {
        let y = short_word_in(rng, gens);
        c = if rng.gen_bool(0.5) { Word::commutator(&c, &y) } else { Word::commutator(&y, &c) };
    }
    c
}

/// Like [`random_commutator_in`], drawing half the time from the `β`
/// generators only so that the projection to the handlebody group survives.
pub fn random_commutator(rng: &mut impl Rng, g: usize, weight: usize) -> Word {
    let gens: Vec<usize> = if rng.gen_bool(0.5) { (g..2 * g).collect() } else { (0..2 * g).collect() };
    random_commutator_in(rng, &gens, weight)
}

/// Product of Nielsen moves `x ↦ x·c` or `x ↦ c·x` with `c ∈ Γ_{k+1}`.
pub fn random_jk(rng: &mut impl Rng, g: usize, k: usize) -> Endo {
    let n = 2 * g;
    let mut h = Endo::identity(Alphabet::surface(g));
    for _ in 0..rng.gen_range(1..=3) {
        let x = rng.gen_range(0..n);
        let c = random_commutator(rng, g, k + 1);
        let img = if rng.gen_bool(0.5) { Word::generator(x).mul(&c) } else { c.mul(&Word::generator(x)) };
        let mv = Endo::with_images(h.alphabet, &[(x, img)]);
        h = mv.compose(&h).expect("same alphabet");
    }
    debug_assert!(jk_member(&h, k));
    h
}

/// An elementary move for the additivity test. Moves of the first kind keep
/// `h_*` the identity on `A` and on `ι_*`; with `wide` the move `β_i ↦ β_i β_j^±`
/// is also allowed.
fn lagrangian_move(rng: &mut impl Rng, g: usize, k: usize, wide: bool) -> Endo {
    let n = 2 * g;
    let alphabet = Alphabet::surface(g);
    let i = rng.gen_range(0..g);
    let a = Word::generator(i);
    let b = Word::generator(g + i);
    let kinds = if wide && g > 1 { 6 } else { 5 };
    let change = match rng.gen_range(0..kinds) {
        0 => (i, a.mul(&random_commutator(rng, g, k + 1))),
        1 => {
            let len = rng.gen_range(1..=3);
            (i, a.conjugate(&random_word(rng, n, len)))
        }
        2 => {
            let j = rng.gen_range(0..g);
            let len = rng.gen_range(1..=2);
            (i, a.mul(&Word::commutator(&Word::generator(j), &random_word(rng, n, len))))
        }
        3 => {
            let mut m = Word::identity();
            for _ in 0..rng.gen_range(1..=2) {
                let j = rng.gen_range(0..g);
                let aj = if rng.gen_bool(0.5) { Word::generator(j) } else { Word::generator_inverse(j) };
                let len = rng.gen_range(0..=2);
                m = m.mul(&aj.conjugate(&random_word(rng, n, len)));
            }
            (g + i, b.mul(&m))
        }
        4 => (g + i, b.mul(&random_commutator(rng, g, 2))),
        _ => {
            let j = (i + rng.gen_range(1..g)) % g;
            let bj = if rng.gen_bool(0.5) { Word::generator(g + j) } else { Word::generator_inverse(g + j) };
            (g + i, b.mul(&bj))
        }
    };
    Endo::with_images(alphabet, &[change])
}

/// A pair `(h, h̃)` in `J^L_k` where `h` also satisfies `h_*|_A = Id` and
/// `ι_* h_* = ι_*`.
pub fn random_levine_pair(rng: &mut impl Rng, g: usize, k: usize) -> (Endo, Endo) {
    let mut build = |wide: bool| {
        // α_i ↦ α_i·c with c a commutator in the β, so τ^L is usually nonzero
        let i = rng.gen_range(0..g);
        let betas: Vec<usize> = (g..2 * g).collect();
        let c = random_commutator_in(rng, &betas, k + 1);
        let mut h = Endo::with_images(Alphabet::surface(g), &[(i, Word::generator(i).mul(&c))]);
        for _ in 0..rng.gen_range(0..=2) {
            h = lagrangian_move(rng, g, k, wide).compose(&h).expect("same alphabet");
        }
        h
    };
    let h = build(false);
    let ht = build(true);
    debug_assert!(jkl_member(&h, k) && jkl_member(&ht, k));
    (h, ht)
}

/// A random product of boundary-fixing generators.
fn random_boundary_product(rng: &mut impl Rng, g: usize, len: usize) -> Automorphism {
    let gens = boundary_generators(g);
    (0..len).fold(Automorphism::identity(g), |acc, _| acc.compose(gens.choose(rng).expect("nonempty")))
}

/// `f s_i^± f⁻¹` for a boundary-fixing `f` with `f_*(a_i) ∈ A`.
fn lagrangian_transvection(rng: &mut impl Rng, g: usize) -> Automorphism {
    loop {
        let len = rng.gen_range(1..=4);
        let f = random_boundary_product(rng, g, len);
        let ab = f.map.abelianization();
        let good: Vec<usize> = (0..g).filter(|&i| (g..2 * g).all(|r| ab.get(r, i).sign() == num_bigint::Sign::NoSign)).collect();
        if let Some(&i) = good.choose(rng) {
            let s = meridian_twist(g, i);
            let s = if rng.gen_bool(0.5) { s } else { s.inverted() };
            return s.conjugate_by(&f);
        }
    }
}

static TORELLI: Memo<usize, Vec<Automorphism>> = Memo::new();

/// Twists along the images of the `α_i`, `β_i` under products of at most two
/// boundary generators, deduplicated and kept when short.
fn short_twists(g: usize) -> Vec<Automorphism> {
    let gens = boundary_generators(g);
    let mut conj = vec![Automorphism::identity(g)];
    for a in &gens {
        conj.push(a.clone());
        conj.extend(gens.iter().map(|b| a.compose(b)));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in &conj {
        for i in 0..g {
            for base in [meridian_twist(g, i), longitude_twist(g, i)] {
                let t = base.conjugate_by(f);
                if t.size() <= 40 && seen.insert(t.map.clone()) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Nontrivial commutators of short twists whose transvections commute. These
/// act trivially on homology, so they lie in the Torelli group.
pub fn torelli_library(g: usize) -> Arc<Vec<Automorphism>> {
    TORELLI.get_or_insert_with(&g, || {
        let twists = short_twists(g);
        let ab: Vec<_> = twists.iter().map(|t| t.map.abelianization()).collect();
        let id = Endo::identity(Alphabet::surface(g));
        let mut out = Vec::new();
        for x in 0..twists.len() {
            for y in x + 1..twists.len() {
                if ab[x].mul(&ab[y]).expect("square") != ab[y].mul(&ab[x]).expect("square") {
                    continue;
                }
                let c = twists[x].commutator(&twists[y]);
                if c.map != id && c.size() <= 400 {
                    out.push(c);
                }
            }
        }
        out
    })
}

fn library_factor(rng: &mut impl Rng, g: usize) -> Automorphism {
    let lib = torelli_library(g);
    match lib.choose(rng) {
        Some(t) if rng.gen_bool(0.5) => t.clone(),
        Some(t) => t.inverted(),
        None => lagrangian_transvection(rng, g),
    }
}

/// A boundary-fixing automorphism in `J^L_k` for `k ∈ {1, 2}`, re-checked
/// before it is returned. Factors are Torelli library elements and twists
/// along curves homologous into `A`.
pub fn random_boundary_jkl(rng: &mut impl Rng, g: usize, k: usize) -> Automorphism {
    assert!((1..=2).contains(&k), "boundary-fixing samples exist for k = 1, 2");
    loop {
        let mut h = Automorphism::identity(g);
        for _ in 0..rng.gen_range(1..=2) {
            let x = if rng.gen_bool(0.8) { library_factor(rng, g) } else { lagrangian_transvection(rng, g) };
            h = h.compose(&x);
        }
        if jkl_member(&h.map, k) && check_boundary_fixed(&h.map).expect("surface alphabet") {
            return h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_fix_boundary_and_invert() {
        for g in [2, 3] {
            for f in boundary_generators(g) {
                assert!(check_boundary_fixed(&f.map).unwrap());
                assert_eq!(f.compose(&f.inverted()).map, Endo::identity(Alphabet::surface(g)));
            }
        }
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            assert!(jk_member(&random_jk(&mut rng, 2, 2), 2));
            let (h, ht) = random_levine_pair(&mut rng, 2, 2);
            assert!(jkl_member(&h, 2) && jkl_member(&ht, 2));
            let b = random_boundary_jkl(&mut rng, 3, 1);
            assert!(jkl_member(&b.map, 1));
        }
    }
}
