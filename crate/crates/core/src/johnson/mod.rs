//! Symplectic and Lagrangian classification, the Johnson and Johnson-Levine
//! filtrations and homomorphisms, and the Milnor map.

pub mod samples;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactla::IntMatrix;
use crate::freegroup::{check_boundary_fixed, iota_project, lcs_class, leading_lie_class, Alphabet, AlphabetKind, Endo, Word};
use crate::freelie::DkElement;

/// `J = (0 Id; −Id 0)`.
pub fn symplectic_form(g: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, g + i, BigInt::one());
        j.set(g + i, i, -BigInt::one());
    }
    j
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpClassification {
    pub is_sp: bool,
    pub is_lagrangian: bool,
    pub is_strongly_lagrangian: bool,
    /// `(P, Q, R)` of `M = (P Q; 0 R)` when the lower-left block vanishes.
    pub blocks: Option<(IntMatrix, IntMatrix, IntMatrix)>,
}

fn block(m: &IntMatrix, r0: usize, c0: usize, n: usize) -> IntMatrix {
    let mut b = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b.set(i, j, m.get(r0 + i, c0 + j).clone());
        }
    }
    b
}

/// Columns of `M` are the images of `a_1..a_g, b_1..b_g`.
pub fn sp_classify(m: &IntMatrix) -> Result<SpClassification> {
    if m.rows() != m.cols() || m.rows() % 2 != 0 {
        return Err(Error::SizeMismatch(format!("expected an even square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let g = m.rows() / 2;
    let j = symplectic_form(g);
    let is_sp = m.transpose().mul(&j)?.mul(m)? == j;
    let lower_left = block(m, g, 0, g);
    let blocks = lower_left.is_zero().then(|| (block(m, 0, 0, g), block(m, 0, g, g), block(m, g, g, g)));
    let is_lagrangian = is_sp && blocks.is_some();
    let is_strongly_lagrangian = is_lagrangian && blocks.as_ref().is_some_and(|(p, _, _)| *p == IntMatrix::identity(g));
    Ok(SpClassification { is_sp, is_lagrangian, is_strongly_lagrangian, blocks })
}

fn surface_genus(h: &Endo) -> Result<usize> {
    if h.alphabet.kind != AlphabetKind::Surface {
        return Err(Error::AlphabetMismatch("expected a map of the surface group".into()));
    }
    Ok(h.alphabet.size)
}

/// `h(x)·x⁻¹ ∈ Γ_{k+1}` for every generator `x`.
pub fn jk_member(h: &Endo, k: usize) -> bool {
    let n = h.alphabet.rank();
    h.images.iter().enumerate().all(|(i, w)| lcs_class(n, &w.mul(&Word::generator_inverse(i)), k + 1).at_least(k + 1))
}

/// `h_*` fixes each `a_i` and `ι_# h(α_i) ∈ Γ_{k+1}`.
pub fn jkl_member(h: &Endo, k: usize) -> bool {
    let Ok(g) = surface_genus(h) else { return false };
    let ab = h.abelianization();
    let fixes_a = (0..g).all(|i| (0..2 * g).all(|r| *ab.get(r, i) == BigInt::from(u8::from(r == i))));
    fixes_a
        && (0..g).all(|i| {
            let w = iota_project(&h.alphabet, &h.images[i]).expect("surface alphabet");
            lcs_class(g, &w, k + 1).at_least(k + 1)
        })
}

/// A value of `τ_k`, and whether the map fixes the boundary word, in which
/// case the value must lie in `D_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau {
    pub value: DkElement,
    pub boundary_fixed: bool,
}

impl Tau {
    pub fn certified(&self) -> bool {
        self.boundary_fixed && self.value.bracket_vanishes()
    }
}

/// `τ_k(h) = Σ a_j ⊗ {h(β_j)β_j⁻¹} − Σ b_j ⊗ {h(α_j)α_j⁻¹}`.
pub fn tau_k(h: &Endo, k: usize) -> Result<Tau> {
    let g = surface_genus(h)?;
    if !jk_member(h, k) {
        return Err(Error::NotInJk(k));
    }
    let n = 2 * g;
    let mut value = DkElement::zero(n, k);
    let one = BigRational::one();
    for j in 0..g {
        let beta = h.images[g + j].mul(&Word::generator_inverse(g + j));
        value.add_term(j, &leading_lie_class(n, &beta, k + 1)?, &one);
        let alpha = h.images[j].mul(&Word::generator_inverse(j));
        value.add_term(g + j, &leading_lie_class(n, &alpha, k + 1)?, &-one.clone());
    }
    Ok(Tau { value, boundary_fixed: check_boundary_fixed(h)? })
}

/// `τ^L_k(h) = −Σ t̄_j ⊗ {ι_# h(α_j)}`, valued in `H' ⊗ 𝔏_{k+1}(H')`.
pub fn tau_k_levine(h: &Endo, k: usize) -> Result<Tau> {
    let g = surface_genus(h)?;
    if !jkl_member(h, k) {
        return Err(Error::NotInJkL(k));
    }
    let mut value = DkElement::zero(g, k);
    let minus = -BigRational::one();
    for j in 0..g {
        let w = iota_project(&h.alphabet, &h.images[j])?;
        value.add_term(j, &leading_lie_class(g, &w, k + 1)?, &minus);
    }
    Ok(Tau { value, boundary_fixed: check_boundary_fixed(h)? })
}

/// `ι_*: a_i ↦ 0, b_i ↦ t̄_i` on every tensor factor.
pub fn iota_star_dk(x: &DkElement) -> Result<DkElement> {
    if x.n % 2 != 0 {
        return Err(Error::SizeMismatch(format!("rank {} is not twice a genus", x.n)));
    }
    let g = x.n / 2;
    let subst: Vec<Vec<(usize, BigInt)>> =
        (0..2 * g).map(|i| if i < g { Vec::new() } else { vec![(i - g, BigInt::one())] }).collect();
    Ok(x.substitute(g, &subst))
}

/// Identifies `a_i ↦ −ū_{2i−1}` and `b_i ↦ ū_{2i}`.
pub fn mj_identify(x: &DkElement) -> Result<DkElement> {
    if x.n % 2 != 0 {
        return Err(Error::SizeMismatch(format!("rank {} is not twice a genus", x.n)));
    }
    let g = x.n / 2;
    let subst: Vec<Vec<(usize, BigInt)>> =
        (0..2 * g).map(|i| if i < g { vec![(2 * i, -BigInt::one())] } else { vec![(2 * (i - g) + 1, BigInt::one())] }).collect();
    Ok(x.substitute(2 * g, &subst))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Milnor {
    /// `Σ u_i ⊗ [λ_i]` in `H̃ ⊗ 𝔏_k(H̃)`, stored at tensor degree `k − 1`.
    pub value: DkElement,
    pub bracket_vanishes: bool,
}

/// `μ_k = Σ u_i ⊗ {λ_i}` for longitudes in `Γ_k F_l`.
pub fn milnor_mu(l: usize, k: usize, longitudes: &[Word]) -> Result<Milnor> {
    if longitudes.len() != l {
        return Err(Error::SizeMismatch(format!("{} longitudes for {l} strands", longitudes.len())));
    }
    if k < 2 {
        return Err(Error::DegreeMismatch("the Milnor map starts in degree 2".into()));
    }
    let mut value = DkElement::zero(l, k - 1);
    let one = BigRational::one();
    for (i, w) in longitudes.iter().enumerate() {
        if w.max_generator() > l {
            return Err(Error::UnknownGenerator(format!("u{}", w.max_generator())));
        }
        if !lcs_class(l, w, k).at_least(k) {
            return Err(Error::LongitudeDegreeTooLow { strand: i + 1, degree: k });
        }
        value.add_term(i, &leading_lie_class(l, w, k)?, &one);
    }
    let bracket_vanishes = value.bracket_vanishes();
    Ok(Milnor { value, bracket_vanishes })
}

pub fn parse_longitudes(l: usize, words: &[String]) -> Result<Vec<Word>> {
    let alphabet = Alphabet::disk(l);
    words.iter().map(|w| Word::parse(&alphabet, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{normalize_bracket, LieTree};

    fn s(g: usize) -> Alphabet {
        Alphabet::surface(g)
    }

    fn endo(g: usize, pairs: &[(&str, &str)]) -> Endo {
        let pairs: Vec<(String, String)> = pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Endo::parse(s(g), &pairs).unwrap()
    }

    fn term(n: usize, k: usize, h: usize, t: LieTree, c: i64) -> DkElement {
        let mut x = DkElement::zero(n, k);
        x.add_term(h, &normalize_bracket(&t, n), &BigRational::from_integer(c.into()));
        x
    }

    fn br(a: usize, b: usize) -> LieTree {
        LieTree::node(LieTree::leaf(a), LieTree::leaf(b))
    }

    #[test]
    fn sp_examples() {
        let c = sp_classify(&IntMatrix::identity(4)).unwrap();
        assert!(c.is_sp && c.is_lagrangian && c.is_strongly_lagrangian);
        let c = sp_classify(&symplectic_form(2)).unwrap();
        assert!(c.is_sp && !c.is_lagrangian);
        let m = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(sp_classify(&m).unwrap().is_strongly_lagrangian);
        assert!(matches!(sp_classify(&IntMatrix::zeros(3, 3)), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn filtration_examples() {
        let h = endo(1, &[("b1", "a1 b1 a1^-1 b1^-1 b1")]);
        assert!(jk_member(&h, 1));
        assert!(!jk_member(&h, 2));
        let m = endo(1, &[("b1", "b1 a1")]);
        assert!((1..=4).all(|k| jkl_member(&m, k)));
        let x = endo(2, &[("a1", "a1 b1 b2 b1^-1 b2^-1")]);
        assert!(jkl_member(&x, 1));
        assert!(!jkl_member(&x, 2));
    }

    #[test]
    fn tau_examples() {
        let h = endo(1, &[("b1", "a1 b1 a1^-1 b1^-1 b1")]);
        assert_eq!(tau_k(&h, 1).unwrap().value, term(2, 1, 0, br(0, 1), 1));
        let h = endo(1, &[("a1", "a1 b1 a1^-1 b1^-1 a1")]);
        assert_eq!(tau_k(&h, 1).unwrap().value, term(2, 1, 1, br(0, 1), -1));
        assert!(tau_k(&Endo::identity(s(2)), 2).unwrap().value.is_zero());
        let x = endo(2, &[("a1", "a1 b1 b2 b1^-1 b2^-1")]);
        let t = tau_k_levine(&x, 1).unwrap();
        assert_eq!(t.value, term(2, 1, 0, br(0, 1), -1));
        assert!(!t.boundary_fixed);
        assert!(tau_k_levine(&endo(1, &[("b1", "b1 a1")]), 3).unwrap().value.is_zero());
        assert!(matches!(tau_k_levine(&x, 2), Err(Error::NotInJkL(2))));
    }

    #[test]
    fn iota_and_identification() {
        assert!(iota_star_dk(&term(2, 1, 0, br(0, 1), 1)).unwrap().is_zero());
        assert!(iota_star_dk(&term(2, 1, 1, br(0, 1), 1)).unwrap().is_zero());
        assert_eq!(mj_identify(&term(2, 1, 0, br(0, 1), 1)).unwrap(), term(2, 1, 0, br(0, 1), 1));
        assert_eq!(mj_identify(&term(4, 1, 2, br(2, 3), 1)).unwrap(), term(4, 1, 1, br(1, 3), 1));
    }

    #[test]
    fn milnor_examples() {
        let longs = parse_longitudes(
            3,
            &["u2 u3 u2^-1 u3^-1".into(), "u3 u1 u3^-1 u1^-1".into(), "u1 u2 u1^-1 u2^-1".into()],
        )
        .unwrap();
        let m = milnor_mu(3, 2, &longs).unwrap();
        assert!(m.bracket_vanishes);
        let mut expect = term(3, 1, 0, br(1, 2), 1);
        expect = expect.add(&term(3, 1, 1, br(2, 0), 1)).add(&term(3, 1, 2, br(0, 1), 1));
        assert_eq!(m.value, expect);
        let bad = parse_longitudes(2, &["u2".into(), "".into()]).unwrap();
        assert_eq!(milnor_mu(2, 2, &bad), Err(Error::LongitudeDegreeTooLow { strand: 1, degree: 2 }));
    }
}
