//! Words in free groups, truncated Magnus expansions, lower central series
//! membership, endomorphisms given by generator images, and the handlebody
//! projection.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freelie::{lie_from_tensor, LieElement};

/// Which free group a word lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphabetKind {
    /// `a1..ag, b1..bg` (the meridians and parallels of a surface)
    Surface,
    /// `u1..ul`
    Disk,
    /// `t1..tg`
    Handlebody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    pub kind: AlphabetKind,
    /// Genus for surface and handlebody alphabets, strand count for disks.
    pub size: usize,
}

impl Alphabet {
    pub fn surface(g: usize) -> Self {
        Alphabet { kind: AlphabetKind::Surface, size: g }
    }

    pub fn disk(l: usize) -> Self {
        Alphabet { kind: AlphabetKind::Disk, size: l }
    }

    pub fn handlebody(g: usize) -> Self {
        Alphabet { kind: AlphabetKind::Handlebody, size: g }
    }

    /// Number of free generators.
    pub fn rank(&self) -> usize {
        match self.kind {
            AlphabetKind::Surface => 2 * self.size,
            _ => self.size,
        }
    }

    pub fn name(&self, i: usize) -> String {
        match self.kind {
            AlphabetKind::Surface if i < self.size => format!("a{}", i + 1),
            AlphabetKind::Surface => format!("b{}", i - self.size + 1),
            AlphabetKind::Disk => format!("u{}", i + 1),
            AlphabetKind::Handlebody => format!("t{}", i + 1),
        }
    }

    /// Name of the commuting variable for generator `i` in Magnus series.
    pub fn series_name(&self, i: usize) -> String {
        match self.kind {
            AlphabetKind::Surface if i < self.size => format!("X{}", i + 1),
            AlphabetKind::Surface => format!("Y{}", i - self.size + 1),
            AlphabetKind::Disk => format!("U{}", i + 1),
            AlphabetKind::Handlebody => format!("T{}", i + 1),
        }
    }

    pub fn letter(&self, token: &str) -> Result<usize> {
        let unknown = || Error::UnknownGenerator(token.to_string());
        let (head, num) = token.split_at(1.min(token.len()));
        let j: usize = num.parse().map_err(|_| unknown())?;
        if j == 0 || j > self.size {
            return Err(unknown());
        }
        match (self.kind, head) {
            (AlphabetKind::Surface, "a") => Ok(j - 1),
            (AlphabetKind::Surface, "b") => Ok(self.size + j - 1),
            (AlphabetKind::Disk, "u") | (AlphabetKind::Handlebody, "t") => Ok(j - 1),
            _ => Err(unknown()),
        }
    }

    /// Guesses the smallest alphabet containing every token of `text`.
    pub fn infer(text: &str) -> Result<Alphabet> {
        let mut kind = None;
        let mut size = 0;
        for tok in text.split_whitespace() {
            let base = tok.strip_suffix("^-1").unwrap_or(tok);
            let (head, num) = base.split_at(1.min(base.len()));
            let k = match head {
                "a" | "b" => AlphabetKind::Surface,
                "u" => AlphabetKind::Disk,
                "t" => AlphabetKind::Handlebody,
                _ => return Err(Error::UnknownGenerator(tok.to_string())),
            };
            if kind.is_some_and(|k0| k0 != k) {
                return Err(Error::AlphabetMismatch(format!("mixed generator families at `{tok}`")));
            }
            kind = Some(k);
            size = size.max(num.parse::<usize>().map_err(|_| Error::UnknownGenerator(tok.to_string()))?);
        }
        Ok(Alphabet { kind: kind.unwrap_or(AlphabetKind::Surface), size: size.max(1) })
    }
}

/// A freely reduced word. Letter `±(i+1)` is generator `i` or its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![i as i32 + 1])
    }

    pub fn generator_inverse(i: usize) -> Self {
        Word(vec![-(i as i32 + 1)])
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for x in letters {
            assert_ne!(x, 0, "letter 0 is not a generator");
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| -x).collect())
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    pub fn conjugate(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inverse())
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (base, inv) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let i = alphabet.letter(base)? as i32 + 1;
            letters.push(if inv { -i } else { i });
        }
        Ok(Word::from_letters(letters))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay { word: self, alphabet }
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.alphabet.name(x.unsigned_abs() as usize - 1))?;
            if *x < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Noncommutative polynomial in `n` variables truncated above degree `cap`,
/// stored densely degree by degree (monomials in base-`n` order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    n: usize,
    cap: usize,
    offsets: Vec<usize>,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn one(n: usize, cap: usize) -> Self {
        let mut offsets = Vec::with_capacity(cap + 2);
        let mut acc = 0;
        let mut block = 1usize;
        for _ in 0..=cap {
            offsets.push(acc);
            acc += block;
            block *= n;
        }
        offsets.push(acc);
        let mut coeffs = vec![BigInt::zero(); acc];
        coeffs[0] = BigInt::one();
        TruncatedSeries { n, cap, offsets, coeffs }
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coefficients of degree `d`, indexed by monomials in base-`n` order.
    pub fn degree_part(&self, d: usize) -> &[BigInt] {
        &self.coeffs[self.offsets[d]..self.offsets[d + 1]]
    }

    pub fn coefficient(&self, monomial: &[usize]) -> BigInt {
        if monomial.len() > self.cap {
            return BigInt::zero();
        }
        let idx = monomial.iter().fold(0, |a, &i| a * self.n + i);
        self.coeffs[self.offsets[monomial.len()] + idx].clone()
    }

    /// Right multiplication by `1 + X_i`.
    fn push_letter(&mut self, i: usize) {
        for d in (1..=self.cap).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(self.offsets[d]);
            let src = &lo[self.offsets[d - 1]..];
            for (m, c) in src.iter().enumerate() {
                if !c.is_zero() {
                    hi[m * self.n + i] += c;
                }
            }
        }
    }

    /// Right multiplication by `(1 + X_i)⁻¹ = 1 − X_i + X_i² − …`.
    fn push_inverse_letter(&mut self, i: usize) {
        for d in 1..=self.cap {
            let (lo, hi) = self.coeffs.split_at_mut(self.offsets[d]);
            let src = &lo[self.offsets[d - 1]..];
            for (m, c) in src.iter().enumerate() {
                if !c.is_zero() {
                    hi[m * self.n + i] -= c;
                }
            }
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        assert_eq!((self.n, self.cap), (other.n, other.cap), "series shapes");
        let mut out = TruncatedSeries::one(self.n, self.cap);
        out.coeffs[0] = BigInt::zero();
        for d1 in 0..=self.cap {
            for d2 in 0..=self.cap - d1 {
                let stride = self.n.pow(d2 as u32);
                let base = self.offsets[d1 + d2];
                for (m1, c1) in self.degree_part(d1).iter().enumerate() {
                    if c1.is_zero() {
                        continue;
                    }
                    for (m2, c2) in other.degree_part(d2).iter().enumerate() {
                        if !c2.is_zero() {
                            out.coeffs[base + m1 * stride + m2] += c1 * c2;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Lowest positive degree with a nonzero coefficient.
    pub fn first_nonconstant_degree(&self) -> Option<usize> {
        (1..=self.cap).find(|&d| self.degree_part(d).iter().any(|c| !c.is_zero()))
    }

    /// Nonzero terms as `(monomial, coefficient)` in degree then base-`n` order.
    pub fn terms(&self) -> Vec<(Vec<usize>, BigInt)> {
        let mut out = Vec::new();
        for d in 0..=self.cap {
            for (m, c) in self.degree_part(d).iter().enumerate() {
                if !c.is_zero() {
                    let mut mono = vec![0; d];
                    let mut x = m;
                    for slot in mono.iter_mut().rev() {
                        *slot = x % self.n;
                        x /= self.n;
                    }
                    out.push((mono, c.clone()));
                }
            }
        }
        out
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .into_iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m.iter().map(|&i| alphabet.series_name(i)).collect();
                serde_json::json!({"monomial": mono.join(" "), "coeff": c.to_string()})
            })
            .collect();
        serde_json::json!({"capN": self.cap, "terms": terms})
    }
}

/// Magnus expansion `x ↦ 1 + X`, truncated above degree `cap`.
pub fn magnus(n: usize, w: &Word, cap: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(n, cap);
    for &x in w.letters() {
        let i = x.unsigned_abs() as usize - 1;
        assert!(i < n, "generator {} outside a rank-{n} alphabet", i + 1);
        if x > 0 {
            s.push_letter(i);
        } else {
            s.push_inverse_letter(i);
        }
    }
    s
}

/// Position of a word in the lower central series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcsClass {
    /// In `Γ_k` but not in `Γ_{k+1}`.
    Exact(usize),
    /// No nonzero Magnus term up to the cap.
    AtLeast(usize),
}

impl LcsClass {
    pub fn at_least(&self, k: usize) -> bool {
        match *self {
            LcsClass::Exact(j) => j >= k,
            LcsClass::AtLeast(c) => c >= k,
        }
    }
}

impl fmt::Display for LcsClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsClass::Exact(k) => write!(f, "{k}"),
            LcsClass::AtLeast(c) => write!(f, ">={c}"),
        }
    }
}

pub fn lcs_class(n: usize, w: &Word, cap: usize) -> LcsClass {
    match magnus(n, w, cap).first_nonconstant_degree() {
        Some(d) => LcsClass::Exact(d),
        None => LcsClass::AtLeast(cap),
    }
}

/// Class of `w ∈ Γ_k` in `Γ_k / Γ_{k+1} ≅ 𝔏_k`, in the Lyndon basis.
pub fn leading_lie_class(n: usize, w: &Word, k: usize) -> Result<LieElement> {
    let s = magnus(n, w, k);
    if let Some(d) = s.first_nonconstant_degree() {
        if d < k {
            return Err(Error::NotInGammaK(k));
        }
    }
    lie_from_tensor(n, k, s.degree_part(k))
}

/// Endomorphism of a free group given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endo {
    pub alphabet: Alphabet,
    pub images: Vec<Word>,
}

impl Endo {
    pub fn identity(alphabet: Alphabet) -> Self {
        Endo { alphabet, images: (0..alphabet.rank()).map(Word::generator).collect() }
    }

    /// Identity except for the listed `(generator, image)` pairs.
    pub fn with_images(alphabet: Alphabet, changes: &[(usize, Word)]) -> Self {
        let mut h = Self::identity(alphabet);
        for (i, w) in changes {
            h.images[*i] = w.clone();
        }
        h
    }

    /// Parses `("b1", "b1 a1")` style pairs; unspecified generators are fixed.
    pub fn parse(alphabet: Alphabet, pairs: &[(String, String)]) -> Result<Self> {
        let mut h = Self::identity(alphabet);
        for (g, w) in pairs {
            let i = alphabet.letter(g)?;
            h.images[i] = Word::parse(&alphabet, w)?;
        }
        Ok(h)
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &x in w.letters() {
            let img = &self.images[x.unsigned_abs() as usize - 1];
            if x > 0 {
                out.extend_from_slice(img.letters());
            } else {
                out.extend(img.letters().iter().rev().map(|y| -y));
            }
        }
        Word::from_letters(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("composing endomorphisms of different groups".into()));
        }
        Ok(Endo { alphabet: self.alphabet, images: other.images.iter().map(|w| self.apply(w)).collect() })
    }

    /// Integer matrix on `H_1`; column `j` is the class of the image of generator `j`.
    pub fn abelianization(&self) -> crate::exactla::IntMatrix {
        let n = self.alphabet.rank();
        let mut m = crate::exactla::IntMatrix::zeros(n, n);
        for (j, w) in self.images.iter().enumerate() {
            let mut col = vec![0i64; n];
            for &x in w.letters() {
                col[x.unsigned_abs() as usize - 1] += x.signum() as i64;
            }
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, BigInt::from(c));
            }
        }
        m
    }

    /// `{"genus": g, "images": {"b1": "b1 a1"}}`; unlisted generators are fixed.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let g = v["genus"].as_u64().ok_or_else(|| Error::Parse("map: missing genus".into()))? as usize;
        let mut pairs = Vec::new();
        if let Some(images) = v.get("images") {
            let images = images.as_object().ok_or_else(|| Error::Parse("map: images must be an object".into()))?;
            for (k, w) in images {
                let w = w.as_str().ok_or_else(|| Error::Parse(format!("map: image of {k} must be a string")))?;
                pairs.push((k.clone(), w.to_string()));
            }
        }
        Endo::parse(Alphabet::surface(g), &pairs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let images: serde_json::Map<String, serde_json::Value> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, w)| (self.alphabet.name(i), serde_json::Value::String(w.display(&self.alphabet).to_string())))
            .collect();
        serde_json::json!({"genus": self.alphabet.size, "images": images})
    }

    pub fn max_image_length(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }
}

pub fn apply_endo(h: &Endo, alphabet: &Alphabet, w: &Word) -> Result<Word> {
    if h.alphabet != *alphabet {
        return Err(Error::AlphabetMismatch("word and endomorphism alphabets differ".into()));
    }
    Ok(h.apply(w))
}

/// `ζ = ∏_j [β_j⁻¹, α_j]`, the inverse of the boundary loop.
pub fn boundary_word(g: usize) -> Word {
    let mut w = Word::identity();
    for j in 0..g {
        let a = Word::generator(j);
        let b = Word::generator(g + j);
        w = w.mul(&Word::commutator(&b.inverse(), &a));
    }
    w
}

pub fn check_boundary_fixed(h: &Endo) -> Result<bool> {
    if h.alphabet.kind != AlphabetKind::Surface {
        return Err(Error::AlphabetMismatch("boundary word needs a surface alphabet".into()));
    }
    let z = boundary_word(h.alphabet.size);
    Ok(h.apply(&z) == z)
}

/// Projection to the handlebody group: `α_i ↦ 1`, `β_i ↦ t_i`.
pub fn iota_project(alphabet: &Alphabet, w: &Word) -> Result<Word> {
    if alphabet.kind != AlphabetKind::Surface {
        return Err(Error::AlphabetMismatch("projection needs a surface alphabet".into()));
    }
    let g = alphabet.size as i32;
    Ok(Word::from_letters(w.letters().iter().filter(|x| x.abs() > g).map(|&x| x.signum() * (x.abs() - g))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2() -> Alphabet {
        Alphabet::surface(2)
    }

    fn w(text: &str) -> Word {
        Word::parse(&s2(), text).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("a1 a1^-1 b2"), w("b2"));
        assert!(w("").is_empty());
        assert_eq!(w("a1 b1 b1^-1 a1").display(&s2()).to_string(), "a1 a1");
        assert!(matches!(Word::parse(&s2(), "c1"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(Word::parse(&s2(), "a3"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn magnus_examples() {
        let a = Alphabet::surface(1);
        let m = magnus(2, &Word::parse(&a, "a1").unwrap(), 2);
        assert_eq!(m.terms(), vec![(vec![], BigInt::one()), (vec![0], BigInt::one())]);
        let m = magnus(2, &Word::parse(&a, "a1^-1").unwrap(), 2);
        assert_eq!(m.coefficient(&[0]), BigInt::from(-1));
        assert_eq!(m.coefficient(&[0, 0]), BigInt::one());
        let c = Word::parse(&a, "a1 b1 a1^-1 b1^-1").unwrap();
        let m = magnus(2, &c, 2);
        assert_eq!(m.coefficient(&[0, 1]), BigInt::one());
        assert_eq!(m.coefficient(&[1, 0]), BigInt::from(-1));
        assert_eq!(m.coefficient(&[0]), BigInt::zero());
        let j = m.to_json(&a);
        assert_eq!(j["terms"][1]["monomial"], "X1 Y1");
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_class(4, &Word::identity(), 5), LcsClass::AtLeast(5));
        assert_eq!(lcs_class(4, &w("a1"), 5), LcsClass::Exact(1));
        let c = Word::commutator(&w("a1"), &Word::commutator(&w("a1"), &w("b1")));
        assert_eq!(lcs_class(4, &c, 4), LcsClass::Exact(3));
    }

    #[test]
    fn endo_examples() {
        let h = Endo::with_images(s2(), &[(2, w("b1 a1"))]);
        assert_eq!(h.apply(&w("b1^-1")), w("a1^-1 b1^-1"));
        assert_eq!(h.compose(&h).unwrap().apply(&w("b1")), w("b1 a1 a1"));
        assert_eq!(Endo::identity(s2()).apply(&w("a2 b1^-1")), w("a2 b1^-1"));
    }

    #[test]
    fn boundary_examples() {
        assert!(check_boundary_fixed(&Endo::identity(s2())).unwrap());
        let z = boundary_word(2);
        let conj = Endo { alphabet: s2(), images: (0..4).map(|i| Word::generator(i).conjugate(&z)).collect() };
        assert!(check_boundary_fixed(&conj).unwrap());
        let twist = Endo::with_images(s2(), &[(2, w("b1 a1"))]);
        assert!(!check_boundary_fixed(&twist).unwrap());
    }

    #[test]
    fn iota_examples() {
        let h = Alphabet::handlebody(2);
        assert_eq!(iota_project(&s2(), &w("a1 b1 a1^-1")).unwrap(), Word::parse(&h, "t1").unwrap());
        assert!(iota_project(&s2(), &Word::commutator(&w("a1"), &w("b1"))).unwrap().is_empty());
        assert_eq!(
            iota_project(&s2(), &Word::commutator(&w("b1"), &w("b2"))).unwrap(),
            Word::parse(&h, "t1 t2 t1^-1 t2^-1").unwrap()
        );
    }

    #[test]
    fn alphabet_inference() {
        assert_eq!(Alphabet::infer("a1 b3^-1").unwrap(), Alphabet::surface(3));
        assert_eq!(Alphabet::infer("u2").unwrap(), Alphabet::disk(2));
        assert!(Alphabet::infer("a1 u1").is_err());
    }
}
