//! The category of top-substantial Jacobi diagrams: morphisms are a strut
//! exponential recorded by its matrix together with a finite series of
//! diagrams below an i-degree cap, composed by gluing.

mod linking;
pub mod samples;
mod series;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::diagrams::{eta_inverse, normal_form, Color, Diagram, DiagramVector};
use crate::error::{Error, Result};
use crate::freegroup::Endo;
use crate::freelie::parse_rational;
use crate::johnson::tau_k_levine;

pub use linking::{classify_cobordism, CobordismClass, LinkingMatrix, Verdict};
pub use series::{color, color_names, exp_struts, minus, pairing, parse_color, plus, side_of, star, Series, Side};

type Matrix = Vec<Vec<BigRational>>;

fn zeros(n: usize) -> Matrix {
    vec![vec![BigRational::zero(); n]; n]
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// A morphism `g → f`: the value `[L/2] ⊔ y`, where `L` is a symmetric
/// matrix indexed by `1⁺,…,g⁺,1⁻,…,f⁻` and
/// `[M] = exp_⊔(Σ_{(r,c)} M_rc · strut(r,c))` over ordered index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsMorphism {
    pub source: usize,
    pub target: usize,
    pub cap: usize,
    pub lk: Matrix,
    pub y: Series,
}

impl TsMorphism {
    /// Validates shape, symmetry and top-substantiality, and truncates `y`.
    pub fn new(source: usize, target: usize, cap: usize, lk: Matrix, y: Series) -> Result<Self> {
        let n = source + target;
        if lk.len() != n || lk.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch(format!("strut record must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..i {
                if lk[i][j] != lk[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        if (0..source).any(|i| (0..source).any(|j| !lk[i][j].is_zero())) {
            return Err(Error::ObjectMismatch("strut record has a (+,+) entry".into()));
        }
        for (d, _) in y.terms() {
            for (_, c) in d.legs() {
                let ok = match side_of(c) {
                    (Side::Plus, i) => i < source,
                    (Side::Minus, i) => i < target,
                    (Side::Star, _) => false,
                };
                if !ok {
                    return Err(Error::ObjectMismatch(format!("leg color outside ⌊{source}⌉⁺ ⊔ ⌊{target}⌉⁻")));
                }
            }
            if has_plus_strut(d) {
                return Err(Error::ObjectMismatch("series has a strut with both ends colored +".into()));
            }
        }
        Ok(TsMorphism { source, target, cap, lk, y: y.truncate(cap) })
    }

    pub fn identity(g: usize, cap: usize) -> Self {
        TsMorphism::from_linking(&LinkingMatrix::identity_cylinder(g), cap).expect("top-substantial")
    }

    /// `[Lk/2] ⊔ ∅`, the strut part of a cobordism with this linking matrix.
    pub fn from_linking(l: &LinkingMatrix, cap: usize) -> Result<Self> {
        let lk = l.entries.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        TsMorphism::new(l.g, l.g, cap, lk, Series::unit())
    }

    fn strut_color(&self, i: usize) -> Color {
        if i < self.source {
            plus(i)
        } else {
            minus(i - self.source)
        }
    }

    /// `Σ_{(r,c)} (L_rc/2) strut(r,c)`, combined over unordered pairs.
    pub fn strut_generator(&self) -> Vec<(Color, Color, BigRational)> {
        let n = self.lk.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let c = if i == j { &self.lk[i][i] * half() } else { self.lk[i][j].clone() };
                if !c.is_zero() {
                    out.push((self.strut_color(i), self.strut_color(j), c));
                }
            }
        }
        out
    }

    /// The full value with the strut exponential expanded to `max_struts`.
    pub fn expand(&self, max_struts: usize) -> Series {
        exp_struts(&self.strut_generator(), max_struts).disjoint(&self.y, self.cap)
    }

    pub fn is_top_substantial(&self) -> bool {
        (0..self.source).all(|i| (0..self.source).all(|j| self.lk[i][j].is_zero()))
            && self.y.terms().iter().all(|(d, _)| !has_plus_strut(d))
    }

    pub fn names(&self) -> Vec<String> {
        color_names(self.source.max(self.target).max(1))
    }

    pub fn to_json(&self) -> Value {
        let n = self.lk.len();
        let names = self.names();
        let label = |i: usize| names[self.strut_color(i) as usize].clone();
        let mut lk = serde_json::Map::new();
        for i in 0..n {
            let row: serde_json::Map<String, Value> =
                (0..n).filter(|&j| !self.lk[i][j].is_zero()).map(|j| (label(j), json!(self.lk[i][j].to_string()))).collect();
            if !row.is_empty() {
                lk.insert(label(i), Value::Object(row));
            }
        }
        json!({
            "source": self.source,
            "target": self.target,
            "cap": self.cap,
            "linking": lk,
            "terms": self.y.to_json(&names)["terms"],
        })
    }

    /// Reads `{source, target, cap, linking: {"1+": {"1-": "1"}}, terms}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let num = |k: &str| {
            v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| Error::Parse(format!("morphism: missing `{k}`")))
        };
        let (source, target, cap) = (num("source")?, num("target")?, num("cap")?);
        let n = source + target;
        let mut lk = zeros(n);
        let pos = |label: &str| -> Result<usize> {
            match side_of(parse_color(label)?) {
                (Side::Plus, i) if i < source => Ok(i),
                (Side::Minus, i) if i < target => Ok(source + i),
                _ => Err(Error::ObjectMismatch(format!("strut color `{label}` outside the objects"))),
            }
        };
        if let Some(rows) = v.get("linking").and_then(Value::as_object) {
            let mut seen = vec![vec![false; n]; n];
            for (r, row) in rows {
                let i = pos(r)?;
                for (c, x) in row.as_object().ok_or_else(|| Error::Parse("morphism: linking rows must be objects".into()))? {
                    let j = pos(c)?;
                    let x = match x {
                        Value::String(s) => parse_rational(s)?,
                        Value::Number(m) => parse_rational(&m.to_string())?,
                        _ => return Err(Error::Parse("morphism: bad linking entry".into())),
                    };
                    for (a, b) in [(i, j), (j, i)] {
                        if seen[a][b] && lk[a][b] != x {
                            return Err(Error::NotSymmetric);
                        }
                        seen[a][b] = true;
                        lk[a][b] = x.clone();
                    }
                }
            }
        }
        let names = color_names(source.max(target).max(1));
        let y = match v.get("terms") {
            Some(t) => Series::from_json(&json!({ "terms": t }), &names)?,
            None => Series::unit(),
        };
        TsMorphism::new(source, target, cap, lk, y)
    }
}

fn has_plus_strut(d: &Diagram) -> bool {
    d.components().iter().any(|c| {
        c.len() == 2 && c.iter().all(|&v| matches!(d.verts[v], crate::diagrams::Vertex::Leg(x) if side_of(x).0 == Side::Plus))
    })
}

/// `[M]` for a symmetric matrix `M` indexed by `1⁺,…,g⁺,1⁻,…,f⁻`.
pub fn strut_exp(source: usize, target: usize, m: &[Vec<BigRational>], cap: usize) -> Result<TsMorphism> {
    let lk = m.iter().map(|r| r.iter().map(|x| x * BigRational::from_integer(2.into())).collect()).collect();
    TsMorphism::new(source, target, cap, lk, Series::unit())
}

/// `D ∘ E` for `D: g → f` and `E: h → g`: all gluings of the `⌊g⌉⁺` legs of
/// `D` with the `⌊g⌉⁻` legs of `E`, terms above `cap` dropped.
///
/// Writing `D = exp(x·p + ½yᵀD₋₋y) ⊔ D^Y(x,y)` with `x = ⌊g⌉⁺`, the gluing
/// against `exp(x·p)` substitutes `w ↦ w + p` in `E`. The part of the
/// resulting exponent without `w` is the new strut record; the rest is
/// expanded only as far as the `x`-legs of `D^Y` can absorb.
pub fn compose(d: &TsMorphism, e: &TsMorphism, cap: usize) -> Result<TsMorphism> {
    if d.source != e.target {
        return Err(Error::ObjectMismatch(format!("cannot compose a morphism from {} with one into {}", d.source, e.target)));
    }
    let (g, f, h) = (d.source, d.target, e.source);
    let dpm = |i: usize, j: usize| &d.lk[i][g + j];
    let dmm = |a: usize, b: usize| &d.lk[g + a][g + b];
    let epm = |k: usize, i: usize| &e.lk[k][h + i];
    let emm = |i: usize, j: usize| &e.lk[h + i][h + j];

    // emm·dpm, a g×f matrix
    let ed: Matrix = (0..g).map(|i| (0..f).map(|j| (0..g).map(|l| emm(i, l) * dpm(l, j)).sum()).collect()).collect();
    let mut lk = zeros(h + f);
    for a in 0..h {
        for b in 0..h {
            lk[a][b] = e.lk[a][b].clone();
        }
        for j in 0..f {
            let x: BigRational = (0..g).map(|i| epm(a, i) * dpm(i, j)).sum();
            lk[a][h + j] = x.clone();
            lk[h + j][a] = x;
        }
    }
    for a in 0..f {
        for b in 0..f {
            lk[h + a][h + b] = dmm(a, b) + (0..g).map(|i| dpm(i, a) * &ed[i][b]).sum::<BigRational>();
        }
    }

    let one = BigRational::one();
    let left = d.y.relabel(|c| match side_of(c) {
        (Side::Plus, i) => vec![(star(i), one.clone())],
        _ => vec![(c, one.clone())],
    });
    let mut struts = Vec::new();
    for i in 0..g {
        for j in 0..f {
            struts.push((star(i), minus(j), ed[i][j].clone()));
        }
        for k in 0..h {
            struts.push((star(i), plus(k), epm(k, i).clone()));
        }
        struts.push((star(i), star(i), emm(i, i) * half()));
        for l in i + 1..g {
            struts.push((star(i), star(l), emm(i, l).clone()));
        }
    }
    struts.retain(|s| !s.2.is_zero());
    let right_y = e.y.relabel(|c| match side_of(c) {
        (Side::Minus, i) => {
            let mut v = vec![(star(i), one.clone())];
            v.extend((0..f).map(|j| (minus(j), dpm(i, j).clone())).filter(|x| !x.1.is_zero()));
            v
        }
        _ => vec![(c, one.clone())],
    });
    let stars: Vec<Color> = (0..g).map(star).collect();
    let right = bounded_exp(&struts, &left, &stars).disjoint(&right_y, cap);
    TsMorphism::new(h, f, cap, lk, pairing(&left, &right, &stars, cap))
}

/// `exp_⊔` of `struts`, keeping only terms whose glued-color leg counts do
/// not exceed those of some term of `partner`.
fn bounded_exp(struts: &[(Color, Color, BigRational)], partner: &Series, glued: &[Color]) -> Series {
    let count = |d: &Diagram| -> Vec<usize> { glued.iter().map(|&c| d.legs().filter(|&(_, x)| x == c).count()).collect() };
    let maxima: Vec<usize> =
        partner.terms().iter().map(|(d, _)| count(d)).fold(vec![0; glued.len()], |m, c| m.iter().zip(&c).map(|(a, b)| *a.max(b)).collect());
    let total: usize = maxima.iter().sum();
    exp_struts(struts, total).filter(|d| count(d).iter().zip(&maxima).all(|(a, b)| a <= b))
}

/// Keeps the terms without loops and without `⌊·⌉⁻`-colored legs.
pub fn upper_tree_reduction(d: &TsMorphism) -> Series {
    upper_tree_part(&d.y)
}

pub fn upper_tree_part(y: &Series) -> Series {
    y.filter(|t| !t.has_loop() && t.legs().all(|(_, c)| side_of(c).0 == Side::Plus))
}

/// The `Δ` block of a record `(0 Id; Id Δ)`.
pub fn ilc_delta(d: &TsMorphism) -> Result<Matrix> {
    let g = d.source;
    if d.target != g {
        return Err(Error::BadStrutRecord(format!("morphism {} → {} is not an endomorphism", d.source, d.target)));
    }
    for i in 0..g {
        for j in 0..g {
            let want = if i == j { BigRational::one() } else { BigRational::zero() };
            if !d.lk[i][j].is_zero() || d.lk[i][g + j] != want {
                return Err(Error::BadStrutRecord(format!("entry ({}, {}) of the + rows", i + 1, j + 1)));
            }
        }
    }
    Ok((0..g).map(|i| (0..g).map(|j| d.lk[g + i][g + j].clone()).collect()).collect())
}

/// `⟨D^Y|_{j⁺ ↦ j* + j⁺ + Δ·j⁻}, [Δ/2]|_{j⁻ ↦ j*} ⊔ E^Y|_{j⁻ ↦ j* + j⁻}⟩`
/// over `⌊g⌉*`, for ILC-shaped records; `Δ` is the block of `E`, whose
/// `⌊g⌉⁻` legs receive the gluing.
pub fn ilc_composite(d: &TsMorphism, e: &TsMorphism, cap: usize) -> Result<Series> {
    ilc_delta(d)?;
    let delta = ilc_delta(e)?;
    if d.source != e.source {
        return Err(Error::ObjectMismatch("genera differ".into()));
    }
    let g = d.source;
    let one = BigRational::one();
    let left = d.y.relabel(|c| match side_of(c) {
        (Side::Plus, j) => {
            let mut v = vec![(star(j), one.clone()), (plus(j), one.clone())];
            v.extend((0..g).map(|p| (minus(p), delta[p][j].clone())).filter(|x| !x.1.is_zero()));
            v
        }
        _ => vec![(c, one.clone())],
    });
    let mut struts = Vec::new();
    for p in 0..g {
        struts.push((star(p), star(p), &delta[p][p] * half()));
        for q in p + 1..g {
            struts.push((star(p), star(q), delta[p][q].clone()));
        }
    }
    struts.retain(|s| !s.2.is_zero());
    let right_y = e.y.relabel(|c| match side_of(c) {
        (Side::Minus, j) => vec![(star(j), one.clone()), (minus(j), one.clone())],
        _ => vec![(c, one.clone())],
    });
    let stars: Vec<Color> = (0..g).map(star).collect();
    let right = bounded_exp(&struts, &left, &stars).disjoint(&right_y, cap);
    Ok(pairing(&left, &right, &stars, cap))
}

/// Coordinates in `𝒯_k ⊗ Q` of the i-degree `k` part of an upper-tree
/// series, colors `j⁺ ↦ j`.
pub fn upper_tree_leading(y: &Series, g: usize, k: usize) -> Result<DiagramVector> {
    let part = upper_tree_part(y).degree_part(k);
    let raw: Vec<(Diagram, BigRational)> =
        part.terms().into_iter().map(|(d, c)| (d.map_colors(|x| side_of(x).1 as Color), c.clone())).collect();
    normal_form(g, k, &raw)
}

/// Outcome of the leading-term additivity check.
#[derive(Clone, Debug)]
pub struct Additivity {
    /// No upper-tree terms of positive i-degree below `k` in the composite.
    pub lower_vanish: bool,
    pub leading: DiagramVector,
    pub expected: DiagramVector,
}

impl Additivity {
    pub fn holds(&self) -> bool {
        self.lower_vanish && self.leading == self.expected
    }
}

/// Composes two ILC-shaped morphisms whose upper-tree parts are `∅` plus
/// terms of i-degree `≥ k` and compares the i-degree `k` part of the
/// composite's upper-tree reduction with the sum of the inputs' parts.
pub fn leading_additivity(d: &TsMorphism, e: &TsMorphism, k: usize) -> Result<Additivity> {
    let g = d.source;
    let cap = d.cap.min(e.cap);
    if cap < k {
        return Err(Error::DegreeMismatch(format!("cap {cap} is below the degree {k}")));
    }
    for m in [d, e] {
        let u = upper_tree_part(&m.y);
        if u.terms().iter().any(|(t, _)| t.ideg() > 0 && t.ideg() < k) {
            return Err(Error::DegreeMismatch(format!("upper-tree part has terms below i-degree {k}")));
        }
    }
    let comp = ilc_composite(d, e, cap)?;
    let unit = Diagram::empty();
    let upper = upper_tree_part(&comp);
    let lower_vanish = upper.terms().iter().all(|(t, _)| t.ideg() == 0 || t.ideg() >= k)
        && upper.coefficient(&unit) == d.y.coefficient(&unit) * e.y.coefficient(&unit);
    let a = upper_tree_leading(&d.y, g, k)?;
    let b = upper_tree_leading(&e.y, g, k)?;
    let expected = DiagramVector { n: g, k, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() };
    let leading = match upper_tree_leading(&comp, g, k) {
        Ok(v) => v,
        Err(Error::DegreeMismatch(_)) => return Ok(Additivity { lower_vanish: false, leading: expected.clone(), expected }),
        Err(err) => return Err(err),
    };
    Ok(Additivity { lower_vanish, leading, expected })
}

pub fn leading_additivity_check(d: &TsMorphism, e: &TsMorphism, k: usize) -> Result<bool> {
    Ok(leading_additivity(d, e, k)?.holds())
}

/// `η⁻¹(τ^L_k(h))` with `t̄_j` read as `j⁺`.
pub fn diagrammatic_tau_levine(h: &Endo, k: usize) -> Result<DiagramVector> {
    eta_inverse(&tau_k_levine(h, k)?.value)
}

/// Names `1+, 2+, …` for the colors of a tree vector.
pub fn plus_names(g: usize) -> Vec<String> {
    (1..=g).map(|i| format!("{i}+")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::freegroup::{Alphabet, Word};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn y_series(terms: &[(Diagram, i64)]) -> Series {
        Series::from_combination(&terms.iter().map(|(d, c)| (d.clone(), q(*c))).collect())
    }

    #[test]
    fn identity_is_strut_exp_of_half_linking() {
        for g in 1..=3 {
            let lk = LinkingMatrix::identity_cylinder(g);
            let half_lk: Matrix = lk.entries.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone()) * half()).collect()).collect();
            assert_eq!(strut_exp(g, g, &half_lk, 4).unwrap(), TsMorphism::identity(g, 4));
        }
        let id = TsMorphism::identity(2, 4).expand(2);
        let s = Diagram::strut(plus(0), minus(0));
        assert_eq!(id.coefficient(&s), q(1));
        assert_eq!(id.coefficient(&s.disjoint_union(&s)), half());
    }

    #[test]
    fn strut_exp_first_order_coefficient() {
        let mut m = zeros(2);
        m[0][1] = half();
        m[1][0] = half();
        m[1][1] = half();
        let s = strut_exp(1, 1, &m, 2).unwrap().expand(1);
        assert_eq!(s.coefficient(&Diagram::strut(minus(0), minus(0))), half());
        assert_eq!(strut_exp(1, 1, &zeros(2), 2).unwrap().expand(3), Series::unit());
    }

    #[test]
    fn identity_laws_on_a_y() {
        let y = Diagram::y(plus(0), plus(1), minus(0));
        let d = TsMorphism::new(2, 2, 4, TsMorphism::identity(2, 4).lk, Series::unit().add(&y_series(&[(y, 1)]))).unwrap();
        let id = TsMorphism::identity(2, 4);
        assert_eq!(compose(&d, &id, 4).unwrap(), d);
        assert_eq!(compose(&id, &d, 4).unwrap(), d);
        assert_eq!(compose(&id, &id, 4).unwrap(), id);
    }

    #[test]
    fn composing_two_ys_by_matching() {
        // pure gluing: the strut records are zero
        let a = Diagram::y(plus(0), plus(1), minus(0));
        let b = Diagram::y(plus(0), minus(0), minus(1));
        let d = TsMorphism::new(2, 1, 4, zeros(3), y_series(&[(a, 1)])).unwrap();
        let e = TsMorphism::new(1, 2, 4, zeros(3), y_series(&[(b, 1)])).unwrap();
        let c = compose(&d, &e, 4).unwrap();
        // the unique matching joins 1⁺–1⁻ and 2⁺–2⁻ into a loop with legs 1⁻ (from D) and 1⁺ (from E)
        let mut want = Diagram::empty();
        let (u, v) = (want.add_tri(), want.add_tri());
        let (l1, l2) = (want.add_leg(minus(0)), want.add_leg(plus(0)));
        want.connect(crate::diagrams::Dart::new(u, 0), crate::diagrams::Dart::new(l1, 0));
        want.connect(crate::diagrams::Dart::new(v, 0), crate::diagrams::Dart::new(l2, 0));
        want.connect(crate::diagrams::Dart::new(u, 1), crate::diagrams::Dart::new(v, 1));
        want.connect(crate::diagrams::Dart::new(u, 2), crate::diagrams::Dart::new(v, 2));
        assert_eq!(c.y.len(), 1);
        assert_eq!(c.y.coefficient(&want).abs(), q(1));
        assert!(c.y.terms()[0].0.has_loop());
        assert!(upper_tree_reduction(&c).is_zero());
    }

    #[test]
    fn upper_tree_filter() {
        let keep = Diagram::y(plus(0), plus(1), plus(2));
        let drop = Diagram::y(plus(0), plus(1), minus(0));
        let d = TsMorphism::new(3, 3, 3, TsMorphism::identity(3, 3).lk, y_series(&[(Diagram::empty(), 1), (keep.clone(), 2), (drop, 1)])).unwrap();
        assert_eq!(upper_tree_reduction(&d), y_series(&[(Diagram::empty(), 1), (keep, 2)]));
        assert_eq!(upper_tree_reduction(&TsMorphism::identity(2, 3)), Series::unit());
    }

    #[test]
    fn additivity_examples() {
        let id = TsMorphism::identity(3, 2);
        assert!(leading_additivity_check(&id, &id, 1).unwrap());
        let y = Diagram::y(plus(0), plus(1), plus(2));
        let d = TsMorphism::new(3, 3, 2, id.lk.clone(), Series::unit().add(&y_series(&[(y.clone(), 1)]))).unwrap();
        let r = leading_additivity(&d, &id, 1).unwrap();
        assert!(r.holds() && !r.leading.is_zero());
        let mut lk = id.lk.clone();
        lk[3][3] = q(1);
        let e = TsMorphism::new(3, 3, 2, lk, Series::unit().add(&y_series(&[(y, 3)]))).unwrap();
        assert!(leading_additivity_check(&d, &e, 1).unwrap());
        let bad = TsMorphism::new(3, 3, 2, zeros(6), Series::unit()).unwrap();
        assert!(matches!(leading_additivity_check(&bad, &id, 1), Err(Error::BadStrutRecord(_))));
    }

    #[test]
    fn tau_levine_diagram_errors() {
        let g = 2;
        let a = Alphabet::surface(g);
        let h = Endo::with_images(a.clone(), &[(0, Word::parse(&a, "a1 b1 b2 b1^-1 b2^-1").unwrap())]);
        assert!(matches!(diagrammatic_tau_levine(&h, 1), Err(Error::NotInImage(_))));
        assert!(diagrammatic_tau_levine(&Endo::identity(a), 1).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let y = Diagram::y(plus(0), plus(1), minus(0));
        let mut lk = TsMorphism::identity(2, 3).lk;
        lk[2][3] = BigRational::new(1.into(), 3.into());
        lk[3][2] = lk[2][3].clone();
        let d = TsMorphism::new(2, 2, 3, lk, Series::unit().add(&y_series(&[(y, -2)]))).unwrap();
        assert_eq!(TsMorphism::from_json(&d.to_json()).unwrap(), d);
    }
}
