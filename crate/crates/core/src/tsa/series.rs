//! Finite series of Jacobi diagrams modulo AS, with legs colored by
//! `i⁺`, `i⁻` and `i*`, and the gluing operations on them.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::diagrams::json::{combination_from_json, combination_to_json};
use crate::diagrams::{Color, Combination, Diagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
    Star,
}

/// Color of `(i+1)^side`.
pub fn color(side: Side, i: usize) -> Color {
    3 * i as Color
        + match side {
            Side::Plus => 0,
            Side::Minus => 1,
            Side::Star => 2,
        }
}

pub fn side_of(c: Color) -> (Side, usize) {
    let side = match c % 3 {
        0 => Side::Plus,
        1 => Side::Minus,
        _ => Side::Star,
    };
    (side, (c / 3) as usize)
}

pub fn plus(i: usize) -> Color {
    color(Side::Plus, i)
}

pub fn minus(i: usize) -> Color {
    color(Side::Minus, i)
}

pub fn star(i: usize) -> Color {
    color(Side::Star, i)
}

/// Names `1+, 1-, 1*, 2+, …` indexed by color, for `n` indices.
pub fn color_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| [format!("{i}+"), format!("{i}-"), format!("{i}*")]).collect()
}

pub fn parse_color(name: &str) -> Result<Color> {
    let bad = || Error::Parse(format!("bad color `{name}`, expected e.g. 2+ or 1-"));
    let name = name.trim();
    let (num, side) = match name.char_indices().last() {
        Some((i, '+')) => (&name[..i], Side::Plus),
        Some((i, '-')) => (&name[..i], Side::Minus),
        Some((i, '*')) => (&name[..i], Side::Star),
        _ => return Err(bad()),
    };
    let i: usize = num.parse().map_err(|_| bad())?;
    if i == 0 {
        return Err(bad());
    }
    Ok(color(side, i - 1))
}

/// A finite rational combination of diagrams, stored on canonical
/// representatives so that equal series compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Series {
    terms: HashMap<Diagram, BigRational>,
}

impl Series {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty diagram with coefficient 1.
    pub fn unit() -> Self {
        let mut s = Self::zero();
        s.add_diagram(&Diagram::empty(), &BigRational::one());
        s
    }

    pub fn from_combination(x: &Combination) -> Self {
        let mut s = Self::zero();
        for (d, c) in x {
            s.add_diagram(d, c);
        }
        s
    }

    pub fn add_diagram(&mut self, d: &Diagram, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let (canon, sign, ambiguous) = d.canonical();
        if ambiguous {
            return;
        }
        let c = if sign < 0 { -c } else { c.clone() };
        let entry = self.terms.entry(canon.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&canon);
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_diagram(d, c);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        if c.is_zero() {
            return Series::zero();
        }
        Series { terms: self.terms.iter().map(|(d, x)| (d.clone(), x * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &Diagram) -> BigRational {
        let (canon, sign, ambiguous) = d.canonical();
        if ambiguous {
            return BigRational::zero();
        }
        let c = self.terms.get(&canon).cloned().unwrap_or_else(BigRational::zero);
        if sign < 0 {
            -c
        } else {
            c
        }
    }

    /// Terms in a deterministic order.
    pub fn terms(&self) -> Vec<(&Diagram, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| (a.0.ideg(), a.0.verts.len(), a.0).cmp(&(b.0.ideg(), b.0.verts.len(), b.0)));
        v
    }

    pub fn to_combination(&self) -> Combination {
        self.terms().into_iter().map(|(d, c)| (d.clone(), c.clone())).collect()
    }

    pub fn filter(&self, keep: impl Fn(&Diagram) -> bool) -> Series {
        Series { terms: self.terms.iter().filter(|(d, _)| keep(d)).map(|(d, c)| (d.clone(), c.clone())).collect() }
    }

    pub fn truncate(&self, cap: usize) -> Series {
        self.filter(|d| d.ideg() <= cap)
    }

    /// Terms of i-degree exactly `k`.
    pub fn degree_part(&self, k: usize) -> Series {
        self.filter(|d| d.ideg() == k)
    }

    pub fn max_ideg(&self) -> usize {
        self.terms.keys().map(Diagram::ideg).max().unwrap_or(0)
    }

    /// Product under disjoint union, dropping terms above `cap`.
    pub fn disjoint(&self, other: &Series, cap: usize) -> Series {
        let mut out = Series::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.ideg() + b.ideg() <= cap {
                    out.add_diagram(&a.disjoint_union(b), &(x * y));
                }
            }
        }
        out
    }

    /// Multilinear substitution of every leg color.
    pub fn relabel(&self, subst: impl Fn(Color) -> Vec<(Color, BigRational)>) -> Series {
        let mut out = Series::zero();
        for (d, c) in &self.terms {
            let legs: Vec<(usize, Color)> = d.legs().collect();
            let mut partial = vec![(d.clone(), c.clone())];
            for (v, col) in legs {
                let choices = subst(col);
                let mut next = Vec::with_capacity(partial.len() * choices.len());
                for (p, x) in &partial {
                    for (nc, y) in &choices {
                        if y.is_zero() {
                            continue;
                        }
                        let mut q = p.clone();
                        q.verts[v] = crate::diagrams::Vertex::Leg(*nc);
                        next.push((q, x * y));
                    }
                }
                partial = next;
            }
            for (q, x) in partial {
                out.add_diagram(&q, &x);
            }
        }
        out
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        combination_to_json(&self.to_combination(), names)
    }

    pub fn from_json(v: &Value, names: &[String]) -> Result<Series> {
        Ok(Series::from_combination(&combination_from_json(v, names)?))
    }
}

/// `exp_⊔` of a combination of struts, up to `max` struts.
pub fn exp_struts(struts: &[(Color, Color, BigRational)], max: usize) -> Series {
    let mut gen = Series::zero();
    for (a, b, c) in struts {
        gen.add_diagram(&Diagram::strut(*a, *b), c);
    }
    let mut out = Series::unit();
    let mut power = Series::unit();
    for n in 1..=max {
        power = power.disjoint(&gen, usize::MAX).scale(&BigRational::new(1.into(), (n as i64).into()));
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn legs_by_color(d: &Diagram, colors: &[Color]) -> Vec<Vec<usize>> {
    colors.iter().map(|&c| d.legs().filter(|&(_, x)| x == c).map(|(v, _)| v).collect()).collect()
}

/// `⟨E, F⟩`: the sum over all ways of gluing every leg of `E` whose color is
/// listed in `glued` with a leg of `F` of the same color. Terms above `cap`
/// are dropped.
pub fn pairing(e: &Series, f: &Series, glued: &[Color], cap: usize) -> Series {
    let mut out = Series::zero();
    let mut f_index: HashMap<Vec<usize>, Vec<(&Diagram, &BigRational, Vec<Vec<usize>>)>> = HashMap::new();
    for (b, y) in &f.terms {
        let legs = legs_by_color(b, glued);
        f_index.entry(legs.iter().map(Vec::len).collect()).or_default().push((b, y, legs));
    }
    for (a, x) in &e.terms {
        let a_legs = legs_by_color(a, glued);
        let counts: Vec<usize> = a_legs.iter().map(Vec::len).collect();
        let Some(partners) = f_index.get(&counts) else { continue };
        let perms: Vec<Vec<Vec<usize>>> = counts.iter().map(|&n| permutations(n)).collect();
        for (b, y, b_legs) in partners {
            if a.ideg() + b.ideg() > cap {
                continue;
            }
            let union = a.disjoint_union(b);
            let off = a.verts.len();
            let coeff = x * *y;
            let mut choice = vec![0usize; glued.len()];
            loop {
                let mut pairs = Vec::new();
                for (ci, p) in choice.iter().enumerate() {
                    for (i, &j) in perms[ci][*p].iter().enumerate() {
                        pairs.push((a_legs[ci][i], b_legs[ci][j] + off));
                    }
                }
                out.add_diagram(&union.glue(&pairs), &coeff);
                // advance the mixed-radix counter over per-color bijections
                let mut i = 0;
                while i < choice.len() {
                    choice[i] += 1;
                    if choice[i] < perms[i].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn color_round_trip() {
        for c in 0..30 {
            let names = color_names(10);
            assert_eq!(parse_color(&names[c as usize]).unwrap(), c);
        }
        assert!(parse_color("0+").is_err());
        assert!(parse_color("x").is_err());
    }

    #[test]
    fn pairing_examples() {
        let (c, d) = (plus(0), minus(1));
        let e = Series::from_combination(&vec![(Diagram::strut(star(0), c), q(1))]);
        let f = Series::from_combination(&vec![(Diagram::strut(star(0), d), q(1))]);
        let p = pairing(&e, &f, &[star(0)], 10);
        assert_eq!(p, Series::from_combination(&vec![(Diagram::strut(c, d), q(1))]));

        let f2 = Series::from_combination(&vec![(Diagram::strut(star(0), d).disjoint_union(&Diagram::strut(star(0), d)), q(1))]);
        assert!(pairing(&e, &f2, &[star(0)], 10).is_zero());

        let e2 = Series::from_combination(&vec![(Diagram::strut(star(0), c).disjoint_union(&Diagram::strut(star(0), c)), q(1))]);
        let two = Diagram::strut(c, d).disjoint_union(&Diagram::strut(c, d));
        assert_eq!(pairing(&e2, &f2, &[star(0)], 10), Series::from_combination(&vec![(two, q(2))]));
    }

    #[test]
    fn exp_of_one_strut() {
        let s = exp_struts(&[(plus(0), minus(0), q(1))], 3);
        let two = Diagram::strut(plus(0), minus(0)).disjoint_union(&Diagram::strut(plus(0), minus(0)));
        assert_eq!(s.coefficient(&two), BigRational::new(1.into(), 2.into()));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn relabel_is_multilinear() {
        let y = Series::from_combination(&vec![(Diagram::y(plus(0), plus(1), minus(0)), q(1))]);
        let r = y.relabel(|c| if c == minus(0) { vec![(plus(2), q(1)), (minus(0), q(2))] } else { vec![(c, q(1))] });
        assert_eq!(r.coefficient(&Diagram::y(plus(0), plus(1), minus(0))), q(2));
        assert_eq!(r.coefficient(&Diagram::y(plus(0), plus(1), plus(2))), q(1));
        // two legs of one color: the Y diagram is its own negative
        assert!(Series::from_combination(&vec![(Diagram::y(plus(0), plus(0), minus(0)), q(1))]).is_zero());
    }
}
