//! Linking matrices of bottom-top tangles and the block conditions that
//! classify Lagrangian cobordisms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::series::{parse_color, side_of, Side};
use crate::error::{Error, Result};

/// Symmetric integer matrix indexed by `1⁺,…,g⁺,1⁻,…,g⁻` in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingMatrix {
    pub g: usize,
    pub entries: Vec<Vec<BigInt>>,
}

impl LinkingMatrix {
    pub fn new(g: usize, entries: Vec<Vec<BigInt>>) -> Result<Self> {
        if entries.len() != 2 * g || entries.iter().any(|r| r.len() != 2 * g) {
            return Err(Error::SizeMismatch(format!("linking matrix of genus {g} must be {0}×{0}", 2 * g)));
        }
        for i in 0..2 * g {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(LinkingMatrix { g, entries })
    }

    /// `(0 Λᵀ; Λ Δ)`.
    pub fn from_blocks(lambda: &[Vec<BigInt>], delta: &[Vec<BigInt>]) -> Result<Self> {
        let g = lambda.len();
        let mut m = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
        for i in 0..g {
            for j in 0..g {
                m[g + i][j] = lambda[i][j].clone();
                m[j][g + i] = lambda[i][j].clone();
                m[g + i][g + j] = delta[i][j].clone();
            }
        }
        LinkingMatrix::new(g, m)
    }

    /// Linking matrix of the trivial cylinder.
    pub fn identity_cylinder(g: usize) -> Self {
        let id: Vec<Vec<BigInt>> = (0..g).map(|i| (0..g).map(|j| BigInt::from((i == j) as i32)).collect()).collect();
        LinkingMatrix::from_blocks(&id, &vec![vec![BigInt::zero(); g]; g]).expect("symmetric")
    }

    fn block(&self, r: usize, c: usize) -> Vec<Vec<BigInt>> {
        (0..self.g).map(|i| (0..self.g).map(|j| self.entries[r + i][c + j].clone()).collect()).collect()
    }

    /// Reads `{"1+": {"1-": 1, …}, …}` (missing entries are 0, one triangle
    /// suffices) or `{"genus": g, "matrix": [[…]]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("linking matrix: {m}"));
        if let Some(rows) = v.get("matrix").and_then(Value::as_array) {
            let entries: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| bad("rows must be arrays"))?
                        .iter()
                        .map(|x| int_of(x).ok_or_else(|| bad("entries must be integers")))
                        .collect()
                })
                .collect::<Result<_>>()?;
            let g = v.get("genus").and_then(Value::as_u64).map(|g| g as usize).unwrap_or(entries.len() / 2);
            return LinkingMatrix::new(g, entries);
        }
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let mut cells = Vec::new();
        let mut g = 0;
        for (r, row) in obj {
            let rc = index_of(r)?;
            g = g.max(rc.1 + 1);
            for (c, x) in row.as_object().ok_or_else(|| bad("rows must be objects"))? {
                let cc = index_of(c)?;
                g = g.max(cc.1 + 1);
                cells.push((rc, cc, int_of(x).ok_or_else(|| bad("entries must be integers"))?));
            }
        }
        let pos = |(s, i): (Side, usize)| if s == Side::Plus { i } else { g + i };
        let mut m: Vec<Vec<Option<BigInt>>> = vec![vec![None; 2 * g]; 2 * g];
        for (r, c, x) in cells {
            let (i, j) = (pos(r), pos(c));
            for (a, b) in [(i, j), (j, i)] {
                match &m[a][b] {
                    Some(y) if *y != x => return Err(Error::NotSymmetric),
                    _ => m[a][b] = Some(x.clone()),
                }
            }
        }
        LinkingMatrix::new(g, m.into_iter().map(|r| r.into_iter().map(Option::unwrap_or_default).collect()).collect())
    }

    pub fn to_json(&self) -> Value {
        let label = |i: usize| if i < self.g { format!("{}+", i + 1) } else { format!("{}-", i - self.g + 1) };
        let mut out = serde_json::Map::new();
        for i in 0..2 * self.g {
            let row: serde_json::Map<String, Value> =
                (0..2 * self.g).map(|j| (label(j), int_json(&self.entries[i][j]))).collect();
            out.insert(label(i), Value::Object(row));
        }
        Value::Object(out)
    }
}

fn int_json(x: &BigInt) -> Value {
    x.to_i64().map(Value::from).unwrap_or_else(|| Value::from(x.to_string()))
}

fn int_of(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn index_of(label: &str) -> Result<(Side, usize)> {
    let (s, i) = side_of(parse_color(label)?);
    if s == Side::Star {
        return Err(Error::Parse(format!("linking matrix labels are i+ or i-, found `{label}`")));
    }
    Ok((s, i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    NotLagrangian,
    Lc,
    Ilc,
    Ic,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NotLagrangian => "not-Lagrangian",
            Verdict::Lc => "LC",
            Verdict::Ilc => "ILC",
            Verdict::Ic => "IC",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismClass {
    pub verdict: Verdict,
    /// The `(−,+)` block `Λ` and the `(−,−)` block `Δ`, when the upper-left
    /// block vanishes.
    pub lambda: Option<Vec<Vec<BigInt>>>,
    pub delta: Option<Vec<Vec<BigInt>>>,
}

impl CobordismClass {
    pub fn to_json(&self) -> Value {
        let m = |b: &Option<Vec<Vec<BigInt>>>| {
            b.as_ref().map(|b| b.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
        };
        let mut out = BTreeMap::new();
        out.insert("verdict", json!(self.verdict.to_string()));
        out.insert("lambda", json!(m(&self.lambda)));
        out.insert("delta", json!(m(&self.delta)));
        json!(out)
    }
}

/// LC iff the `(+,+)` block vanishes, ILC iff moreover `Λ = Id`, IC iff
/// moreover `Δ = 0`.
pub fn classify_cobordism(l: &LinkingMatrix) -> Result<CobordismClass> {
    let l = LinkingMatrix::new(l.g, l.entries.clone())?;
    let g = l.g;
    if l.block(0, 0).iter().flatten().any(|x| !x.is_zero()) {
        return Ok(CobordismClass { verdict: Verdict::NotLagrangian, lambda: None, delta: None });
    }
    let lambda = l.block(g, 0);
    let delta = l.block(g, g);
    let is_id = (0..g).all(|i| (0..g).all(|j| if i == j { lambda[i][j].is_one() } else { lambda[i][j].is_zero() }));
    let verdict = match (is_id, delta.iter().flatten().all(Zero::is_zero)) {
        (false, _) => Verdict::Lc,
        (true, false) => Verdict::Ilc,
        (true, true) => Verdict::Ic,
    };
    Ok(CobordismClass { verdict, lambda: Some(lambda), delta: Some(delta) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn lemma_examples() {
        let ic = LinkingMatrix::identity_cylinder(2);
        assert_eq!(classify_cobordism(&ic).unwrap().verdict, Verdict::Ic);

        let hopf = LinkingMatrix::from_blocks(&z(&[&[1, 0], &[0, 1]]), &z(&[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(classify_cobordism(&hopf).unwrap().verdict, Verdict::Ilc);

        let two = LinkingMatrix::from_blocks(&z(&[&[1, 0], &[0, 2]]), &z(&[&[0, 0], &[0, 0]])).unwrap();
        assert_eq!(classify_cobordism(&two).unwrap().verdict, Verdict::Lc);

        let mut m = ic.entries.clone();
        m[0][0] = BigInt::one();
        assert_eq!(classify_cobordism(&LinkingMatrix::new(2, m).unwrap()).unwrap().verdict, Verdict::NotLagrangian);

        let mut m = ic.entries.clone();
        m[0][3] = BigInt::from(5);
        assert_eq!(LinkingMatrix::new(2, m), Err(Error::NotSymmetric));
    }

    #[test]
    fn json_round_trip() {
        let hopf = LinkingMatrix::from_blocks(&z(&[&[1, 0], &[0, 1]]), &z(&[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(LinkingMatrix::from_json(&hopf.to_json()).unwrap(), hopf);
        let sparse = json!({"1+": {"1-": 1}, "2+": {"2-": 1}});
        assert_eq!(LinkingMatrix::from_json(&sparse).unwrap(), LinkingMatrix::identity_cylinder(2));
        let asym = json!({"1+": {"1-": 1}, "1-": {"1+": 2}});
        assert_eq!(LinkingMatrix::from_json(&asym), Err(Error::NotSymmetric));
    }
}
