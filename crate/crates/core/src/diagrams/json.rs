//! JSON form of diagrams:
//! `{idegree, vertices:[{id,kind}], edges:[[id,id]], cyclic:{id:[e1,e2,e3]},
//! legColors:{id:[{color,coeff}]}}`, with an optional `circles` count.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{Color, Combination, Dart, Diagram, Vertex};
use crate::error::{Error, Result};
use crate::freelie::parse_rational;

pub fn diagram_to_json(d: &Diagram, names: &[String]) -> Value {
    let mut edge_of: HashMap<Dart, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (v, kind) in d.verts.iter().enumerate() {
        let deg = if *kind == Vertex::Tri { 3 } else { 1 };
        for s in 0..deg {
            let a = Dart::new(v, s);
            let b = d.opposite(a);
            if a <= b {
                edge_of.insert(a, edges.len());
                edge_of.insert(b, edges.len());
                edges.push(json!([a.v, b.v]));
            }
        }
    }
    let vertices: Vec<Value> = d
        .verts
        .iter()
        .enumerate()
        .map(|(i, v)| json!({"id": i, "kind": if *v == Vertex::Tri { "trivalent" } else { "univalent" }}))
        .collect();
    let mut cyclic = BTreeMap::new();
    let mut legs = BTreeMap::new();
    for (i, v) in d.verts.iter().enumerate() {
        match v {
            Vertex::Tri => {
                cyclic.insert(i.to_string(), json!((0..3).map(|s| edge_of[&Dart::new(i, s)]).collect::<Vec<_>>()));
            }
            Vertex::Leg(c) => {
                legs.insert(i.to_string(), json!([{"color": names[*c as usize], "coeff": "1"}]));
            }
        }
    }
    let mut out = json!({"idegree": d.ideg(), "vertices": vertices, "edges": edges, "cyclic": cyclic, "legColors": legs});
    if d.circles > 0 {
        out["circles"] = json!(d.circles);
    }
    out
}

pub fn combination_to_json(x: &Combination, names: &[String]) -> Value {
    let terms: Vec<Value> =
        x.iter().map(|(d, c)| json!({"coeff": c.to_string(), "diagram": diagram_to_json(d, names)})).collect();
    json!({ "terms": terms })
}

fn bad(m: impl Into<String>) -> Error {
    Error::Parse(format!("diagram: {}", m.into()))
}

/// Reads a diagram, expanding multilinear leg colors into a combination of
/// diagrams with single colors.
pub fn diagram_from_json(v: &Value, names: &[String]) -> Result<Combination> {
    let verts = v["vertices"].as_array().ok_or_else(|| bad("missing vertices"))?;
    let mut id_of: HashMap<String, usize> = HashMap::new();
    let mut tri = Vec::new();
    for (i, x) in verts.iter().enumerate() {
        id_of.insert(id_key(&x["id"])?, i);
        tri.push(match x["kind"].as_str() {
            Some("trivalent") => true,
            Some("univalent") => false,
            _ => return Err(bad("vertex kind must be univalent or trivalent")),
        });
    }
    let lookup = |x: &Value| -> Result<usize> { id_of.get(&id_key(x)?).copied().ok_or_else(|| bad("unknown vertex id")) };
    let edges: Vec<(usize, usize)> = v["edges"]
        .as_array()
        .ok_or_else(|| bad("missing edges"))?
        .iter()
        .map(|e| Ok((lookup(&e[0])?, lookup(&e[1])?)))
        .collect::<Result<_>>()?;
    // slots at each trivalent vertex come from its cyclic edge list
    let mut slots: HashMap<usize, Vec<usize>> = HashMap::new();
    let cyclic = v["cyclic"].as_object().ok_or_else(|| bad("missing cyclic orders"))?;
    for (key, list) in cyclic {
        let vid = *id_of.get(key).ok_or_else(|| bad("unknown vertex in cyclic orders"))?;
        let es: Vec<usize> = list
            .as_array()
            .ok_or_else(|| bad("cyclic order must be a list"))?
            .iter()
            .map(|e| e.as_u64().map(|x| x as usize).filter(|&x| x < edges.len()).ok_or_else(|| bad("bad edge index")))
            .collect::<Result<_>>()?;
        if es.len() != 3 || !tri[vid] {
            return Err(bad("cyclic orders need three edges at a trivalent vertex"));
        }
        slots.insert(vid, es);
    }
    let mut d = Diagram::empty();
    for &t in &tri {
        if t {
            d.add_tri();
        } else {
            d.add_leg(0);
        }
    }
    let mut used: HashMap<(usize, usize), usize> = HashMap::new();
    let mut dart_for = |vid: usize, e: usize| -> Result<Dart> {
        if !tri[vid] {
            return Ok(Dart::new(vid, 0));
        }
        let es = slots.get(&vid).ok_or_else(|| bad("trivalent vertex without cyclic order"))?;
        let skip = used.entry((vid, e)).or_default();
        let s = es.iter().enumerate().filter(|(_, &x)| x == e).nth(*skip).map(|(s, _)| s).ok_or_else(|| bad("edge missing from cyclic order"))?;
        *skip += 1;
        Ok(Dart::new(vid, s))
    };
    let mut seen = vec![0usize; tri.len()];
    for (e, &(a, b)) in edges.iter().enumerate() {
        let da = dart_for(a, e)?;
        let db = dart_for(b, e)?;
        seen[a] += 1;
        seen[b] += 1;
        d.connect(da, db);
    }
    if seen.iter().zip(&tri).any(|(&s, &t)| s != if t { 3 } else { 1 }) {
        return Err(bad("vertex degrees must be 1 or 3"));
    }
    d.circles = v.get("circles").and_then(Value::as_u64).unwrap_or(0) as u32;
    // multilinear expansion of the leg colors
    let colors = v["legColors"].as_object().ok_or_else(|| bad("missing legColors"))?;
    let mut out: Combination = vec![(d, BigRational::one())];
    for (i, &t) in tri.iter().enumerate() {
        if t {
            continue;
        }
        let key = verts[i]["id"].clone();
        let list = colors.get(&id_key(&key)?).and_then(Value::as_array).ok_or_else(|| bad("leg without color"))?;
        let mut choices: Vec<(Color, BigRational)> = Vec::new();
        for c in list {
            let name = c["color"].as_str().ok_or_else(|| bad("color must be a string"))?;
            let col = names.iter().position(|x| x == name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
            let coeff = match &c["coeff"] {
                Value::Null => BigRational::one(),
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => parse_rational(&n.to_string())?,
                _ => return Err(bad("bad coefficient")),
            };
            choices.push((col as Color, coeff));
        }
        let mut next = Combination::new();
        for (dg, c0) in &out {
            for (col, c1) in &choices {
                let mut x = dg.clone();
                x.verts[i] = Vertex::Leg(*col);
                next.push((x, c0 * c1));
            }
        }
        out = next;
    }
    out.retain(|(_, c)| !c.is_zero());
    if let Some(k) = v.get("idegree").and_then(Value::as_u64) {
        if let Some((d, _)) = out.first() {
            if d.ideg() != k as usize {
                return Err(Error::DegreeMismatch(format!("idegree {k} but {} trivalent vertices", d.ideg())));
            }
        }
    }
    Ok(out)
}

/// Reads either a single diagram or `{"terms":[{coeff, diagram}]}`.
pub fn combination_from_json(v: &Value, names: &[String]) -> Result<Combination> {
    let Some(terms) = v.get("terms").and_then(Value::as_array) else {
        return diagram_from_json(v, names);
    };
    let mut out = Combination::new();
    for t in terms {
        let c = match &t["coeff"] {
            Value::Null => BigRational::one(),
            Value::String(s) => parse_rational(s)?,
            Value::Number(n) => parse_rational(&n.to_string())?,
            _ => return Err(bad("bad coefficient")),
        };
        out.extend(diagram_from_json(&t["diagram"], names)?.into_iter().map(|(d, x)| (d, x * &c)));
    }
    Ok(out)
}

fn id_key(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(bad("vertex ids must be strings or integers")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::default_names;

    #[test]
    fn roundtrip() {
        let names = default_names(3);
        let d = Diagram::y(0, 1, 2);
        let v = diagram_to_json(&d, &names);
        let back = diagram_from_json(&v, &names).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].0.canonical(), d.canonical());
    }

    #[test]
    fn multilinear_legs() {
        let names = default_names(3);
        let mut v = diagram_to_json(&Diagram::y(0, 1, 2), &names);
        v["legColors"]["1"] = json!([{"color": "x1", "coeff": "2"}, {"color": "x3", "coeff": "-1"}]);
        let c = diagram_from_json(&v, &names).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, BigRational::from_integer(2.into()));
    }
}
