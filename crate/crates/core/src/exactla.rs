//! Exact integer and rational linear algebra.
//!
//! Dense [`IntMatrix`] with Smith normal form and integer kernels, sparse
//! relation storage for [`PresentedModule`], and kernels of maps between
//! presented modules. Everything is arbitrary precision.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse integer vector: `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(usize, BigInt)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::SizeMismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(v).expect("rectangular literal")
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_sparse_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rational_rank(&self.to_rows())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] -= q * s;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.trim().parse::<BigInt>()).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        IntMatrix::from_rows(parsed).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `S`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }
}

struct Transforms<'a> {
    u: Option<&'a mut IntMatrix>,
    uinv: Option<&'a mut IntMatrix>,
    v: Option<&'a mut IntMatrix>,
}

impl Transforms<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = self.u.as_deref_mut() {
            u.swap_rows(a, b);
        }
        if let Some(w) = self.uinv.as_deref_mut() {
            w.swap_cols(a, b);
        }
    }
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if let Some(u) = self.u.as_deref_mut() {
            u.row_axpy(dst, src, q);
        }
        if let Some(w) = self.uinv.as_deref_mut() {
            w.col_axpy(src, dst, &-q);
        }
    }
    fn negate_row(&mut self, i: usize) {
        if let Some(u) = self.u.as_deref_mut() {
            u.negate_row(i);
        }
        if let Some(w) = self.uinv.as_deref_mut() {
            w.negate_col(i);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = self.v.as_deref_mut() {
            v.swap_cols(a, b);
        }
    }
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if let Some(v) = self.v.as_deref_mut() {
            v.col_axpy(dst, src, q);
        }
    }
}

/// Reduces `s` in place to Smith form, mirroring row operations into `U`
/// (and its inverse) and column operations into `V`.
fn smith_in_place(s: &mut IntMatrix, tr: &mut Transforms<'_>) {
    let (m, n) = (s.rows, s.cols);
    let mut t = 0;
    while t < m.min(n) {
        // smallest |entry| in the trailing block, lowest (row, col) on ties
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = s.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        s.swap_cols(t, pj);
        tr.swap_cols(t, pj);
        loop {
            let p = s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if !s.get(i, t).is_zero() {
                    let q = s.get(i, t) / &p;
                    if !q.is_zero() {
                        s.row_axpy(i, t, &q);
                        tr.row_axpy(i, t, &q);
                    }
                    if !s.get(i, t).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !s.get(t, j).is_zero() {
                    let q = s.get(t, j) / &p;
                    if !q.is_zero() {
                        s.col_axpy(j, t, &q);
                        tr.col_axpy(j, t, &q);
                    }
                    if !s.get(t, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t..m {
                    let x = s.get(i, t);
                    if !x.is_zero() && x.abs() < s.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    let x = s.get(t, j);
                    if !x.is_zero() && x.abs() < s.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                s.swap_rows(t, best.0);
                tr.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                tr.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !s.get(i, j).is_multiple_of(&p) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    s.row_axpy(t, i, &minus_one);
                    tr.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            tr.negate_row(t);
        }
        t += 1;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    smith_in_place(&mut s, &mut Transforms { u: Some(&mut u), uinv: None, v: Some(&mut v) });
    SmithDecomposition { u, s, v }
}

/// Invariant factors only; skips the transforms.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut s = a.clone();
    smith_in_place(&mut s, &mut Transforms { u: None, uinv: None, v: None });
    (0..s.rows.min(s.cols)).map(|i| s.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
}

/// Column echelon form by unimodular column operations, optionally tracking
/// the transform. Returns the number of pivot columns; columns from that
/// index on are zero.
fn column_echelon(w: &mut IntMatrix, mut t: Option<&mut IntMatrix>) -> (usize, Vec<usize>) {
    let mut pc = 0;
    let mut pivot_rows = Vec::new();
    for row in 0..w.rows {
        if pc == w.cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in pc..w.cols {
                let x = w.get(row, j);
                if !x.is_zero() && best.is_none_or(|b| x.abs() < w.get(row, b).abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            w.swap_cols(pc, b);
            if let Some(t) = t.as_deref_mut() {
                t.swap_cols(pc, b);
            }
            let p = w.get(row, pc).clone();
            let mut done = true;
            for j in pc + 1..w.cols {
                if !w.get(row, j).is_zero() {
                    let q = w.get(row, j) / &p;
                    w.col_axpy(j, pc, &q);
                    if let Some(t) = t.as_deref_mut() {
                        t.col_axpy(j, pc, &q);
                    }
                    if !w.get(row, j).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if w.get(row, pc).is_negative() {
                    w.negate_col(pc);
                    if let Some(t) = t.as_deref_mut() {
                        t.negate_col(pc);
                    }
                }
                pivot_rows.push(row);
                pc += 1;
                break;
            }
        }
    }
    (pc, pivot_rows)
}

/// Basis of the integer kernel of `a`, as the columns of the result.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let mut w = a.clone();
    let mut t = IntMatrix::identity(a.cols);
    let (pc, _) = column_echelon(&mut w, Some(&mut t));
    let cols: Vec<Vec<BigInt>> = (pc..a.cols).map(|j| t.column(j)).collect();
    IntMatrix::from_columns(a.cols, &cols)
}

/// A full-rank sublattice of `Z^d` held in lower column echelon form, so
/// that membership and coordinates are a forward substitution.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let mut w = IntMatrix::from_columns(dim, gens);
        let (pc, pivots) = column_echelon(&mut w, None);
        Lattice { dim, basis: (0..pc).map(|j| w.column(j)).collect(), pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is not in the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut r = x.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, rem) = r[p].div_rem(&b[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (ri, bi) in r.iter_mut().zip(b) {
                    if !bi.is_zero() {
                        *ri -= &q * bi;
                    }
                }
            }
            out.push(q);
        }
        r.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn combine(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += c * bi;
                }
            }
        }
        v
    }
}

pub fn sparse_from_dense(v: &[BigInt]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn dense_from_sparse(n: usize, v: &SparseVec) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in v {
        out[*i] += x;
    }
    out
}

/// Adds `c * v` into the accumulator map.
fn accumulate(acc: &mut HashMap<usize, BigInt>, c: &BigInt, v: &SparseVec) {
    for (i, x) in v {
        let e = acc.entry(*i).or_default();
        *e += c * x;
    }
}

fn finish(acc: HashMap<usize, BigInt>) -> SparseVec {
    let mut v: SparseVec = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

/// Normal form of a presented module: `⊕ Z/d_i` with `d_i ≠ 1` (`d_i = 0`
/// means a free summand), with coordinate changes both ways.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub orders: Vec<BigInt>,
    /// For each original generator, its image in normalized coordinates.
    pub to_norm: Vec<SparseVec>,
    /// For each normalized generator, a representative in original coordinates.
    pub from_norm: Vec<SparseVec>,
}

impl Normalized {
    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.orders.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    /// Normalized coordinates of an element given in original coordinates,
    /// reduced modulo the orders.
    pub fn coords(&self, x: &SparseVec) -> Vec<BigInt> {
        let mut acc = HashMap::new();
        for (g, c) in x {
            accumulate(&mut acc, c, &self.to_norm[*g]);
        }
        let mut v = dense_from_sparse(self.orders.len(), &finish(acc));
        for (vi, d) in v.iter_mut().zip(&self.orders) {
            if !d.is_zero() {
                *vi = vi.mod_floor(d);
            }
        }
        v
    }

    pub fn lift(&self, y: &[BigInt]) -> SparseVec {
        let mut acc = HashMap::new();
        for (c, rep) in y.iter().zip(&self.from_norm) {
            if !c.is_zero() {
                accumulate(&mut acc, c, rep);
            }
        }
        finish(acc)
    }

    pub fn is_zero_element(&self, y: &[BigInt]) -> bool {
        y.iter().zip(&self.orders).all(|(c, d)| if d.is_zero() { c.is_zero() } else { c.is_multiple_of(d) })
    }
}

/// The abelian group `Z^gens / ⟨relations⟩`, relations stored sparsely.
#[derive(Debug)]
pub struct PresentedModule {
    gens: usize,
    relations: Vec<SparseVec>,
    normalized: OnceLock<Normalized>,
}

impl Clone for PresentedModule {
    fn clone(&self) -> Self {
        let normalized = OnceLock::new();
        if let Some(n) = self.normalized.get() {
            let _ = normalized.set(n.clone());
        }
        PresentedModule { gens: self.gens, relations: self.relations.clone(), normalized }
    }
}

impl PresentedModule {
    pub fn new(gens: usize, relations: Vec<SparseVec>) -> Self {
        let relations = relations.into_iter().filter(|r| !r.is_empty()).collect();
        PresentedModule { gens, relations, normalized: OnceLock::new() }
    }

    pub fn free(gens: usize) -> Self {
        Self::new(gens, Vec::new())
    }

    pub fn from_matrix(relations: &IntMatrix) -> Self {
        Self::new(relations.rows(), (0..relations.cols()).map(|j| sparse_from_dense(&relations.column(j))).collect())
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::from_sparse_columns(self.gens, &self.relations)
    }

    pub fn normalized(&self) -> &Normalized {
        self.normalized.get_or_init(|| normalize(self.gens, &self.relations))
    }

    pub fn free_rank(&self) -> usize {
        self.normalized().free_rank()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.normalized().torsion()
    }

    /// Order of the module, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let n = self.normalized();
        if n.free_rank() > 0 {
            return None;
        }
        Some(n.orders.iter().fold(BigInt::one(), |a, d| a * d))
    }

    pub fn direct_sum(parts: &[&PresentedModule]) -> PresentedModule {
        let mut offset = 0;
        let mut rels = Vec::new();
        for p in parts {
            rels.extend(p.relations.iter().map(|r| r.iter().map(|(i, x)| (i + offset, x.clone())).collect()));
            offset += p.gens;
        }
        PresentedModule::new(offset, rels)
    }
}

/// Unit-pivot elimination on sparse relations followed by dense Smith form
/// on what is left.
fn normalize(gens: usize, relations: &[SparseVec]) -> Normalized {
    let mut rows: Vec<Option<HashMap<usize, BigInt>>> =
        relations.iter().map(|r| Some(r.iter().cloned().collect())).collect();
    let mut col_index: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); gens];
    for (ri, r) in relations.iter().enumerate() {
        for (g, _) in r {
            col_index[*g].insert(ri);
        }
    }
    let mut eliminated: Vec<Option<SparseVec>> = vec![None; gens];
    let mut order = Vec::new();
    loop {
        // cheapest unit pivot by Markowitz count
        let mut best: Option<(usize, usize, usize)> = None;
        for (ri, r) in rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for (g, c) in r {
                if c.abs().is_one() {
                    let cost = (r.len() - 1) * (col_index[*g].len() - 1);
                    if best.is_none_or(|(_, _, bc)| cost < bc) {
                        best = Some((ri, *g, cost));
                    }
                }
            }
            if best.is_some_and(|(_, _, c)| c == 0) {
                break;
            }
        }
        let Some((ri, g, _)) = best else { break };
        let r = rows[ri].take().expect("live row");
        for h in r.keys() {
            col_index[*h].remove(&ri);
        }
        let c = r[&g].clone();
        // g = -c * Σ_{h≠g} r_h h   (c = ±1)
        let expr: SparseVec = {
            let mut e: SparseVec = r.iter().filter(|(h, _)| **h != g).map(|(h, x)| (*h, -(&c * x))).collect();
            e.sort_by_key(|(i, _)| *i);
            e
        };
        let users: Vec<usize> = col_index[g].iter().copied().collect();
        for ui in users {
            let row = rows[ui].as_mut().expect("live row");
            let k = row.remove(&g).expect("indexed");
            col_index[g].remove(&ui);
            for (h, x) in &expr {
                let e = row.entry(*h).or_default();
                let was_zero = e.is_zero();
                *e += &k * x;
                if e.is_zero() {
                    row.remove(h);
                    col_index[*h].remove(&ui);
                } else if was_zero {
                    col_index[*h].insert(ui);
                }
            }
            if row.is_empty() {
                rows[ui] = None;
            }
        }
        eliminated[g] = Some(expr);
        order.push(g);
    }
    let survivors: Vec<usize> = (0..gens).filter(|g| eliminated[*g].is_none()).collect();
    let mut pos = vec![usize::MAX; gens];
    for (k, g) in survivors.iter().enumerate() {
        pos[*g] = k;
    }
    // expressions of every generator over survivors, resolved in reverse
    let mut expr_s: Vec<Option<SparseVec>> = vec![None; gens];
    for &g in &survivors {
        expr_s[g] = Some(vec![(pos[g], BigInt::one())]);
    }
    for &g in order.iter().rev() {
        let mut acc = HashMap::new();
        for (h, x) in eliminated[g].as_ref().expect("eliminated") {
            accumulate(&mut acc, x, expr_s[*h].as_ref().expect("resolved later pivot"));
        }
        expr_s[g] = Some(finish(acc));
    }
    let ns = survivors.len();
    let live: Vec<SparseVec> = rows
        .into_iter()
        .flatten()
        .map(|r| {
            let mut v: SparseVec = r.into_iter().map(|(h, x)| (pos[h], x)).collect();
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect();
    let mut s = IntMatrix::from_sparse_columns(ns, &live);
    let mut u = IntMatrix::identity(ns);
    let mut uinv = IntMatrix::identity(ns);
    smith_in_place(&mut s, &mut Transforms { u: Some(&mut u), uinv: Some(&mut uinv), v: None });
    let diag: Vec<BigInt> =
        (0..ns).map(|i| if i < s.cols { s.get(i, i).clone() } else { BigInt::zero() }).collect();
    let keep: Vec<usize> = (0..ns).filter(|&i| !diag[i].is_one()).collect();
    let to_norm = expr_s
        .into_iter()
        .map(|e| {
            let e = e.expect("resolved");
            let mut acc = HashMap::new();
            for (new, &i) in keep.iter().enumerate() {
                let mut c = BigInt::zero();
                for (k, x) in &e {
                    let uk = u.get(i, *k);
                    if !uk.is_zero() {
                        c += uk * x;
                    }
                }
                if !c.is_zero() {
                    acc.insert(new, c);
                }
            }
            finish(acc)
        })
        .collect();
    let from_norm = keep
        .iter()
        .map(|&i| {
            let mut v: SparseVec = (0..ns)
                .filter(|&k| !uinv.get(k, i).is_zero())
                .map(|k| (survivors[k], uinv.get(k, i).clone()))
                .collect();
            v.sort_by_key(|(g, _)| *g);
            v
        })
        .collect();
    Normalized { orders: keep.iter().map(|&i| diag[i].clone()).collect(), to_norm, from_norm }
}

/// Kernel of a map between presented modules, with its embedding.
#[derive(Clone, Debug)]
pub struct MapKernel {
    /// The kernel as an abstract module; generator `i` is `basis[i]`.
    pub module: PresentedModule,
    /// Kernel generators in the source's normalized coordinates.
    pub lattice: Lattice,
}

impl MapKernel {
    /// Kernel coordinates of a source element (original coordinates), or
    /// `None` if it does not lie in the kernel.
    pub fn coordinates(&self, source: &PresentedModule, x: &SparseVec) -> Option<Vec<BigInt>> {
        self.lattice.coordinates(&source.normalized().coords(x))
    }

    /// Representative in the source's original coordinates.
    pub fn to_source(&self, source: &PresentedModule, y: &[BigInt]) -> SparseVec {
        source.normalized().lift(&self.lattice.combine(y))
    }
}

/// Kernel of the map sending source generator `j` to `images[j]` (target
/// original coordinates).
pub fn presented_map_kernel(
    source: &PresentedModule,
    target: &PresentedModule,
    images: &[SparseVec],
) -> Result<MapKernel> {
    if images.len() != source.gens {
        return Err(Error::SizeMismatch(format!("{} images for {} generators", images.len(), source.gens)));
    }
    let ns = source.normalized();
    let nt = target.normalized();
    let s = ns.orders.len();
    // images of normalized source generators in normalized target coordinates
    let fcols: Vec<Vec<BigInt>> = ns
        .from_norm
        .iter()
        .map(|rep| {
            let mut acc = HashMap::new();
            for (g, c) in rep {
                accumulate(&mut acc, c, &images[*g]);
            }
            nt.coords(&finish(acc))
        })
        .collect();
    for (i, e) in ns.orders.iter().enumerate() {
        if !e.is_zero() {
            let scaled: Vec<BigInt> = fcols[i].iter().map(|x| x * e).collect();
            if !nt.is_zero_element(&scaled) {
                return Err(Error::IllDefinedMap(format!("relation of order {e} on source generator {i} is not preserved")));
            }
        }
    }
    let free_rows: Vec<usize> = (0..nt.orders.len()).filter(|&j| nt.orders[j].is_zero()).collect();
    let tors_rows: Vec<usize> = (0..nt.orders.len()).filter(|&j| !nt.orders[j].is_zero()).collect();
    let mut f_free = IntMatrix::zeros(free_rows.len(), s);
    for (r, &j) in free_rows.iter().enumerate() {
        for (i, col) in fcols.iter().enumerate() {
            f_free.set(r, i, col[j].clone());
        }
    }
    let k1 = integer_kernel(&f_free);
    let r1 = k1.cols();
    let mut gens: Vec<Vec<BigInt>> = k1.columns();
    if !tors_rows.is_empty() && r1 > 0 {
        let t = tors_rows.len();
        let mut a2 = IntMatrix::zeros(t, r1 + t);
        for (r, &j) in tors_rows.iter().enumerate() {
            for c in 0..r1 {
                let mut acc = BigInt::zero();
                for (i, col) in fcols.iter().enumerate() {
                    let k = k1.get(i, c);
                    if !k.is_zero() && !col[j].is_zero() {
                        acc += k * &col[j];
                    }
                }
                a2.set(r, c, acc);
            }
            a2.set(r, r1 + r, nt.orders[j].clone());
        }
        let k2 = integer_kernel(&a2);
        let proj: Vec<Vec<BigInt>> = k2.columns().into_iter().map(|c| c[..r1].to_vec()).collect();
        let sub = Lattice::from_generators(r1, &proj);
        gens = sub.basis().iter().map(|y| k1.mul_vec(y)).collect();
    }
    // the kernel lattice also contains the source relations e_i·ε_i
    for (i, e) in ns.orders.iter().enumerate() {
        if !e.is_zero() {
            let mut v = vec![BigInt::zero(); s];
            v[i] = e.clone();
            gens.push(v);
        }
    }
    let lattice = Lattice::from_generators(s, &gens);
    let mut rels = Vec::new();
    for (i, e) in ns.orders.iter().enumerate() {
        if !e.is_zero() {
            let mut v = vec![BigInt::zero(); s];
            v[i] = e.clone();
            let y = lattice.coordinates(&v).expect("source relation lies in kernel lattice");
            rels.push(sparse_from_dense(&y));
        }
    }
    Ok(MapKernel { module: PresentedModule::new(lattice.rank(), rels), lattice })
}

/// Reduced row echelon form over the rationals; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut q: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    rref(&mut q).len()
}

pub fn rational_rank_q(rows: &[Vec<BigRational>]) -> usize {
    let mut q = rows.to_vec();
    rref(&mut q).len()
}

/// Incremental rational row space, for spans and membership.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the space; the remainder is zero iff `v` is inside.
    pub fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.dim, "row length");
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Solves `A x = b` over the rationals for `A` given by columns; returns one
/// solution or `None`.
pub fn solve_rational(columns: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = b.len();
    let n = columns.len();
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rows[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn check_snf(a: &IntMatrix) {
        let d = smith_normal_form(a);
        assert_eq!(d.u.mul(a).unwrap().mul(&d.v).unwrap(), d.s);
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    assert!(d.s.get(i, j).is_zero());
                }
            }
        }
        let f = d.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn snf_identity() {
        let d = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(d.s, IntMatrix::identity(2));
    }

    #[test]
    fn snf_diag_2_3() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
        check_snf(&a);
    }

    #[test]
    fn snf_zero() {
        let a = IntMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&a).s, a);
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&IntMatrix::from_i64(&[&[4, 6, 8], &[6, 9, 12], &[2, 2, 2], &[0, 0, 10]]));
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == vec![bi(1), bi(-1)] || v == vec![bi(-1), bi(1)]);
        assert_eq!(integer_kernel(&IntMatrix::identity(3)).cols(), 0);
        let k = integer_kernel(&IntMatrix::from_i64(&[&[2, 4]]));
        let v = k.column(0);
        assert!(v == vec![bi(2), bi(-1)] || v == vec![bi(-2), bi(1)]);
    }

    #[test]
    fn presented_module_torsion() {
        // Z^3 / <(2,0,0), (0,3,3)> = Z/2 + Z/3 + Z
        let m = PresentedModule::new(3, vec![vec![(0, bi(2))], vec![(1, bi(3)), (2, bi(3))]]);
        assert_eq!(m.free_rank(), 1);
        let mut t = m.torsion();
        t.sort();
        assert_eq!(t, vec![bi(6)]);
    }

    #[test]
    fn unit_elimination_tracks_generators() {
        // x0 = x1 + x2, 2 x1 = 0
        let m = PresentedModule::new(3, vec![vec![(0, bi(1)), (1, bi(-1)), (2, bi(-1))], vec![(1, bi(2))]]);
        let n = m.normalized();
        assert_eq!(n.free_rank(), 1);
        assert_eq!(n.torsion(), vec![bi(2)]);
        // x0 - x1 - x2 is zero in the module
        let y = n.coords(&vec![(0, bi(1)), (1, bi(-1)), (2, bi(-1))]);
        assert!(n.is_zero_element(&y));
        // lifting normalized generators and mapping back is the identity
        for i in 0..n.orders.len() {
            let mut e = vec![BigInt::zero(); n.orders.len()];
            e[i] = bi(1);
            assert_eq!(n.coords(&n.lift(&e)), e);
        }
    }

    #[test]
    fn map_kernels() {
        // zero map on Z^2
        let z2 = PresentedModule::free(2);
        let k = presented_map_kernel(&z2, &z2, &[vec![], vec![]]).unwrap();
        assert_eq!(k.module.free_rank(), 2);
        // identity
        let k = presented_map_kernel(&z2, &z2, &[vec![(0, bi(1))], vec![(1, bi(1))]]).unwrap();
        assert_eq!(k.module.generator_count(), 0);
        // multiplication by 2 on Z
        let z = PresentedModule::free(1);
        let k = presented_map_kernel(&z, &z, &[vec![(0, bi(2))]]).unwrap();
        assert_eq!(k.module.generator_count(), 0);
        let coker = PresentedModule::new(1, vec![vec![(0, bi(2))]]);
        assert_eq!(coker.torsion(), vec![bi(2)]);
        // Z -> Z/2 reduction has kernel 2Z
        let k = presented_map_kernel(&z, &coker, &[vec![(0, bi(1))]]).unwrap();
        assert_eq!(k.module.free_rank(), 1);
        assert!(k.coordinates(&z, &vec![(0, bi(1))]).is_none());
        assert!(k.coordinates(&z, &vec![(0, bi(2))]).is_some());
        // Z/2 -> Z is ill-defined unless zero
        assert!(matches!(presented_map_kernel(&coker, &z, &[vec![(0, bi(1))]]), Err(Error::IllDefinedMap(_))));
        // Z/4 -> Z/2 reduction: kernel is 2Z/4Z
        let z4 = PresentedModule::new(1, vec![vec![(0, bi(4))]]);
        let k = presented_map_kernel(&z4, &coker, &[vec![(0, bi(1))]]).unwrap();
        assert_eq!(k.module.order(), Some(bi(2)));
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::from_generators(2, &[vec![bi(2), bi(0)], vec![bi(1), bi(1)]]);
        assert_eq!(l.rank(), 2);
        assert!(l.coordinates(&[bi(3), bi(1)]).is_some());
        assert!(l.coordinates(&[bi(1), bi(0)]).is_none());
        let c = l.coordinates(&[bi(3), bi(1)]).unwrap();
        assert_eq!(l.combine(&c), vec![bi(3), bi(1)]);
    }

    #[test]
    fn json_roundtrip() {
        let a = IntMatrix::from_i64(&[&[1, -2], &[3, 40000000000000]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1","-2"],["3","40000000000000"]]"#);
        let b: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
