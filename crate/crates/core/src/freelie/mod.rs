//! Free Lie algebras on `n` generators in the Lyndon basis, bracket maps,
//! and the kernels `D_k = ker(H ⊗ 𝔏_{k+1} → 𝔏_{k+2})`.

pub mod quasi;
pub mod sequences;

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{integer_kernel, IntMatrix, Lattice};
use crate::memo::Memo;

/// Binary bracket tree; leaves are generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LieTree {
    Leaf(u8),
    Node(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn leaf(i: usize) -> Self {
        LieTree::Leaf(i as u8)
    }

    pub fn node(a: LieTree, b: LieTree) -> Self {
        LieTree::Node(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            LieTree::Leaf(_) => 1,
            LieTree::Node(a, b) => a.degree() + b.degree(),
        }
    }

    pub fn leaves(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u8>) {
        match self {
            LieTree::Leaf(i) => out.push(*i),
            LieTree::Node(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn map_leaves(&self, f: &impl Fn(u8) -> u8) -> LieTree {
        match self {
            LieTree::Leaf(i) => LieTree::Leaf(f(*i)),
            LieTree::Node(a, b) => LieTree::node(a.map_leaves(f), b.map_leaves(f)),
        }
    }

    /// Bracket notation with the given generator names, e.g. `[a1,[a1,b1]]`.
    pub fn render(&self, names: &[String]) -> String {
        match self {
            LieTree::Leaf(i) => names[*i as usize].clone(),
            LieTree::Node(a, b) => format!("[{},{}]", a.render(names), b.render(names)),
        }
    }

    /// Parses bracket notation over the given generator names.
    pub fn parse(text: &str, names: &[String]) -> Result<LieTree> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (t, rest) = parse_tree(&s, names)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing input `{rest}`")));
        }
        Ok(t)
    }
}

fn parse_tree<'a>(s: &'a str, names: &[String]) -> Result<(LieTree, &'a str)> {
    if let Some(rest) = s.strip_prefix('[') {
        let (a, rest) = parse_tree(rest, names)?;
        let rest = rest.strip_prefix(',').ok_or_else(|| Error::Parse("expected `,`".into()))?;
        let (b, rest) = parse_tree(rest, names)?;
        let rest = rest.strip_prefix(']').ok_or_else(|| Error::Parse("expected `]`".into()))?;
        return Ok((LieTree::node(a, b), rest));
    }
    let end = s.find([',', ']', '[']).unwrap_or(s.len());
    let tok = &s[..end];
    let i = names.iter().position(|n| n == tok).ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?;
    Ok((LieTree::leaf(i), &s[end..]))
}

impl PartialOrd for LieTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then leaves before nodes, then left child, then right child.
impl Ord for LieTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (LieTree::Leaf(a), LieTree::Leaf(b)) => a.cmp(b),
            (LieTree::Node(a1, b1), LieTree::Node(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (LieTree::Leaf(_), LieTree::Node(..)) => Ordering::Less,
            (LieTree::Node(..), LieTree::Leaf(_)) => Ordering::Greater,
        })
    }
}

/// Generator names `x1..xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Split point of the standard factorization `w = uv`, `v` the longest
/// proper Lyndon suffix.
pub fn standard_split(w: &[u8]) -> usize {
    (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("words of length ≥ 2 have a Lyndon suffix")
}

/// Standard bracketing of a Lyndon word.
pub fn lyndon_tree(w: &[u8]) -> LieTree {
    if w.len() == 1 {
        return LieTree::Leaf(w[0]);
    }
    let s = standard_split(w);
    LieTree::node(lyndon_tree(&w[..s]), lyndon_tree(&w[s..]))
}

fn mobius(mut n: usize) -> i64 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// Dimension of the degree-`k` part of the free Lie algebra on `n` generators.
pub fn witt(n: usize, k: usize) -> usize {
    let mut s: i128 = 0;
    for d in 1..=k {
        if k % d == 0 {
            s += mobius(d) as i128 * (n as i128).pow((k / d) as u32);
        }
    }
    (s / k as i128) as usize
}

#[derive(Debug)]
pub struct LyndonBasis {
    pub n: usize,
    pub k: usize,
    pub words: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl LyndonBasis {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn trees(&self) -> Vec<LieTree> {
        self.words.iter().map(|w| lyndon_tree(w)).collect()
    }
}

fn generate_lyndon(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == k {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < k {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(n as u8 - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

static BASES: Memo<(usize, usize), LyndonBasis> = Memo::new();

/// Lyndon words of length `k` on `n` letters in lexicographic order.
pub fn lyndon_basis(n: usize, k: usize) -> Arc<LyndonBasis> {
    BASES.get_or_insert_with(&(n, k), || {
        let words = generate_lyndon(n, k);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        LyndonBasis { n, k, words, index }
    })
}

/// Sparse Lie element keyed by Lyndon word.
pub type LieSparse = BTreeMap<Vec<u8>, BigInt>;

fn add_scaled(acc: &mut LieSparse, c: &BigInt, x: &LieSparse) {
    for (w, v) in x {
        let e = acc.entry(w.clone()).or_default();
        *e += c * v;
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

thread_local! {
    static BRACKETS: RefCell<HashMap<(Vec<u8>, Vec<u8>), Rc<LieSparse>>> = RefCell::new(HashMap::new());
}

/// `[P(u), P(v)]` in the Lyndon basis.
pub fn bracket_lyndon(u: &[u8], v: &[u8]) -> Rc<LieSparse> {
    let key = (u.to_vec(), v.to_vec());
    if let Some(r) = BRACKETS.with(|c| c.borrow().get(&key).cloned()) {
        return r;
    }
    let r = Rc::new(compute_bracket(u, v));
    BRACKETS.with(|c| c.borrow_mut().insert(key, r.clone()));
    r
}

fn compute_bracket(u: &[u8], v: &[u8]) -> LieSparse {
    match u.cmp(v) {
        Ordering::Equal => LieSparse::new(),
        Ordering::Greater => bracket_lyndon(v, u).iter().map(|(w, c)| (w.clone(), -c)).collect(),
        Ordering::Less => {
            if u.len() == 1 || &u[standard_split(u)..] >= v {
                let mut uv = u.to_vec();
                uv.extend_from_slice(v);
                return LieSparse::from([(uv, BigInt::one())]);
            }
            // [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
            let s = standard_split(u);
            let (u1, u2) = (&u[..s], &u[s..]);
            let mut out = LieSparse::new();
            for (w, c) in bracket_lyndon(u2, v).iter() {
                add_scaled(&mut out, c, &bracket_lyndon(u1, w));
            }
            for (w, c) in bracket_lyndon(u1, v).iter() {
                add_scaled(&mut out, &-c, &bracket_lyndon(u2, w));
            }
            out
        }
    }
}

pub fn bracket_sparse(x: &LieSparse, y: &LieSparse) -> LieSparse {
    let mut out = LieSparse::new();
    for (u, a) in x {
        for (v, b) in y {
            add_scaled(&mut out, &(a * b), &bracket_lyndon(u, v));
        }
    }
    out
}

/// Expansion of a bracket tree in the Lyndon basis, keyed by word.
pub fn normalize_sparse(t: &LieTree) -> LieSparse {
    match t {
        LieTree::Leaf(i) => LieSparse::from([(vec![*i], BigInt::one())]),
        LieTree::Node(a, b) => bracket_sparse(&normalize_sparse(a), &normalize_sparse(b)),
    }
}

/// Element of `𝔏_k` on `n` generators as a coefficient vector over the
/// Lyndon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieElement {
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<BigInt>,
}

impl LieElement {
    pub fn zero(n: usize, degree: usize) -> Self {
        LieElement { n, degree, coeffs: vec![BigInt::zero(); lyndon_basis(n, degree).len()] }
    }

    pub fn from_sparse(n: usize, degree: usize, x: &LieSparse) -> Self {
        let basis = lyndon_basis(n, degree);
        let mut e = Self::zero(n, degree);
        for (w, c) in x {
            e.coeffs[basis.index_of(w).expect("Lyndon word of the right degree")] += c;
        }
        e
    }

    pub fn to_sparse(&self) -> LieSparse {
        let basis = lyndon_basis(self.n, self.degree);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (basis.words[i].clone(), c.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        assert_eq!((self.n, self.degree), (other.n, other.degree), "Lie element shapes");
        LieElement {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LieElement {
        LieElement { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .to_sparse()
            .iter()
            .map(|(w, c)| {
                let word: String = w.iter().map(|&i| names[i as usize].as_str()).collect();
                serde_json::json!({"word": word, "coeff": c.to_string()})
            })
            .collect();
        serde_json::json!({"n": self.n, "degree": self.degree, "basis": "lyndon", "terms": terms})
    }
}

/// Splits a concatenated word like `a1b12x3` into generator indices.
pub fn parse_word_tokens(text: &str, names: &[String]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < chars.len() {
        let mut j = i + 1;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        let tok: String = chars[i..j].iter().collect();
        let k = names.iter().position(|n| *n == tok).ok_or_else(|| Error::UnknownGenerator(tok.clone()))?;
        out.push(k as u8);
        i = j;
    }
    Ok(out)
}

pub fn normalize_bracket(t: &LieTree, n: usize) -> LieElement {
    LieElement::from_sparse(n, t.degree(), &normalize_sparse(t))
}

/// Tensor-algebra expansion `[A,B] = AB − BA`, keyed by word.
pub fn tensor_of_tree(t: &LieTree) -> BTreeMap<Vec<u8>, BigInt> {
    match t {
        LieTree::Leaf(i) => BTreeMap::from([(vec![*i], BigInt::one())]),
        LieTree::Node(a, b) => {
            let (ta, tb) = (tensor_of_tree(a), tensor_of_tree(b));
            let mut out: BTreeMap<Vec<u8>, BigInt> = BTreeMap::new();
            for (x, cx) in &ta {
                for (y, cy) in &tb {
                    let mut xy = x.clone();
                    xy.extend_from_slice(y);
                    *out.entry(xy).or_default() += cx * cy;
                    let mut yx = y.clone();
                    yx.extend_from_slice(x);
                    *out.entry(yx).or_default() -= cx * cy;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
    }
}

/// Tensor image of a Lyndon-basis expansion.
pub fn tensor_of_sparse(x: &LieSparse) -> BTreeMap<Vec<u8>, BigInt> {
    let mut out: BTreeMap<Vec<u8>, BigInt> = BTreeMap::new();
    for (w, c) in x {
        for (m, d) in tensor_of_tree(&lyndon_tree(w)) {
            *out.entry(m).or_default() += c * d;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn word_index(n: usize, w: &[u8]) -> usize {
    w.iter().fold(0, |a, &i| a * n + i as usize)
}

fn index_word(n: usize, k: usize, mut idx: usize) -> Vec<u8> {
    let mut w = vec![0u8; k];
    for slot in w.iter_mut().rev() {
        *slot = (idx % n) as u8;
        idx /= n;
    }
    w
}

static LYNDON_TENSORS: Memo<(usize, usize), Vec<Vec<(usize, BigInt)>>> = Memo::new();

/// Dense-index tensor expansions of the standard bracketings.
fn lyndon_tensors(n: usize, k: usize) -> Arc<Vec<Vec<(usize, BigInt)>>> {
    LYNDON_TENSORS.get_or_insert_with(&(n, k), || {
        lyndon_basis(n, k)
            .words
            .iter()
            .map(|w| tensor_of_tree(&lyndon_tree(w)).into_iter().map(|(m, c)| (word_index(n, &m), c)).collect())
            .collect()
    })
}

/// Rewrites a homogeneous degree-`k` tensor (dense, base-`n` word order) in
/// the Lyndon basis, using that `P(w)` is `w` plus larger words.
pub fn lie_from_tensor(n: usize, k: usize, dense: &[BigInt]) -> Result<LieElement> {
    let basis = lyndon_basis(n, k);
    let tens = lyndon_tensors(n, k);
    let mut r = dense.to_vec();
    let mut coeffs = vec![BigInt::zero(); basis.len()];
    for idx in 0..r.len() {
        if r[idx].is_zero() {
            continue;
        }
        let w = index_word(n, k, idx);
        let b = basis.index_of(&w).ok_or_else(|| Error::NotALieElement(format!("leading word {w:?} is not Lyndon")))?;
        let c = r[idx].clone();
        for (j, x) in &tens[b] {
            r[*j] -= &c * x;
        }
        coeffs[b] = c;
    }
    Ok(LieElement { n, degree: k, coeffs })
}

static BRACKET_MAPS: Memo<(usize, usize), IntMatrix> = Memo::new();

/// Matrix of `H ⊗ 𝔏_{k+1} → 𝔏_{k+2}`; column `h·dim 𝔏_{k+1} + i` is the
/// bracket of generator `h` with the `i`-th Lyndon element.
pub fn bracket_map(n: usize, k: usize) -> Arc<IntMatrix> {
    BRACKET_MAPS.get_or_insert_with(&(n, k), || {
        let src = lyndon_basis(n, k + 1);
        let dst = lyndon_basis(n, k + 2);
        let mut m = IntMatrix::zeros(dst.len(), n * src.len());
        for h in 0..n {
            for (i, w) in src.words.iter().enumerate() {
                for (v, c) in bracket_lyndon(&[h as u8], w).iter() {
                    m.set(dst.index_of(v).expect("degree k+2"), h * src.len() + i, c.clone());
                }
            }
        }
        m
    })
}

/// `D_k(Z^n)` as a lattice inside `H ⊗ 𝔏_{k+1}`.
#[derive(Debug)]
pub struct DkModule {
    pub n: usize,
    pub k: usize,
    pub lattice: Lattice,
}

impl DkModule {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        self.lattice.basis()
    }

    /// Coordinates of an integral tensor, `None` if it is not in `D_k`.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.lattice.coordinates(x)
    }
}

static DK: Memo<(usize, usize), DkModule> = Memo::new();

/// Environment variable naming an optional on-disk cache for kernel bases.
pub const CACHE_ENV: &str = "JLCALC_CACHE_DIR";

fn cache_path(n: usize, k: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(format!("dk_n{n}_k{k}.json")))
}

fn load_cached(n: usize, k: usize, b: &IntMatrix) -> Option<Vec<Vec<BigInt>>> {
    let text = std::fs::read_to_string(cache_path(n, k)?).ok()?;
    let m: IntMatrix = serde_json::from_str(&text).ok()?;
    if m.rows() != b.cols() || m.cols() != b.cols() - b.rows() || !b.mul(&m).ok()?.is_zero() {
        return None;
    }
    Some(m.columns())
}

pub fn dk_basis(n: usize, k: usize) -> Arc<DkModule> {
    DK.get_or_insert_with(&(n, k), || {
        let b = bracket_map(n, k);
        let cols = load_cached(n, k, &b).unwrap_or_else(|| {
            let kernel = integer_kernel(&b);
            if let Some(p) = cache_path(n, k) {
                if let Ok(text) = serde_json::to_string(&kernel) {
                    let _ = std::fs::create_dir_all(p.parent().expect("file in a directory"));
                    let _ = std::fs::write(p, text);
                }
            }
            kernel.columns()
        });
        DkModule { n, k, lattice: Lattice::from_generators(b.cols(), &cols) }
    })
}

/// Element of `H ⊗ 𝔏_{k+1}(H)` with rational coefficients, `H = Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DkElement {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<BigRational>,
}

impl DkElement {
    pub fn zero(n: usize, k: usize) -> Self {
        DkElement { n, k, coeffs: vec![BigRational::zero(); n * witt(n, k + 1)] }
    }

    pub fn from_integers(n: usize, k: usize, v: &[BigInt]) -> Self {
        DkElement { n, k, coeffs: v.iter().map(|x| BigRational::from_integer(x.clone())).collect() }
    }

    /// Adds `c · (gen h) ⊗ x`.
    pub fn add_term(&mut self, h: usize, x: &LieElement, c: &BigRational) {
        let dim = x.coeffs.len();
        for (i, v) in x.coeffs.iter().enumerate() {
            if !v.is_zero() {
                self.coeffs[h * dim + i] += c * BigRational::from_integer(v.clone());
            }
        }
    }

    pub fn add(&self, o: &DkElement) -> DkElement {
        assert_eq!((self.n, self.k), (o.n, o.k), "tensor shapes");
        DkElement { n: self.n, k: self.k, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &DkElement) -> DkElement {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> DkElement {
        DkElement { n: self.n, k: self.k, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.is_integral().then(|| self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Image under the bracket `H ⊗ 𝔏_{k+1} → 𝔏_{k+2}`, rational coordinates.
    pub fn bracket(&self) -> Vec<BigRational> {
        let b = bracket_map(self.n, self.k);
        (0..b.rows())
            .map(|i| {
                let mut s = BigRational::zero();
                for (a, c) in b.row(i).iter().zip(&self.coeffs) {
                    if !a.is_zero() && !c.is_zero() {
                        s += c * BigRational::from_integer(a.clone());
                    }
                }
                s
            })
            .collect()
    }

    pub fn bracket_vanishes(&self) -> bool {
        self.bracket().iter().all(Zero::is_zero)
    }

    /// Nonzero terms `(generator, Lyndon word, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, Vec<u8>, BigRational)> {
        let basis = lyndon_basis(self.n, self.k + 1);
        let dim = basis.len();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| (idx / dim, basis.words[idx % dim].clone(), c.clone()))
            .collect()
    }

    /// Applies a linear substitution of generators, `subst[i]` being the
    /// image of generator `i` as `(generator, coefficient)` pairs in a rank
    /// `n_out` module.
    pub fn substitute(&self, n_out: usize, subst: &[Vec<(usize, BigInt)>]) -> DkElement {
        let mut out = DkElement::zero(n_out, self.k);
        for (h, w, c) in self.terms() {
            let tree = lyndon_tree(&w);
            let image = substitute_tree(&tree, subst);
            for (h2, c2) in &subst[h] {
                let coef = &c * BigRational::from_integer(c2.clone());
                let lie = LieElement::from_sparse(n_out, self.k + 1, &image);
                out.add_term(*h2, &lie, &coef);
            }
        }
        out
    }

    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .into_iter()
            .map(|(h, w, c)| {
                let word: String = w.iter().map(|&i| names[i as usize].as_str()).collect();
                serde_json::json!({"factor": names[h], "word": word, "coeff": c.to_string()})
            })
            .collect();
        serde_json::json!({"n": self.n, "degree": self.k, "basis": "lyndon", "terms": terms})
    }

    pub fn from_json(v: &serde_json::Value, names: &[String]) -> Result<DkElement> {
        let bad = |m: &str| Error::Parse(format!("tensor element: {m}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let k = v["degree"].as_u64().ok_or_else(|| bad("missing degree"))? as usize;
        if names.len() < n {
            return Err(bad("too few generator names"));
        }
        let names = &names[..n];
        let basis = lyndon_basis(n, k + 1);
        let mut out = DkElement::zero(n, k);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let f = t["factor"].as_str().ok_or_else(|| bad("missing factor"))?;
            let h = names.iter().position(|x| x == f).ok_or_else(|| Error::UnknownGenerator(f.into()))?;
            let w = parse_word_tokens(t["word"].as_str().ok_or_else(|| bad("missing word"))?, names)?;
            let c: BigRational = parse_rational(t["coeff"].as_str().ok_or_else(|| bad("missing coeff"))?)?;
            let i = basis.index_of(&w).ok_or_else(|| bad("word is not Lyndon of degree k+1"))?;
            out.coeffs[h * basis.len() + i] += c;
        }
        Ok(out)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (BigInt, BigInt) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Multilinear substitution of leaves, result in the Lyndon basis.
pub fn substitute_tree(t: &LieTree, subst: &[Vec<(usize, BigInt)>]) -> LieSparse {
    match t {
        LieTree::Leaf(i) => subst[*i as usize].iter().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (vec![*j as u8], c.clone())).collect(),
        LieTree::Node(a, b) => bracket_sparse(&substitute_tree(a, subst), &substitute_tree(b, subst)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_counts() {
        assert_eq!(lyndon_basis(2, 1).len(), 2);
        assert_eq!(lyndon_basis(2, 2).words, vec![vec![0, 1]]);
        assert_eq!(lyndon_basis(2, 3).words, vec![vec![0, 0, 1], vec![0, 1, 1]]);
        for n in 1..=4 {
            for k in 1..=6 {
                assert_eq!(lyndon_basis(n, k).len(), witt(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let x = |i| LieTree::leaf(i);
        assert!(normalize_bracket(&LieTree::node(x(0), x(0)), 2).is_zero());
        assert_eq!(normalize_bracket(&LieTree::node(x(0), x(1)), 2).coeffs, vec![BigInt::one()]);
        // [x2,[x1,x2]] = -[[x1,x2],x2] = -P(x1x2x2)
        let t = LieTree::node(x(1), LieTree::node(x(0), x(1)));
        let e = normalize_bracket(&t, 2);
        assert_eq!(e.coeffs, vec![BigInt::zero(), BigInt::from(-1)]);
        assert_eq!(tensor_of_sparse(&e.to_sparse()), tensor_of_tree(&t));
    }

    #[test]
    fn bracket_map_ranks() {
        assert_eq!(bracket_map(2, 1).rank(), 2);
        let b = bracket_map(4, 1);
        assert_eq!((b.rows(), b.cols(), b.rank()), (20, 24, 20));
        let b = bracket_map(2, 2);
        assert_eq!((b.rows(), b.cols(), b.rank()), (3, 4, 3));
    }

    #[test]
    fn dk_ranks() {
        assert_eq!(dk_basis(2, 1).rank(), 0);
        assert_eq!(dk_basis(4, 1).rank(), 4);
        assert_eq!(dk_basis(2, 2).rank(), 1);
    }

    #[test]
    fn tensor_solve_roundtrip() {
        let t = LieTree::node(LieTree::node(LieTree::leaf(0), LieTree::leaf(2)), LieTree::leaf(1));
        let tens = tensor_of_tree(&t);
        let mut dense = vec![BigInt::zero(); 27];
        for (w, c) in tens {
            dense[word_index(3, &w)] = c;
        }
        assert_eq!(lie_from_tensor(3, 3, &dense).unwrap(), normalize_bracket(&t, 3));
        dense[0] = BigInt::one();
        assert!(matches!(lie_from_tensor(3, 3, &dense), Err(Error::NotALieElement(_))));
    }

    #[test]
    fn tree_parse_render() {
        let names = default_names(3);
        let t = LieTree::parse("[x1, [x2,x3]]", &names).unwrap();
        assert_eq!(t.render(&names), "[x1,[x2,x3]]");
        assert!(LieTree::parse("[x1,x4]", &names).is_err());
        assert_eq!(parse_word_tokens("x1x12", &default_names(12)).unwrap(), vec![0, 11]);
    }
}
