//! Free quasi-Lie algebras: antisymmetry `[x,y] + [y,x] = 0` and Jacobi, but
//! no `[x,x] = 0`. Handled only through presentations, since the 2-torsion
//! rules out free bases.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::Result;
use crate::exactla::{presented_map_kernel, MapKernel, PresentedModule, SparseVec};
use crate::freelie::{lyndon_basis, normalize_bracket, LieTree};
use crate::memo::Memo;

/// Canonical representative of `±t` with children sorted at every node.
/// Returns the sign and whether some node has two equal children, in which
/// case `t = −t` and the sign carries no information.
pub fn qcanon(t: &LieTree) -> (LieTree, i32, bool) {
    match t {
        LieTree::Leaf(_) => (t.clone(), 1, false),
        LieTree::Node(a, b) => {
            let (a, sa, ta) = qcanon(a);
            let (b, sb, tb) = qcanon(b);
            let sign = sa * sb;
            match a.cmp(&b) {
                std::cmp::Ordering::Less => (LieTree::node(a, b), sign, ta || tb),
                std::cmp::Ordering::Greater => (LieTree::node(b, a), -sign, ta || tb),
                std::cmp::Ordering::Equal => (LieTree::node(a, b), sign, true),
            }
        }
    }
}

#[derive(Debug)]
pub struct QuasiLie {
    pub n: usize,
    pub k: usize,
    /// Canonical trees of degree `k`, one generator each.
    pub gens: Vec<LieTree>,
    index: HashMap<LieTree, usize>,
    pub module: PresentedModule,
}

impl QuasiLie {
    /// Generator index and sign of an arbitrary degree-`k` tree.
    pub fn element(&self, t: &LieTree) -> (usize, i32) {
        let (c, s, _) = qcanon(t);
        (self.index[&c], s)
    }

    pub fn free_rank(&self) -> usize {
        self.module.free_rank()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.module.torsion()
    }
}

fn canonical_trees(n: usize, k: usize, memo: &mut HashMap<usize, Vec<LieTree>>) -> Vec<LieTree> {
    if let Some(v) = memo.get(&k) {
        return v.clone();
    }
    let mut out = Vec::new();
    if k == 1 {
        out = (0..n).map(LieTree::leaf).collect();
    } else {
        for a in 1..=k / 2 {
            let left = canonical_trees(n, a, memo);
            let right = canonical_trees(n, k - a, memo);
            for (i, x) in left.iter().enumerate() {
                let start = if a == k - a { i } else { 0 };
                for y in &right[start..] {
                    out.push(LieTree::node(x.clone(), y.clone()));
                }
            }
        }
    }
    memo.insert(k, out.clone());
    out
}

/// Three-term Jacobi relations at every node with an internal child, each
/// placed back into the surrounding tree.
pub fn jacobi_instances(t: &LieTree) -> Vec<[(LieTree, i32); 3]> {
    let LieTree::Node(l, r) = t else { return Vec::new() };
    let mut out = Vec::new();
    if let LieTree::Node(b, c) = r.as_ref() {
        // [L,[B,C]] - [[L,B],C] - [B,[L,C]]
        out.push([
            (t.clone(), 1),
            (LieTree::node(LieTree::node((**l).clone(), (**b).clone()), (**c).clone()), -1),
            (LieTree::node((**b).clone(), LieTree::node((**l).clone(), (**c).clone())), -1),
        ]);
    }
    if let LieTree::Node(a, b) = l.as_ref() {
        // [[A,B],R] - [A,[B,R]] - [[A,R],B]
        out.push([
            (t.clone(), 1),
            (LieTree::node((**a).clone(), LieTree::node((**b).clone(), (**r).clone())), -1),
            (LieTree::node(LieTree::node((**a).clone(), (**r).clone()), (**b).clone()), -1),
        ]);
    }
    for rel in jacobi_instances(l) {
        out.push(rel.map(|(x, s)| (LieTree::node(x, (**r).clone()), s)));
    }
    for rel in jacobi_instances(r) {
        out.push(rel.map(|(x, s)| (LieTree::node((**l).clone(), x), s)));
    }
    out
}

static QUASI: Memo<(usize, usize), QuasiLie> = Memo::new();

/// Presentation of `𝔏^q_k(Z^n)`.
pub fn quasi_lie(n: usize, k: usize) -> Arc<QuasiLie> {
    QUASI.get_or_insert_with(&(n, k), || {
        let gens = canonical_trees(n, k, &mut HashMap::new());
        let index: HashMap<LieTree, usize> = gens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut rels: Vec<SparseVec> = Vec::new();
        for (i, t) in gens.iter().enumerate() {
            if qcanon(t).2 {
                rels.push(vec![(i, BigInt::from(2))]);
            }
            for rel in jacobi_instances(t) {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for (x, s) in rel {
                    let (c, sx, _) = qcanon(&x);
                    *acc.entry(index[&c]).or_default() += (s * sx) as i64;
                }
                let mut v: SparseVec =
                    acc.into_iter().filter(|(_, c)| *c != 0).map(|(g, c)| (g, BigInt::from(c))).collect();
                v.sort_by_key(|(g, _)| *g);
                rels.push(v);
            }
        }
        rels.sort();
        rels.dedup();
        let module = PresentedModule::new(gens.len(), rels);
        QuasiLie { n, k, gens, index, module }
    })
}

/// `D^q_k = ker(H ⊗ 𝔏^q_{k+1} → 𝔏^q_{k+2})` with the source presentation.
#[derive(Debug)]
pub struct QuasiDk {
    pub n: usize,
    pub k: usize,
    /// `H ⊗ 𝔏^q_{k+1}`; generator `h·m + i` is `x_h ⊗ gens[i]`.
    pub source: PresentedModule,
    pub kernel: MapKernel,
}

impl QuasiDk {
    pub fn module(&self) -> &PresentedModule {
        &self.kernel.module
    }

    /// Source generator index of `x_h ⊗ t`, with sign.
    pub fn source_element(&self, h: usize, t: &LieTree) -> (usize, i32) {
        let q = quasi_lie(self.n, self.k + 1);
        let (i, s) = q.element(t);
        (h * q.gens.len() + i, s)
    }

    /// Image of a source element under the canonical map to `H ⊗ 𝔏_{k+1}`.
    pub fn canonical_image(&self, x: &SparseVec) -> Vec<BigInt> {
        let q = quasi_lie(self.n, self.k + 1);
        let m = q.gens.len();
        let dim = lyndon_basis(self.n, self.k + 1).len();
        let mut out = vec![BigInt::default(); self.n * dim];
        for (g, c) in x {
            let (h, i) = (g / m, g % m);
            let e = normalize_bracket(&q.gens[i], self.n);
            for (j, v) in e.coeffs.iter().enumerate() {
                out[h * dim + j] += c * v;
            }
        }
        out
    }
}

static QUASI_DK: Memo<(usize, usize), QuasiDk> = Memo::new();

pub fn quasi_dk(n: usize, k: usize) -> Arc<QuasiDk> {
    QUASI_DK.get_or_insert_with(&(n, k), || build_quasi_dk(n, k).expect("bracket respects the quasi-Lie relations"))
}

fn build_quasi_dk(n: usize, k: usize) -> Result<QuasiDk> {
    let src = quasi_lie(n, k + 1);
    let dst = quasi_lie(n, k + 2);
    let copies: Vec<&PresentedModule> = (0..n).map(|_| &src.module).collect();
    let source = PresentedModule::direct_sum(&copies);
    let mut images = Vec::with_capacity(n * src.gens.len());
    for h in 0..n {
        for t in &src.gens {
            let (j, s) = dst.element(&LieTree::node(LieTree::leaf(h), t.clone()));
            images.push(vec![(j, BigInt::from(s))]);
        }
    }
    let kernel = presented_map_kernel(&source, &dst.module, &images)?;
    Ok(QuasiDk { n, k, source, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_is_free() {
        let q = quasi_lie(3, 1);
        assert_eq!(q.free_rank(), 3);
        assert!(q.torsion().is_empty());
    }

    #[test]
    fn degree_two() {
        let q = quasi_lie(2, 2);
        assert_eq!(q.free_rank(), 1);
        assert_eq!(q.torsion(), vec![BigInt::from(2); 2]);
        let q = quasi_lie(3, 2);
        assert_eq!(q.free_rank(), 3);
        assert_eq!(q.torsion(), vec![BigInt::from(2); 3]);
    }

    #[test]
    fn odd_degree_matches_lie() {
        let q = quasi_lie(2, 3);
        assert_eq!(q.free_rank(), 2);
        assert!(q.torsion().is_empty());
    }

    #[test]
    fn canon_signs() {
        let t = LieTree::node(LieTree::leaf(1), LieTree::leaf(0));
        let (c, s, amb) = qcanon(&t);
        assert_eq!(c, LieTree::node(LieTree::leaf(0), LieTree::leaf(1)));
        assert_eq!((s, amb), (-1, false));
        assert!(qcanon(&LieTree::node(LieTree::leaf(0), LieTree::leaf(0))).2);
    }
}
