//! Tree-like Jacobi diagrams modulo AS, IHX and multilinearity, and the maps
//! `η` into `D_k` and `D^q_k`.

mod graph;
pub mod json;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{presented_map_kernel, rational_rank_q, solve_rational, PresentedModule, SparseVec};
use crate::freelie::quasi::{jacobi_instances, quasi_dk, quasi_lie};
use crate::freelie::{dk_basis, lyndon_basis, normalize_bracket, DkElement, LieTree};
use crate::johnson::iota_star_dk;
use crate::memo::Memo;

pub use graph::{Color, Dart, Diagram, Vertex};

/// A formal rational combination of diagrams.
pub type Combination = Vec<(Diagram, BigRational)>;

/// `𝒯_k(C)` for colors `0..n`, presented over the integers. Generators are
/// canonical diagrams; relations are IHX plus `2T = 0` for self-negative `T`.
#[derive(Debug)]
pub struct TreeSpace {
    pub n: usize,
    pub k: usize,
    pub gens: Vec<Diagram>,
    index: HashMap<Diagram, usize>,
    pub module: PresentedModule,
    /// Normalized coordinates that are free; these index the rational basis.
    free: Vec<usize>,
}

impl TreeSpace {
    /// Generator index and sign of a tree of the right degree, or `None` if
    /// it equals its own negative.
    pub fn element(&self, d: &Diagram) -> Result<Option<(usize, i32)>> {
        let (c, s, amb) = d.canonical();
        let i = *self
            .index
            .get(&c)
            .ok_or_else(|| Error::DegreeMismatch(format!("not a tree of i-degree {} on {} colors", self.k, self.n)))?;
        Ok((!amb).then_some((i, s)))
    }

    /// Dimension of `𝒯_k(C) ⊗ Q`.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Diagrams representing the rational basis.
    pub fn basis(&self) -> Vec<Combination> {
        let nz = self.module.normalized();
        self.free
            .iter()
            .map(|&f| nz.from_norm[f].iter().map(|(g, c)| (self.gens[*g].clone(), BigRational::from_integer(c.clone()))).collect())
            .collect()
    }

    /// Rational coordinates of a combination of trees of this degree.
    pub fn normal_form(&self, raw: &Combination) -> Result<DiagramVector> {
        let mut acc: HashMap<usize, BigRational> = HashMap::new();
        for (d, c) in raw {
            if d.ideg() != self.k || !d.is_connected_tree() {
                return Err(Error::DegreeMismatch(format!("expected a tree of i-degree {}, found i-degree {}", self.k, d.ideg())));
            }
            if let Some((i, s)) = self.element(d)? {
                *acc.entry(i).or_insert_with(BigRational::zero) += c * BigRational::from_integer(s.into());
            }
        }
        let denom = acc.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: SparseVec = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, (c * BigRational::from_integer(denom.clone())).to_integer()))
            .collect();
        let y = self.module.normalized().coords(&ints);
        let coeffs = self.free.iter().map(|&f| BigRational::new(y[f].clone(), denom.clone())).collect();
        Ok(DiagramVector { n: self.n, k: self.k, coeffs })
    }

    /// `η` on the rational basis, as columns in `H ⊗ 𝔏_{k+1}`.
    fn eta_columns(&self) -> Vec<Vec<BigRational>> {
        self.basis().iter().map(|b| eta(self.n, self.k, b).coeffs).collect()
    }
}

static TREES: Memo<(usize, usize), TreeSpace> = Memo::new();

/// Presentation of `𝒯_k` on `n` colors.
pub fn tree_space(n: usize, k: usize) -> Arc<TreeSpace> {
    TREES.get_or_insert_with(&(n, k), || build_tree_space(n, k))
}

fn build_tree_space(n: usize, k: usize) -> TreeSpace {
    let shapes = quasi_lie(n, k + 1);
    let mut gens = Vec::new();
    let mut index = HashMap::new();
    let mut self_negative = Vec::new();
    for root in 0..n {
        for t in &shapes.gens {
            let (c, _, amb) = Diagram::from_rooted(root as Color, t).canonical();
            if !index.contains_key(&c) {
                index.insert(c.clone(), gens.len());
                gens.push(c);
                self_negative.push(amb);
            }
        }
    }
    let mut rels: Vec<SparseVec> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if self_negative[i] {
            rels.push(vec![(i, BigInt::from(2))]);
        }
        let Vertex::Leg(root) = g.verts[0] else { unreachable!("canonical trees start at a leg") };
        let t = g.rooted_at(0).expect("trees of positive i-degree");
        for rel in jacobi_instances(&t) {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for (x, s) in rel {
                let (c, sx, _) = Diagram::from_rooted(root, &x).canonical();
                *acc.entry(index[&c]).or_default() += (s * sx) as i64;
            }
            let mut v: SparseVec = acc.into_iter().filter(|(_, c)| *c != 0).map(|(g, c)| (g, BigInt::from(c))).collect();
            v.sort();
            rels.push(v);
        }
    }
    rels.sort();
    rels.dedup();
    let module = PresentedModule::new(gens.len(), rels);
    let free = module.normalized().orders.iter().enumerate().filter(|(_, d)| d.is_zero()).map(|(i, _)| i).collect();
    TreeSpace { n, k, gens, index, module, free }
}

/// Element of `𝒯_k ⊗ Q` in the coordinates of [`TreeSpace::basis`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramVector {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<BigRational>,
}

impl DiagramVector {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Expands back into a combination of diagrams.
    pub fn to_combination(&self) -> Combination {
        let space = tree_space(self.n, self.k);
        let mut out = Combination::new();
        for (c, b) in self.coeffs.iter().zip(space.basis()) {
            if !c.is_zero() {
                out.extend(b.into_iter().map(|(d, x)| (d, x * c)));
            }
        }
        out
    }
}

/// Normal form of a combination of trees of i-degree `k` on colors `0..n`.
pub fn normal_form(n: usize, k: usize, raw: &Combination) -> Result<DiagramVector> {
    tree_space(n, k).normal_form(raw)
}

/// `η(T) = Σ_v color(v) ⊗ (T rooted at v)` on a single tree.
pub fn eta_tree(n: usize, t: &Diagram) -> DkElement {
    let k = t.ideg();
    let mut out = DkElement::zero(n, k);
    let one = BigRational::one();
    for (v, c) in t.legs() {
        let r = t.rooted_at(v).expect("tree of positive i-degree");
        out.add_term(c as usize, &normalize_bracket(&r, n), &one);
    }
    out
}

pub fn eta(n: usize, k: usize, x: &Combination) -> DkElement {
    let mut out = DkElement::zero(n, k);
    for (d, c) in x {
        out = out.add(&eta_tree(n, d).scale(c));
    }
    out
}

/// `η^q` of a tree, in the generators of `H ⊗ 𝔏^q_{k+1}`.
pub fn eta_q_tree(n: usize, t: &Diagram) -> SparseVec {
    let q = quasi_dk(n, t.ideg());
    let mut acc: HashMap<usize, BigInt> = HashMap::new();
    for (v, c) in t.legs() {
        let r = t.rooted_at(v).expect("tree of positive i-degree");
        let (i, s) = q.source_element(c as usize, &r);
        *acc.entry(i).or_default() += s;
    }
    let mut out: SparseVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort();
    out
}

/// Solves `η(v) = x` in `𝒯_k ⊗ Q`.
pub fn eta_inverse(x: &DkElement) -> Result<DiagramVector> {
    if !x.bracket_vanishes() {
        return Err(Error::NotInImage("the bracket of the tensor is nonzero".into()));
    }
    let space = tree_space(x.n, x.k);
    let coeffs = solve_rational(&space.eta_columns(), &x.coeffs)
        .ok_or_else(|| Error::NotInImage("tensor is outside the image of the tree space".into()))?;
    Ok(DiagramVector { n: x.n, k: x.k, coeffs })
}

/// Rooted planar tree of a bracket expression.
pub fn tr(u: &LieTree) -> LieTree {
    u.clone()
}

/// Joins the roots of two rooted trees by an edge. A root that is a bracket
/// becomes a trivalent vertex whose slots are the new edge and the two
/// subtrees in order.
pub fn odot(s: &LieTree, t: &LieTree) -> Diagram {
    let mut d = Diagram::empty();
    let ends: Vec<Dart> = [s, t]
        .iter()
        .map(|x| match x {
            LieTree::Leaf(c) => Dart::new(d.add_leg(*c as Color), 0),
            LieTree::Node(a, b) => {
                let v = d.add_tri();
                d.attach(Dart::new(v, 1), a);
                d.attach(Dart::new(v, 2), b);
                Dart::new(v, 0)
            }
        })
        .collect();
    d.connect(ends[0], ends[1]);
    d
}

/// `½ η(tr(u) ⊙ tr(u))`.
pub fn half_square(n: usize, u: &LieTree) -> DkElement {
    let d = odot(u, u);
    eta_tree(n, &d).scale(&BigRational::new(1.into(), 2.into()))
}

/// Outcome of comparing the proposed kernel generators with the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGenerators {
    pub candidates: Vec<DkElement>,
    pub span_rank: usize,
    pub kernel_rank: usize,
    pub all_in_kernel: bool,
}

impl KernelGenerators {
    pub fn spans(&self) -> bool {
        self.all_in_kernel && self.span_rank == self.kernel_rank
    }
}

/// Checks that trees with an `a` colored leg, together with the halves of
/// `tr(u) ⊙ tr(u)` for `u` involving some `a` (even `k`), span the kernel
/// of `ι_*` on `D_k(H) ⊗ Q`.
pub fn ker_iota_generators(g: usize, k: usize) -> KernelGenerators {
    let n = 2 * g;
    let space = tree_space(n, k);
    let mut candidates: Vec<DkElement> = space
        .gens
        .iter()
        .filter(|d| d.legs().any(|(_, c)| (c as usize) < g))
        .map(|d| eta_tree(n, d))
        .collect();
    if k % 2 == 0 {
        let half = lyndon_basis(n, k / 2 + 1);
        for (w, t) in half.words.iter().zip(half.trees()) {
            if w.iter().any(|&c| (c as usize) < g) {
                candidates.push(half_square(n, &t));
            }
        }
    }
    let all_in_kernel = candidates.iter().all(|c| c.bracket_vanishes() && iota_star_dk(c).expect("even rank").is_zero());
    let span_rank = rational_rank_q(&candidates.iter().map(|c| c.coeffs.clone()).collect::<Vec<_>>());
    let dk = dk_basis(n, k);
    let images: Vec<Vec<BigRational>> =
        dk.basis().iter().map(|b| iota_star_dk(&DkElement::from_integers(n, k, b)).expect("even rank").coeffs).collect();
    let kernel_rank = dk.rank() - rational_rank_q(&images);
    KernelGenerators { candidates, span_rank, kernel_rank, all_in_kernel }
}

/// Report for the rational isomorphism `η: 𝒯_k ⊗ Q → D_k ⊗ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaCheck {
    pub tree_dim: usize,
    pub dk_rank: usize,
    pub image_rank: usize,
    pub lands_in_dk: bool,
    pub round_trips: bool,
}

impl EtaCheck {
    pub fn holds(&self) -> bool {
        self.tree_dim == self.dk_rank && self.image_rank == self.dk_rank && self.lands_in_dk && self.round_trips
    }
}

pub fn check_eta(n: usize, k: usize) -> Result<EtaCheck> {
    let space = tree_space(n, k);
    let dk = dk_basis(n, k);
    let lands_in_dk = space.gens.iter().all(|d| {
        let e = eta_tree(n, d);
        e.bracket_vanishes() && e.to_integers().and_then(|v| dk.coordinates(&v)).is_some()
    });
    let cols = space.eta_columns();
    let image_rank = rational_rank_q(&cols);
    let mut round_trips = true;
    for (i, b) in space.basis().iter().enumerate() {
        let back = eta_inverse(&eta(n, k, b))?;
        round_trips &= back.coeffs.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() });
    }
    for v in dk.basis() {
        let x = DkElement::from_integers(n, k, v);
        round_trips &= eta(n, k, &eta_inverse(&x)?.to_combination()) == x;
    }
    Ok(EtaCheck { tree_dim: space.dim(), dk_rank: dk.rank(), image_rank, lands_in_dk, round_trips })
}

/// Invariant factors of `ker(η^q_k)` over the integers; empty means injective.
/// The kernel is returned as `(free rank, torsion orders)`.
pub fn eta_q_kernel(n: usize, k: usize) -> Result<(usize, Vec<BigInt>)> {
    let space = tree_space(n, k);
    let q = quasi_dk(n, k);
    let images: Vec<SparseVec> = space
        .gens
        .iter()
        .map(|d| {
            let y = q
                .kernel
                .coordinates(&q.source, &eta_q_tree(n, d))
                .ok_or_else(|| Error::NotInImage("η^q of a tree lies outside D^q".into()))?;
            Ok(crate::exactla::sparse_from_dense(&y))
        })
        .collect::<Result<_>>()?;
    let ker = presented_map_kernel(&space.module, q.module(), &images)?;
    Ok((ker.module.free_rank(), ker.module.torsion()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(i: usize) -> LieTree {
        LieTree::leaf(i)
    }

    #[test]
    fn y_graph_dimensions() {
        assert_eq!(tree_space(3, 1).dim(), 1);
        assert_eq!(tree_space(2, 1).dim(), 0);
        assert_eq!(tree_space(1, 1).dim(), 0);
    }

    #[test]
    fn normal_forms() {
        let one = BigRational::one();
        assert!(normal_form(2, 1, &vec![(Diagram::y(0, 0, 1), one.clone())]).unwrap().is_zero());
        let y = normal_form(3, 1, &vec![(Diagram::y(0, 1, 2), one.clone())]).unwrap();
        assert!(!y.is_zero());
        let y2 = normal_form(3, 1, &vec![(Diagram::y(1, 0, 2), one.clone())]).unwrap();
        assert_eq!(y2.coeffs[0], -y.coeffs[0].clone());
        // IHX on an H-shaped tree
        let t = LieTree::node(leaf(1), LieTree::node(leaf(2), leaf(3)));
        let rel: Combination = jacobi_instances(&t)[0]
            .iter()
            .map(|(x, s)| (Diagram::from_rooted(0, x), BigRational::from_integer((*s).into())))
            .collect();
        assert!(normal_form(4, 2, &rel).unwrap().is_zero());
        assert!(matches!(normal_form(3, 2, &vec![(Diagram::y(0, 1, 2), one)]), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn eta_of_y() {
        let e = eta_tree(3, &Diagram::y(0, 1, 2));
        let mut expect = DkElement::zero(3, 1);
        let one = BigRational::one();
        expect.add_term(0, &normalize_bracket(&LieTree::node(leaf(1), leaf(2)), 3), &one);
        expect.add_term(1, &normalize_bracket(&LieTree::node(leaf(2), leaf(0)), 3), &one);
        expect.add_term(2, &normalize_bracket(&LieTree::node(leaf(0), leaf(1)), 3), &one);
        assert_eq!(e, expect);
        assert!(e.bracket_vanishes());
        let back = eta_inverse(&e).unwrap();
        assert_eq!(eta(3, 1, &back.to_combination()), e);
        let mut bad = DkElement::zero(2, 1);
        bad.add_term(0, &normalize_bracket(&LieTree::node(leaf(0), leaf(1)), 2), &one);
        assert!(matches!(eta_inverse(&bad), Err(Error::NotInImage(_))));
    }

    #[test]
    fn half_squares_are_integral() {
        let u = LieTree::node(leaf(0), leaf(1));
        let d = odot(&u, &u);
        assert_eq!(d.ideg(), 2);
        assert_eq!(d.leg_count(), 4);
        let h = half_square(2, &u);
        assert!(h.is_integral() && h.bracket_vanishes());
        let u3 = LieTree::node(u.clone(), leaf(0));
        assert_eq!(odot(&u3, &u3).ideg(), 4);
        assert!(half_square(2, &u3).is_integral());
    }

    #[test]
    fn eta_is_rational_iso() {
        for (n, k) in [(2, 1), (2, 2), (4, 1), (4, 2)] {
            let c = check_eta(n, k).unwrap();
            assert!(c.holds(), "n={n} k={k}: {c:?}");
        }
    }

    #[test]
    fn kernel_generators() {
        assert!(ker_iota_generators(1, 1).spans());
        let r = ker_iota_generators(2, 1);
        assert!(r.spans());
        assert_eq!(r.kernel_rank, dk_basis(4, 1).rank());
        assert!(ker_iota_generators(2, 2).spans());
    }
}
