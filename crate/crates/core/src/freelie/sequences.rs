//! The two short exact sequences relating `D^q` and `D`:
//! `0 → H⊗𝔏_j⊗Z/2 →s D^q_{2j−1} → D_{2j−1} → 0` and
//! `0 → D^q_{2j} → D_{2j} →p 𝔏_{j+1}⊗Z/2 → 0`,
//! checked by rank and torsion accounting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::diagrams::half_square;
use crate::error::Result;
use crate::exactla::{dense_from_sparse, presented_map_kernel, smith_normal_form, sparse_from_dense, IntMatrix, PresentedModule, SparseVec};
use crate::freelie::quasi::{quasi_dk, QuasiDk};
use crate::freelie::{dk_basis, lyndon_basis, LieTree};

/// Rank over `F_2` of 0/1 rows.
pub fn f2_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] == 1 {
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a square matrix over `F_2`.
pub fn f2_inverse(a: &[Vec<u8>]) -> Option<Vec<Vec<u8>>> {
    let n = a.len();
    let mut m: Vec<Vec<u8>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| m[i][c] == 1)?;
        m.swap(c, p);
        for i in 0..n {
            if i != c && m[i][c] == 1 {
                let pivot = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn f2_mul_vec(a: &[Vec<u8>], x: &[u8]) -> Vec<u8> {
    a.iter().map(|row| row.iter().zip(x).fold(0, |s, (p, q)| s ^ (p & q))).collect()
}

/// Normalized `D^q_k` coordinates of a source element lying in the kernel.
fn dq_coords(q: &QuasiDk, x: &SparseVec) -> Option<Vec<BigInt>> {
    let y = q.kernel.coordinates(&q.source, x)?;
    Some(q.module().normalized().coords(&sparse_from_dense(&y)))
}

/// The canonical map `D^q_k → D_k` on the normalized generators of `D^q_k`,
/// as columns of `D_k` lattice coordinates.
fn canonical_map(q: &QuasiDk) -> Vec<Vec<BigInt>> {
    let dk = dk_basis(q.n, q.k);
    let nz = q.module().normalized();
    nz.from_norm
        .iter()
        .map(|rep| {
            let y = dense_from_sparse(q.module().generator_count(), rep);
            let src = q.kernel.to_source(&q.source, &y);
            dk.coordinates(&q.canonical_image(&src)).expect("canonical image of a D^q element lies in D")
        })
        .collect()
}

/// Matrix of `s` for `H = Z^n`: one column per `x_h ⊗ P(w)`, in normalized
/// `D^q_{2j−1}` coordinates.
pub fn s_map(n: usize, j: usize) -> Vec<Vec<BigInt>> {
    let q = quasi_dk(n, 2 * j - 1);
    let trees = lyndon_basis(n, j).trees();
    let mut cols = Vec::new();
    for h in 0..n {
        for t in &trees {
            let (i, s) = q.source_element(h, &LieTree::node(t.clone(), t.clone()));
            cols.push(dq_coords(&q, &vec![(i, BigInt::from(s))]).expect("h⊗[u,u] has vanishing bracket"));
        }
    }
    cols
}

/// Reduction of a 2-torsion element of `⊕ Z/d_i` to `F_2` coordinates on the
/// even-order summands.
fn two_torsion_bits(orders: &[BigInt], x: &[BigInt]) -> Vec<u8> {
    let two = BigInt::from(2);
    orders
        .iter()
        .zip(x)
        .filter(|(d, _)| !d.is_zero() && d.is_even())
        .map(|(d, c)| u8::from(!(c.mod_floor(d)).is_zero() && c.mod_floor(&(d / &two)).is_zero()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSequenceReport {
    pub n: usize,
    pub j: usize,
    /// `n · dim 𝔏_j`.
    pub source_dim: usize,
    pub s_well_defined: bool,
    pub s_rank_f2: usize,
    pub composite_zero: bool,
    /// Order of `ker(D^q → D)`, `None` if infinite.
    pub kernel_order: Option<BigInt>,
    pub c_surjective: bool,
}

impl SSequenceReport {
    pub fn exact(&self) -> bool {
        self.s_well_defined
            && self.s_rank_f2 == self.source_dim
            && self.composite_zero
            && self.kernel_order == Some(BigInt::from(2).pow(self.source_dim as u32))
            && self.c_surjective
    }
}

pub fn check_s_sequence(n: usize, j: usize) -> Result<SSequenceReport> {
    let k = 2 * j - 1;
    let q = quasi_dk(n, k);
    let nz = q.module().normalized();
    let cols = s_map(n, j);
    let s_well_defined = cols.iter().all(|c| nz.is_zero_element(&c.iter().map(|x| x * 2).collect::<Vec<_>>()));
    let bits: Vec<Vec<u8>> = cols.iter().map(|c| two_torsion_bits(&nz.orders, c)).collect();
    let s_rank_f2 = f2_rank(&bits);
    let c = canonical_map(&q);
    let composite_zero = cols.iter().all(|col| {
        let mut acc = vec![BigInt::zero(); dk_basis(n, k).rank()];
        for (x, img) in col.iter().zip(&c) {
            for (a, b) in acc.iter_mut().zip(img) {
                *a += x * b;
            }
        }
        acc.iter().all(Zero::is_zero)
    });
    let (kernel_order, c_surjective) = kernel_and_surjectivity(&q, &c)?;
    Ok(SSequenceReport {
        n,
        j,
        source_dim: cols.len(),
        s_well_defined,
        s_rank_f2,
        composite_zero,
        kernel_order,
        c_surjective,
    })
}

fn kernel_and_surjectivity(q: &QuasiDk, c: &[Vec<BigInt>]) -> Result<(Option<BigInt>, bool)> {
    let rank = dk_basis(q.n, q.k).rank();
    let nz = q.module().normalized();
    let target = PresentedModule::free(rank);
    // express the map on the original generators of D^q
    let images: Vec<SparseVec> = nz
        .to_norm
        .iter()
        .map(|row| {
            let mut acc = vec![BigInt::zero(); rank];
            for (f, x) in row {
                for (a, b) in acc.iter_mut().zip(&c[*f]) {
                    *a += x * b;
                }
            }
            sparse_from_dense(&acc)
        })
        .collect();
    let ker = presented_map_kernel(q.module(), &target, &images)?;
    let m = IntMatrix::from_columns(rank, c);
    let f = crate::exactla::invariant_factors(&m);
    Ok((ker.module.order(), f.len() == rank && f.iter().all(One::is_one)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSequenceReport {
    pub n: usize,
    pub j: usize,
    pub kernel_trivial: bool,
    /// Nontrivial invariant factors of `coker(D^q → D)`.
    pub cokernel: Vec<BigInt>,
    pub cokernel_free_rank: usize,
    /// `dim 𝔏_{j+1}`.
    pub lie_dim: usize,
    pub half_squares_integral: bool,
    /// Rank over `F_2` of the classes of `½ η(tr(u) ⊙ tr(u))` in the cokernel.
    pub half_square_rank: usize,
    /// Matrix of `p` over `F_2`, rows indexed by Lyndon words of degree
    /// `j + 1`, columns by the `D_{2j}` lattice basis.
    pub p: Vec<Vec<u8>>,
}

impl PSequenceReport {
    pub fn exact(&self) -> bool {
        self.kernel_trivial
            && self.cokernel_free_rank == 0
            && self.cokernel.len() == self.lie_dim
            && self.cokernel.iter().all(|d| *d == BigInt::from(2))
            && self.half_squares_integral
            && self.half_square_rank == self.lie_dim
    }
}

/// `p` is the quotient `D_{2j} → coker(D^q_{2j} → D_{2j})`, written in the
/// basis given by the classes of `½ η(tr(u) ⊙ tr(u))` for Lyndon `u`.
pub fn check_p_sequence(n: usize, j: usize) -> Result<PSequenceReport> {
    let k = 2 * j;
    let q = quasi_dk(n, k);
    let dk = dk_basis(n, k);
    let rank = dk.rank();
    let c = canonical_map(&q);
    let (kernel_order, _) = kernel_and_surjectivity(&q, &c)?;
    let kernel_trivial = kernel_order == Some(BigInt::one());
    let snf = smith_normal_form(&IntMatrix::from_columns(rank, &c));
    let factors = snf.invariant_factors();
    let two_rows: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_one()).collect();
    let cokernel: Vec<BigInt> = two_rows.iter().map(|&i| factors[i].clone()).collect();
    let cokernel_free_rank = rank - factors.len();
    // quotient map to (Z/2)^m read off the rows of U with factor 2
    let quotient = |x: &[BigInt]| -> Vec<u8> {
        let y = snf.u.mul_vec(x);
        two_rows.iter().map(|&i| u8::from(y[i].is_odd())).collect()
    };
    let lie = lyndon_basis(n, j + 1);
    let mut half_squares_integral = true;
    let mut m_cols = Vec::new();
    for t in lie.trees() {
        let e = half_square(n, &t);
        let coords = e.to_integers().and_then(|v| dk.coordinates(&v));
        half_squares_integral &= coords.is_some();
        m_cols.push(coords.map(|v| quotient(&v)).unwrap_or_else(|| vec![0; two_rows.len()]));
    }
    // rows of M are cokernel coordinates, columns are the words u
    let m_rows: Vec<Vec<u8>> = (0..two_rows.len()).map(|r| m_cols.iter().map(|c| c[r]).collect()).collect();
    let half_square_rank = f2_rank(&m_rows);
    let p = match (m_rows.len() == lie.len(), f2_inverse(&m_rows)) {
        (true, Some(inv)) => {
            (0..lie.len()).map(|u| (0..rank).map(|b| {
                let mut e = vec![BigInt::zero(); rank];
                e[b] = BigInt::one();
                f2_mul_vec(&inv, &quotient(&e))[u]
            }).collect()).collect()
        }
        _ => Vec::new(),
    };
    Ok(PSequenceReport {
        n,
        j,
        kernel_trivial,
        cokernel,
        cokernel_free_rank,
        lie_dim: lie.len(),
        half_squares_integral,
        half_square_rank,
        p,
    })
}

/// `p` applied to an element of `D_{2j}` in lattice coordinates.
pub fn apply_p(report: &PSequenceReport, x: &[BigInt]) -> Vec<u8> {
    report.p.iter().map(|row| row.iter().zip(x).fold(0u8, |s, (a, b)| s ^ (a & u8::from(b.is_odd())))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_helpers() {
        let a = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(f2_rank(&a), 2);
        let inv = f2_inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![1, 1], vec![0, 1]]);
        assert!(f2_inverse(&[vec![1, 1], vec![1, 1]]).is_none());
    }

    #[test]
    fn s_sequence_small() {
        let r = check_s_sequence(2, 1).unwrap();
        assert!(r.exact(), "{r:?}");
    }

    #[test]
    fn p_sequence_small() {
        let r = check_p_sequence(2, 1).unwrap();
        assert!(r.exact(), "{r:?}");
        let e = half_square(2, &LieTree::node(LieTree::leaf(0), LieTree::leaf(1)));
        let x = dk_basis(2, 2).coordinates(&e.to_integers().unwrap()).unwrap();
        assert_eq!(apply_p(&r, &x), vec![1]);
    }
}
