//! The Taylor complex over the abstract factor algebra, its evaluation
//! complexes K(G), the fiber complexes K(Q), and the Taylor product.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::Field;
use crate::homology::{homology, ChainComplex, HomologyResult};
use crate::lattice::{LcmLattice, SaturatedSet};
use crate::matrix::Mat;
use crate::model::{ExponentVector, GeneratorSet, MonomialCombo};

/// All p-element subsets of {0..m-1} as bitmasks, in numeric order.
pub fn subsets_of_size(m: usize, p: usize) -> Vec<u32> {
    (0u32..1 << m).filter(|s| s.count_ones() as usize == p).collect()
}

/// Sign exponent ε(τ,i): the number of members of τ preceding generator i.
pub fn epsilon(tau: u32, i: usize) -> u32 {
    (tau & ((1u32 << i) - 1)).count_ones()
}

/// Shuffle parity ε(σ,τ): inversions between σ and τ in the concatenated
/// order (elements of τ placed after σ).
pub fn shuffle_parity(sigma: u32, tau: u32) -> u32 {
    let mut count = 0;
    let mut s = sigma;
    while s != 0 {
        let a = s.trailing_zeros();
        count += (tau & ((1u32 << a) - 1)).count_ones();
        s &= s - 1;
    }
    count & 1
}

fn sign_from_parity<F: Field>(field: &F, parity: u32) -> F::Elem {
    if parity % 2 == 0 {
        field.one()
    } else {
        field.neg(&field.one())
    }
}

/// A free-module complex over S̃: degree-p basis is the p-subsets of the
/// generators, entries are scalar-weighted sums of exponent vectors.
#[derive(Clone, Debug)]
pub struct SModuleComplex<F: Field> {
    pub field: F,
    /// Basis masks per degree 0..=max.
    pub basis: Vec<Vec<u32>>,
    /// Multidegree of each basis element (the lcm of its subset).
    pub multidegree: Vec<Vec<ExponentVector>>,
    /// `d[p]` maps degree p to p−1 (row-major, rows = dim p−1). `d[0]`
    /// is empty.
    pub d: Vec<Vec<Vec<MonomialCombo<F>>>>,
}

impl<F: Field> SModuleComplex<F> {
    pub fn max_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dim(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, |b| b.len())
    }

    pub fn d_squared_is_zero(&self) -> bool {
        let f = &self.field;
        for p in 2..self.basis.len() {
            let (hi, lo) = (&self.d[p], &self.d[p - 1]);
            let rows = self.dim(p - 2);
            let mid = self.dim(p - 1);
            let cols = self.dim(p);
            for i in 0..rows {
                for j in 0..cols {
                    let mut acc = MonomialCombo::zero();
                    for k in 0..mid {
                        acc = acc.add(f, &lo[i][k].mul(f, &hi[k][j]));
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Apply the differential to a degree-p coordinate vector of
    /// S̃-coefficients.
    pub fn apply_d(&self, p: usize, v: &[MonomialCombo<F>]) -> Vec<MonomialCombo<F>> {
        let f = &self.field;
        let rows = self.dim(p - 1);
        let mut out = vec![MonomialCombo::zero(); rows];
        for (i, row) in self.d[p].iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if !entry.is_zero() && !v[j].is_zero() {
                    out[i] = out[i].add(f, &entry.mul(f, &v[j]));
                }
            }
        }
        out
    }

    /// Evaluate every entry at a point (one scalar per factor variable).
    pub fn evaluate_at(&self, p: usize, point: &[F::Elem]) -> Mat<F> {
        let f = &self.field;
        let mut m = Mat::zero(f.clone(), self.dim(p - 1), self.dim(p));
        for i in 0..self.dim(p - 1) {
            for j in 0..self.dim(p) {
                m.set(i, j, self.d[p][i][j].eval(f, point));
            }
        }
        m
    }
}

/// The Taylor complex: entry (σ, τ∖{Q_i}=σ) is (−1)^{ε(τ,i)} Q_τ/Q_σ.
pub fn taylor_complex<F: Field>(gens: &GeneratorSet, field: &F) -> SModuleComplex<F> {
    let m = gens.num_gens();
    let mut basis = Vec::with_capacity(m + 1);
    let mut multidegree: Vec<Vec<ExponentVector>> = Vec::with_capacity(m + 1);
    let mut d = Vec::with_capacity(m + 1);
    for p in 0..=m {
        let masks = subsets_of_size(m, p);
        multidegree.push(masks.iter().map(|&s| gens.join_of_mask(s)).collect());
        basis.push(masks);
    }
    for p in 0..=m {
        if p == 0 {
            d.push(Vec::new());
            continue;
        }
        let rows = &basis[p - 1];
        let cols = &basis[p];
        let row_index: BTreeMap<u32, usize> =
            rows.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut mat = vec![vec![MonomialCombo::zero(); cols.len()]; rows.len()];
        for (j, &tau) in cols.iter().enumerate() {
            let q_tau = &multidegree[p][j];
            let mut t = tau;
            while t != 0 {
                let i = t.trailing_zeros() as usize;
                t &= t - 1;
                let sigma = tau & !(1u32 << i);
                let row = row_index[&sigma];
                let q_sigma = &multidegree[p - 1][row];
                let quot = q_tau.quotient(q_sigma).expect("faces divide");
                let coeff = sign_from_parity(field, epsilon(tau, i));
                mat[row][j] = MonomialCombo::monomial(field, coeff, quot);
            }
        }
        d.push(mat);
    }
    SModuleComplex {
        field: field.clone(),
        basis,
        multidegree,
        d,
    }
}

/// The fiber complex K(Q) on B(Q), graded by subset size, with the
/// projected differential π_Q ∘ d.
#[derive(Clone, Debug)]
pub struct FiberComplex<F: Field> {
    pub element: usize,
    /// Masks per degree, aligned with the chain complex below.
    pub masks_by_degree: Vec<Vec<u32>>,
    pub cc: ChainComplex<F>,
}

pub fn fiber_complex<F: Field>(
    lat: &LcmLattice,
    element: usize,
    field: &F,
) -> Result<FiberComplex<F>, Error> {
    let fiber = lat.fiber(element)?;
    let gens = lat.gens();
    let min_p = fiber
        .masks
        .iter()
        .map(|s| s.count_ones() as usize)
        .min()
        .expect("fiber nonempty");
    let max_p = fiber
        .masks
        .iter()
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap();
    let mut masks_by_degree: Vec<Vec<u32>> = vec![Vec::new(); max_p - min_p + 1];
    for &s in &fiber.masks {
        masks_by_degree[s.count_ones() as usize - min_p].push(s);
    }
    let dims: Vec<usize> = masks_by_degree.iter().map(|m| m.len()).collect();
    let labels: Vec<Vec<String>> = masks_by_degree
        .iter()
        .map(|ms| ms.iter().map(|&s| mask_label(s)).collect())
        .collect();
    let mut boundary = Vec::new();
    for k in 0..masks_by_degree.len() {
        if k == 0 {
            boundary.push(Mat::zero(field.clone(), 0, dims[0]));
            continue;
        }
        let row_index: BTreeMap<u32, usize> = masks_by_degree[k - 1]
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        let mut m = Mat::zero(field.clone(), dims[k - 1], dims[k]);
        for (j, &tau) in masks_by_degree[k].iter().enumerate() {
            let mut t = tau;
            while t != 0 {
                let i = t.trailing_zeros() as usize;
                t &= t - 1;
                let sigma = tau & !(1u32 << i);
                // Keep only faces staying in the fiber.
                if let Some(&row) = row_index.get(&sigma) {
                    debug_assert_eq!(lat.id_of(&gens.join_of_mask(sigma)), Some(element));
                    m.set(row, j, sign_from_parity(field, epsilon(tau, i)));
                }
            }
        }
        boundary.push(m);
    }
    let cc = ChainComplex::new(field.clone(), min_p as i32, dims, boundary, labels)?;
    Ok(FiberComplex {
        element,
        masks_by_degree,
        cc,
    })
}

fn mask_label(s: u32) -> String {
    let members: Vec<String> = (0..32)
        .filter(|&i| s >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// The evaluation complex K(G): all 2^m subsets, graded by size, with
/// entry ±1 exactly when the quotient monomial has no factor in G.
/// This is the combinatorial shadow of evaluating at a point where the
/// factors in G vanish and the rest do not.
#[derive(Clone, Debug)]
pub struct EvaluationComplex<F: Field> {
    pub g: SaturatedSet,
    /// Masks per degree 0..=m (numeric order within a degree).
    pub masks_by_degree: Vec<Vec<u32>>,
    /// ψ_G(Q_σ) per degree and basis position.
    pub block_of: Vec<Vec<ExponentVector>>,
    pub cc: ChainComplex<F>,
}

pub fn evaluation_complex<F: Field>(
    lat: &LcmLattice,
    g: &SaturatedSet,
    field: &F,
) -> EvaluationComplex<F> {
    let gens = lat.gens();
    let m = gens.num_gens();
    let mut masks_by_degree = Vec::with_capacity(m + 1);
    let mut block_of = Vec::with_capacity(m + 1);
    for p in 0..=m {
        let masks = subsets_of_size(m, p);
        block_of.push(
            masks
                .iter()
                .map(|&s| gens.join_of_mask(s).mask_to(g.members()))
                .collect::<Vec<_>>(),
        );
        masks_by_degree.push(masks);
    }
    let dims: Vec<usize> = masks_by_degree.iter().map(|v| v.len()).collect();
    let labels: Vec<Vec<String>> = masks_by_degree
        .iter()
        .map(|ms| ms.iter().map(|&s| mask_label(s)).collect())
        .collect();
    let mut boundary = Vec::new();
    for p in 0..=m {
        if p == 0 {
            boundary.push(Mat::zero(field.clone(), 0, dims[0]));
            continue;
        }
        let row_index: BTreeMap<u32, usize> = masks_by_degree[p - 1]
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        let mut mat = Mat::zero(field.clone(), dims[p - 1], dims[p]);
        for (j, &tau) in masks_by_degree[p].iter().enumerate() {
            let q_tau = gens.join_of_mask(tau);
            let mut t = tau;
            while t != 0 {
                let i = t.trailing_zeros() as usize;
                t &= t - 1;
                let sigma = tau & !(1u32 << i);
                let row = row_index[&sigma];
                let q_sigma = gens.join_of_mask(sigma);
                let quot = q_tau.quotient(&q_sigma).expect("faces divide");
                let survives = quot.mask_to(g.members()).is_zero();
                if survives {
                    mat.set(row, j, sign_from_parity(field, epsilon(tau, i)));
                }
            }
        }
        boundary.push(mat);
    }
    let cc = ChainComplex::new(field.clone(), 0, dims, boundary, labels)
        .expect("evaluation differential squares to zero");
    EvaluationComplex {
        g: g.clone(),
        masks_by_degree,
        block_of,
        cc,
    }
}

impl<F: Field> EvaluationComplex<F> {
    /// The block K_{G,P}: the restriction of K(G) to basis subsets with
    /// ψ_G(Q_σ) = P. Cross-block entries of K(G) vanish, so this is a
    /// direct summand.
    pub fn block(&self, p_val: &ExponentVector) -> ChainComplex<F> {
        self.restrict(|b| b == p_val)
    }

    /// K_{G,≤P} (or `<` with `strict`): the subcomplex of the plain
    /// simplex complex spanned by subsets with ψ_G(Q_σ) dividing P.
    /// Carries the standard ±1 differential.
    pub fn sub_complex_leq(&self, p_val: &ExponentVector, strict: bool) -> ChainComplex<F> {
        let field = &self.cc.field;
        let keep: Vec<Vec<bool>> = self
            .block_of
            .iter()
            .map(|bs| {
                bs.iter()
                    .map(|b| {
                        b.divides(p_val).expect("same alphabet") && (!strict || b != p_val)
                    })
                    .collect()
            })
            .collect();
        let mut masks: Vec<Vec<u32>> = Vec::new();
        for (p, ms) in self.masks_by_degree.iter().enumerate() {
            masks.push(
                ms.iter()
                    .enumerate()
                    .filter(|(i, _)| keep[p][*i])
                    .map(|(_, &s)| s)
                    .collect(),
            );
        }
        while masks.len() > 1 && masks.last().unwrap().is_empty() {
            masks.pop();
        }
        let dims: Vec<usize> = masks.iter().map(|v| v.len()).collect();
        let labels: Vec<Vec<String>> = masks
            .iter()
            .map(|ms| ms.iter().map(|&s| mask_label(s)).collect())
            .collect();
        let mut boundary = Vec::new();
        for p in 0..masks.len() {
            if p == 0 {
                boundary.push(Mat::zero(field.clone(), 0, dims[0]));
                continue;
            }
            let row_index: BTreeMap<u32, usize> = masks[p - 1]
                .iter()
                .enumerate()
                .map(|(i, &s)| (s, i))
                .collect();
            let mut mat = Mat::zero(field.clone(), dims[p - 1], dims[p]);
            for (j, &tau) in masks[p].iter().enumerate() {
                let mut t = tau;
                while t != 0 {
                    let i = t.trailing_zeros() as usize;
                    t &= t - 1;
                    let sigma = tau & !(1u32 << i);
                    // Faces have smaller joins, hence smaller shadows:
                    // the subcomplex is closed under the full differential.
                    let row = row_index[&sigma];
                    mat.set(row, j, sign_from_parity(field, epsilon(tau, i)));
                }
            }
            boundary.push(mat);
        }
        ChainComplex::new(field.clone(), 0, dims, boundary, labels)
            .expect("simplex subcomplex squares to zero")
    }

    fn restrict(&self, keep: impl Fn(&ExponentVector) -> bool) -> ChainComplex<F> {
        let field = &self.cc.field;
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for bs in &self.block_of {
            kept.push(
                bs.iter()
                    .enumerate()
                    .filter(|(_, b)| keep(b))
                    .map(|(i, _)| i)
                    .collect(),
            );
        }
        let dims: Vec<usize> = kept.iter().map(|v| v.len()).collect();
        let labels: Vec<Vec<String>> = kept
            .iter()
            .enumerate()
            .map(|(p, idxs)| {
                idxs.iter()
                    .map(|&i| mask_label(self.masks_by_degree[p][i]))
                    .collect()
            })
            .collect();
        let mut boundary = Vec::new();
        for p in 0..kept.len() {
            if p == 0 {
                boundary.push(Mat::zero(field.clone(), 0, dims[0]));
                continue;
            }
            let full = &self.cc.boundary[p];
            let mut mat = Mat::zero(field.clone(), dims[p - 1], dims[p]);
            for (jj, &j) in kept[p].iter().enumerate() {
                for (ii, &i) in kept[p - 1].iter().enumerate() {
                    mat.set(ii, jj, full.get(i, j).clone());
                }
            }
            boundary.push(mat);
        }
        ChainComplex::new(field.clone(), 0, dims, boundary, labels)
            .expect("block restriction squares to zero")
    }
}

/// An element of the Taylor complex in one homological degree: a finite
/// S̃-combination of basis subsets.
pub type TaylorElement<F> = BTreeMap<u32, MonomialCombo<F>>;

fn add_term<F: Field>(field: &F, acc: &mut TaylorElement<F>, mask: u32, c: MonomialCombo<F>) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(mask).or_insert_with(MonomialCombo::zero);
    *entry = entry.add(field, &c);
    if entry.is_zero() {
        acc.remove(&mask);
    }
}

/// The Taylor differential applied to an element of degree p.
pub fn taylor_diff<F: Field>(
    gens: &GeneratorSet,
    field: &F,
    elem: &TaylorElement<F>,
) -> TaylorElement<F> {
    let mut out = TaylorElement::new();
    for (&tau, coeff) in elem {
        let q_tau = gens.join_of_mask(tau);
        let mut t = tau;
        while t != 0 {
            let i = t.trailing_zeros() as usize;
            t &= t - 1;
            let sigma = tau & !(1u32 << i);
            let q_sigma = gens.join_of_mask(sigma);
            let quot = q_tau.quotient(&q_sigma).expect("faces divide");
            let sign = sign_from_parity(field, epsilon(tau, i));
            let entry = MonomialCombo::monomial(field, sign, quot).mul(field, coeff);
            add_term(field, &mut out, sigma, entry);
        }
    }
    out
}

/// The Taylor product: σ·τ = 0 when the subsets meet, otherwise the
/// shuffle sign times the gcd monomial on σ∪τ. Extended bilinearly.
pub fn taylor_product<F: Field>(
    gens: &GeneratorSet,
    field: &F,
    a: &TaylorElement<F>,
    b: &TaylorElement<F>,
) -> TaylorElement<F> {
    let mut out = TaylorElement::new();
    for (&sigma, ca) in a {
        for (&tau, cb) in b {
            if sigma & tau != 0 {
                continue;
            }
            let gcd = gens
                .join_of_mask(sigma)
                .meet(&gens.join_of_mask(tau))
                .expect("same alphabet");
            let sign = sign_from_parity(field, shuffle_parity(sigma, tau));
            let c = MonomialCombo::monomial(field, sign, gcd)
                .mul(field, ca)
                .mul(field, cb);
            add_term(field, &mut out, sigma | tau, c);
        }
    }
    out
}

pub fn taylor_basis_element<F: Field>(field: &F, r: usize, mask: u32) -> TaylorElement<F> {
    let mut e = TaylorElement::new();
    e.insert(mask, MonomialCombo::one(field, r));
    e
}

/// The three Betti computations. All set b_0 = 1 and sum over nonbottom
/// lattice elements; they must agree whenever the Taylor criterion holds.
pub struct BettiRoutes {
    pub via_lattice_homology: Vec<usize>,
    pub via_fiber_complexes: Vec<usize>,
    pub via_evaluation: Vec<usize>,
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// b_p = Σ_{Q ≠ bottom} dim H̃_{p−2}(D_{<Q}), with b_0 = 1.
pub fn betti_via_lattice_homology<F: Field>(lat: &LcmLattice, field: &F) -> Vec<usize> {
    let m = lat.gens().num_gens();
    let mut b = vec![0usize; m + 1];
    b[0] = 1;
    for q in 1..lat.len() {
        let poset = lat.lower_interval(q).expect("valid id");
        for (deg, dim) in crate::homology::reduced_flag_homology_dims(&poset, field) {
            let p = deg + 2;
            if p >= 0 && (p as usize) < b.len() {
                b[p as usize] += dim;
            }
        }
    }
    trim(b)
}

/// b_p = Σ_{Q ≠ bottom} dim H_p(K(Q)), with b_0 = 1. Fiber complexes are
/// graded by subset size.
pub fn betti_via_fiber_complexes<F: Field>(
    lat: &LcmLattice,
    field: &F,
) -> Result<Vec<usize>, Error> {
    let m = lat.gens().num_gens();
    let mut b = vec![0usize; m + 1];
    b[0] = 1;
    for q in 1..lat.len() {
        let fc = fiber_complex(lat, q, field)?;
        let h = homology(&fc.cc);
        for (deg, dim) in h.dims_map() {
            b[deg as usize] += dim;
        }
    }
    Ok(trim(b))
}

/// b_p = dim H_p(K(G)) for G = all factors.
pub fn betti_via_evaluation<F: Field>(lat: &LcmLattice, field: &F) -> Vec<usize> {
    let r = lat.gens().num_factors();
    let full = SaturatedSet::full(r);
    let ev = evaluation_complex(lat, &full, field);
    let h = homology(&ev.cc);
    let m = lat.gens().num_gens();
    let mut b = vec![0usize; m + 1];
    for (deg, dim) in h.dims_map() {
        b[deg as usize] += dim;
    }
    trim(b)
}

pub fn betti_routes<F: Field>(lat: &LcmLattice, field: &F) -> Result<BettiRoutes, Error> {
    Ok(BettiRoutes {
        via_lattice_homology: betti_via_lattice_homology(lat, field),
        via_fiber_complexes: betti_via_fiber_complexes(lat, field)?,
        via_evaluation: betti_via_evaluation(lat, field),
    })
}

/// Homology of K(G), for the evaluation identity checks.
pub fn evaluation_homology<F: Field>(
    lat: &LcmLattice,
    g: &SaturatedSet,
    field: &F,
) -> HomologyResult<F> {
    homology(&evaluation_complex(lat, g, field).cc)
}
