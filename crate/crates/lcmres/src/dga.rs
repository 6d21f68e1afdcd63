//! The DGA on the relative atomic complex of a graded lattice and the
//! induced multiplicative structure on Tor.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::Field;
use crate::homology::{homology, ChainComplex, HomologyResult};
use crate::lattice::LcmLattice;
use crate::matrix::Mat;
use crate::taylor::{epsilon, shuffle_parity, subsets_of_size};

/// A finite lattice with a fixed atom order and a grading rank: L → ℕ^s,
/// strictly monotone, zero at the bottom, and submodular:
/// rank(X∨Y) + rank(X∧Y) ≤ rank(X) + rank(Y) componentwise.
#[derive(Clone, Debug)]
pub struct GradedLattice {
    n: usize,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    atoms: Vec<usize>,
    rank: Vec<Vec<u32>>,
    labels: Vec<String>,
}

impl GradedLattice {
    /// Build from an explicit order relation; joins and meets must exist
    /// and the grading invariants must hold.
    pub fn from_order(
        rank: Vec<Vec<u32>>,
        leq: Vec<Vec<bool>>,
        labels: Vec<String>,
    ) -> Result<Self, Error> {
        let n = leq.len();
        if n == 0 {
            return Err(Error::InvalidLattice("empty lattice".into()));
        }
        if rank.len() != n || labels.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLattice(
                "rank/label/order sizes disagree".into(),
            ));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::InvalidLattice("order not reflexive".into()));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidLattice("order not antisymmetric".into()));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidLattice("order not transitive".into()));
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b][x]))
            .ok_or_else(|| Error::InvalidLattice("no bottom element".into()))?;
        let bound = |a: usize, b: usize, upper: bool| -> Result<usize, Error> {
            let cands: Vec<usize> = (0..n)
                .filter(|&c| {
                    if upper {
                        leq[a][c] && leq[b][c]
                    } else {
                        leq[c][a] && leq[c][b]
                    }
                })
                .collect();
            cands
                .iter()
                .copied()
                .find(|&u| {
                    cands
                        .iter()
                        .all(|&v| if upper { leq[u][v] } else { leq[v][u] })
                })
                .ok_or_else(|| {
                    Error::InvalidLattice(format!(
                        "no {} of elements {a}, {b}",
                        if upper { "join" } else { "meet" }
                    ))
                })
        };
        let mut join = vec![vec![0usize; n]; n];
        let mut meet = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = bound(a, b, true)?;
                meet[a][b] = bound(a, b, false)?;
            }
        }
        let atoms: Vec<usize> = (0..n)
            .filter(|&x| {
                x != bottom
                    && (0..n).all(|y| !(y != bottom && y != x && leq[y][x]))
            })
            .collect();
        let lat = GradedLattice {
            n,
            leq,
            join,
            meet,
            bottom,
            atoms,
            rank,
            labels,
        };
        lat.validate_grading()?;
        Ok(lat)
    }

    /// D with the multiplicity grading: rank(Q) = the exponent vector.
    pub fn from_lcm_lattice(lat: &LcmLattice) -> Self {
        let n = lat.len();
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| lat.leq(a, b)).collect())
            .collect();
        let join: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| lat.join_id(a, b)).collect())
            .collect();
        let meet: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| lat.meet_id(a, b)).collect())
            .collect();
        let rank: Vec<Vec<u32>> = lat.elements().iter().map(|e| e.0.clone()).collect();
        let labels: Vec<String> = lat
            .elements()
            .iter()
            .map(|e| e.render(lat.gens().alphabet()))
            .collect();
        GradedLattice {
            n,
            leq,
            join,
            meet,
            bottom: lat.bottom(),
            atoms: lat.atoms().to_vec(),
            rank,
            labels,
        }
    }

    fn validate_grading(&self) -> Result<(), Error> {
        let s = self.rank[self.bottom].len();
        if self.rank.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidLattice("rank vectors of mixed length".into()));
        }
        if self.rank[self.bottom].iter().any(|&x| x != 0) {
            return Err(Error::InvalidLattice("rank of bottom is not zero".into()));
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.leq[a][b] {
                    let ra = &self.rank[a];
                    let rb = &self.rank[b];
                    let le = ra.iter().zip(rb).all(|(x, y)| x <= y);
                    if !le || ra == rb {
                        return Err(Error::InvalidLattice(
                            "rank is not strictly monotone".into(),
                        ));
                    }
                }
                let v = self.join[a][b];
                let m = self.meet[a][b];
                for c in 0..self.rank[a].len() {
                    if self.rank[v][c] + self.rank[m][c]
                        > self.rank[a][c] + self.rank[b][c]
                    {
                        return Err(Error::InvalidLattice(
                            "rank is not submodular".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank_of(&self, x: usize) -> &[u32] {
        &self.rank[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Join of a subset of atoms given as a bitmask.
    pub fn join_of_mask(&self, mask: u32) -> usize {
        let mut acc = self.bottom;
        for (i, &a) in self.atoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = self.join[acc][a];
            }
        }
        acc
    }
}

/// An element of the relative atomic complex in one degree: a finite
/// combination of atom subsets.
pub type DgaElement<F> = BTreeMap<u32, <F as Field>::Elem>;

/// The relative atomic complex Δ(L) with the Prop-"dga" product.
#[derive(Debug)]
pub struct AtomicDGA<F: Field> {
    pub field: F,
    pub lattice: GradedLattice,
    /// Join of each atom subset, indexed by mask value.
    pub join_of: Vec<usize>,
    pub cc: ChainComplex<F>,
}

/// Build Δ(L): degree-p basis = p-subsets of atoms; d keeps faces with
/// unchanged join; the product is the shuffle-signed union, zero unless
/// the ranks of the joins add.
pub fn atomic_dga<F: Field>(lattice: GradedLattice, field: &F) -> Result<AtomicDGA<F>, Error> {
    let k = lattice.num_atoms();
    if k >= 31 {
        return Err(Error::TooManyGenerators(k, 30));
    }
    let join_of: Vec<usize> = (0u32..1 << k)
        .map(|mask| lattice.join_of_mask(mask))
        .collect();
    let mut dims = Vec::with_capacity(k + 1);
    let mut labels = Vec::with_capacity(k + 1);
    let mut boundary = Vec::with_capacity(k + 1);
    let mut masks_by_degree = Vec::with_capacity(k + 1);
    for p in 0..=k {
        let masks = subsets_of_size(k, p);
        dims.push(masks.len());
        labels.push(
            masks
                .iter()
                .map(|&s| {
                    let members: Vec<String> = (0..k)
                        .filter(|&i| s >> i & 1 == 1)
                        .map(|i| (i + 1).to_string())
                        .collect();
                    format!("{{{}}}", members.join(","))
                })
                .collect(),
        );
        masks_by_degree.push(masks);
    }
    for p in 0..=k {
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
            let mut t = tau;
            while t != 0 {
                let i = t.trailing_zeros() as usize;
                t &= t - 1;
                let sigma = tau & !(1u32 << i);
                if join_of[sigma as usize] == join_of[tau as usize] {
                    let sign = if epsilon(tau, i) % 2 == 0 {
                        field.one()
                    } else {
                        field.neg(&field.one())
                    };
                    mat.set(row_index[&sigma], j, sign);
                }
            }
        }
        boundary.push(mat);
    }
    let cc = ChainComplex::new(field.clone(), 0, dims, boundary, labels)?;
    Ok(AtomicDGA {
        field: field.clone(),
        lattice,
        join_of,
        cc,
    })
}

impl<F: Field> AtomicDGA<F> {
    /// Product of two basis subsets: None when it vanishes, otherwise
    /// (sign parity, union mask).
    pub fn basis_product(&self, sigma: u32, tau: u32) -> Option<(u32, u32)> {
        if sigma & tau != 0 {
            return None;
        }
        let union = sigma | tau;
        let ru = self.lattice.rank_of(self.join_of[union as usize]);
        let rs = self.lattice.rank_of(self.join_of[sigma as usize]);
        let rt = self.lattice.rank_of(self.join_of[tau as usize]);
        let adds = ru
            .iter()
            .zip(rs.iter().zip(rt))
            .all(|(u, (s, t))| *u == s + t);
        if !adds {
            return None;
        }
        Some((shuffle_parity(sigma, tau), union))
    }

    pub fn mul(&self, a: &DgaElement<F>, b: &DgaElement<F>) -> DgaElement<F> {
        let f = &self.field;
        let mut out = DgaElement::<F>::new();
        for (&sigma, ca) in a {
            for (&tau, cb) in b {
                if let Some((parity, union)) = self.basis_product(sigma, tau) {
                    let mut c = f.mul(ca, cb);
                    if parity % 2 == 1 {
                        c = f.neg(&c);
                    }
                    insert(f, &mut out, union, c);
                }
            }
        }
        out
    }

    pub fn diff(&self, a: &DgaElement<F>) -> DgaElement<F> {
        let f = &self.field;
        let mut out = DgaElement::<F>::new();
        for (&tau, v) in a {
            let mut t = tau;
            while t != 0 {
                let i = t.trailing_zeros() as usize;
                t &= t - 1;
                let sigma = tau & !(1u32 << i);
                if self.join_of[sigma as usize] != self.join_of[tau as usize] {
                    continue;
                }
                let c = if epsilon(tau, i) % 2 == 0 {
                    v.clone()
                } else {
                    f.neg(v)
                };
                insert(f, &mut out, sigma, c);
            }
        }
        out
    }

    /// Masks of degree p, in the chain-complex basis order.
    pub fn masks(&self, p: usize) -> Vec<u32> {
        subsets_of_size(self.lattice.num_atoms(), p)
    }

    /// The block Δ_X: the restriction of Δ to subsets with join X, as a
    /// direct summand.
    pub fn block(&self, x: usize) -> ChainComplex<F> {
        let f = &self.field;
        let k = self.lattice.num_atoms();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        let mut kept_masks: Vec<Vec<u32>> = Vec::new();
        for p in 0..=k {
            let masks = self.masks(p);
            let idx: Vec<usize> = masks
                .iter()
                .enumerate()
                .filter(|(_, &s)| self.join_of[s as usize] == x)
                .map(|(i, _)| i)
                .collect();
            kept_masks.push(idx.iter().map(|&i| masks[i]).collect());
            kept.push(idx);
        }
        let dims: Vec<usize> = kept.iter().map(|v| v.len()).collect();
        let labels: Vec<Vec<String>> = kept_masks
            .iter()
            .map(|ms| ms.iter().map(|s| format!("{s:b}")).collect())
            .collect();
        let mut boundary = Vec::new();
        for p in 0..=k {
            if p == 0 {
                boundary.push(Mat::zero(f.clone(), 0, dims[0]));
                continue;
            }
            let full = &self.cc.boundary[p];
            let mut mat = Mat::zero(f.clone(), dims[p - 1], dims[p]);
            for (jj, &j) in kept[p].iter().enumerate() {
                for (ii, &i) in kept[p - 1].iter().enumerate() {
                    mat.set(ii, jj, full.get(i, j).clone());
                }
            }
            boundary.push(mat);
        }
        ChainComplex::new(f.clone(), 0, dims, boundary, labels)
            .expect("block of a complex is a complex")
    }
}

fn insert<F: Field>(f: &F, out: &mut DgaElement<F>, mask: u32, c: F::Elem) {
    if f.is_zero(&c) {
        return;
    }
    match out.get_mut(&mask) {
        Some(e) => {
            *e = f.add(e, &c);
            if f.is_zero(e) {
                out.remove(&mask);
            }
        }
        None => {
            out.insert(mask, c);
        }
    }
}

/// Exhaustive Leibniz check d(σ·τ) = d(σ)·τ + (−1)^{|σ|} σ·d(τ) over all
/// basis pairs.
pub fn leibniz_check<F: Field>(dga: &AtomicDGA<F>) -> bool {
    let f = &dga.field;
    let k = dga.lattice.num_atoms();
    for sigma in 0u32..1 << k {
        for tau in 0u32..1 << k {
            let a: DgaElement<F> = [(sigma, f.one())].into_iter().collect();
            let b: DgaElement<F> = [(tau, f.one())].into_iter().collect();
            let lhs = dga.diff(&dga.mul(&a, &b));
            let mut rhs = dga.mul(&dga.diff(&a), &b);
            let mut second = dga.mul(&a, &dga.diff(&b));
            if sigma.count_ones() % 2 == 1 {
                second = second.into_iter().map(|(m, v)| (m, f.neg(&v))).collect();
            }
            for (m, v) in second {
                insert(f, &mut rhs, m, v);
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The Tor algebra: homology of Δ(D) with structure constants obtained
/// by reducing products of representatives modulo boundaries.
#[derive(Debug)]
pub struct TorAlgebra<F: Field> {
    pub dims: Vec<usize>,
    /// Global class index → (degree, local index within the degree).
    pub classes: Vec<(usize, usize)>,
    /// (i, j) → [(k, c)] with [u_i][u_j] = Σ c · [u_k]; zero products
    /// are omitted.
    pub constants: BTreeMap<(usize, usize), Vec<(usize, F::Elem)>>,
    pub homology: HomologyResult<F>,
}

impl<F: Field> TorAlgebra<F> {
    pub fn class_in(&self, degree: usize, local: usize) -> usize {
        self.classes
            .iter()
            .position(|&(d, l)| d == degree && l == local)
            .expect("class exists")
    }

    pub fn product(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        self.constants.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }
}

/// Representative chain of homology class (degree, local), as a DGA
/// element.
fn rep_chain<F: Field>(
    dga: &AtomicDGA<F>,
    h: &HomologyResult<F>,
    degree: usize,
    local: usize,
) -> DgaElement<F> {
    let masks = dga.masks(degree);
    let rep = &h.at(degree as i32).unwrap().representatives[local];
    let mut out = DgaElement::<F>::new();
    for (&mask, v) in masks.iter().zip(rep) {
        insert(&dga.field, &mut out, mask, v.clone());
    }
    out
}

/// Reduce a cycle (as a DGA element of the given degree) to homology
/// coordinates.
pub fn reduce_to_classes<F: Field>(
    dga: &AtomicDGA<F>,
    h: &HomologyResult<F>,
    degree: usize,
    elem: &DgaElement<F>,
) -> Result<Vec<F::Elem>, Error> {
    let f = &dga.field;
    let masks = dga.masks(degree);
    let index: BTreeMap<u32, usize> = masks
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let mut v = vec![f.zero(); masks.len()];
    for (&mask, c) in elem {
        v[index[&mask]] = c.clone();
    }
    match h.at(degree as i32) {
        Some(d) => d.project(f, &v),
        None => Ok(Vec::new()),
    }
}

pub fn tor_algebra<F: Field>(lat: &LcmLattice, field: &F) -> Result<TorAlgebra<F>, Error> {
    let dga = atomic_dga(GradedLattice::from_lcm_lattice(lat), field)?;
    tor_of_dga(&dga)
}

pub fn tor_of_dga<F: Field>(dga: &AtomicDGA<F>) -> Result<TorAlgebra<F>, Error> {
    let h = homology(&dga.cc);
    let k = dga.lattice.num_atoms();
    let mut dims = vec![0usize; k + 1];
    let mut classes = Vec::new();
    for p in 0..=k {
        dims[p] = h.dim(p as i32);
        for l in 0..dims[p] {
            classes.push((p, l));
        }
    }
    while dims.len() > 1 && *dims.last().unwrap() == 0 {
        dims.pop();
    }
    let mut constants = BTreeMap::new();
    for (i, &(pi, li)) in classes.iter().enumerate() {
        for (j, &(pj, lj)) in classes.iter().enumerate() {
            let a = rep_chain(dga, &h, pi, li);
            let b = rep_chain(dga, &h, pj, lj);
            let prod = dga.mul(&a, &b);
            if prod.is_empty() {
                continue;
            }
            let coords = reduce_to_classes(dga, &h, pi + pj, &prod)?;
            let terms: Vec<(usize, F::Elem)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !dga.field.is_zero(c))
                .map(|(l, c)| {
                    let k_idx = classes
                        .iter()
                        .position(|&(d, loc)| d == pi + pj && loc == l)
                        .expect("target class");
                    (k_idx, c)
                })
                .collect();
            if !terms.is_empty() {
                constants.insert((i, j), terms);
            }
        }
    }
    Ok(TorAlgebra {
        dims,
        classes,
        constants,
        homology: h,
    })
}
