//! The lcm lattice D of a generator set, its fibers under the join map
//! φ: 2^A → D, projections ψ_G, and saturated sets.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use crate::error::Error;
use crate::model::{ExponentVector, GeneratorSet, LinearRealization};
use crate::poset::FinitePoset;

/// Default cap on the number of generators; fiber enumeration costs 2^m.
pub const DEFAULT_MAX_M: usize = 24;

/// The lattice of lcms of generator subsets, ordered by divisibility.
///
/// Elements are sorted by (total degree, lex), which is a linear
/// extension of divisibility; element 0 is the bottom (constant 1).
#[derive(Debug)]
pub struct LcmLattice {
    gens: GeneratorSet,
    elements: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
    atom_index: Vec<usize>,
    fibers: OnceLock<Vec<Vec<u32>>>,
}

/// All generator subsets with a given lcm, as bitmasks in lexicographic
/// (i.e. numeric) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub element: usize,
    pub masks: Vec<u32>,
}

/// A set of factor indices closed in the sense of the chosen mode.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SaturatedSet {
    members: Vec<bool>,
}

impl SaturatedSet {
    pub fn from_indices(r: usize, indices: &[usize]) -> Self {
        let mut members = vec![false; r];
        for &i in indices {
            members[i] = true;
        }
        SaturatedSet { members }
    }

    pub fn full(r: usize) -> Self {
        SaturatedSet {
            members: vec![true; r],
        }
    }

    pub fn empty(r: usize) -> Self {
        SaturatedSet {
            members: vec![false; r],
        }
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&i| self.members[i])
            .collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn is_empty_set(&self) -> bool {
        self.members.iter().all(|&b| !b)
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }
}

/// How saturated sets (and depths) are determined.
pub enum SaturationMode<'a> {
    /// Factors are independent variables: every subset is saturated.
    Monomial,
    /// Factors are realized linear forms: saturated sets are the flats of
    /// the linear matroid on the realization rows.
    Linear(&'a LinearRealization),
    /// User-supplied: the keys of the depth table.
    Table(&'a [(Vec<usize>, u32)]),
}

impl LcmLattice {
    /// Closure of the generators under pairwise join, plus the bottom.
    /// Worklist construction; never enumerates the 2^m subsets.
    pub fn build(gens: &GeneratorSet) -> Self {
        Self::build_capped(gens, DEFAULT_MAX_M).expect("default cap exceeded")
    }

    pub fn build_capped(gens: &GeneratorSet, max_m: usize) -> Result<Self, Error> {
        if gens.num_gens() > max_m.min(31) {
            return Err(Error::TooManyGenerators(gens.num_gens(), max_m.min(31)));
        }
        let r = gens.num_factors();
        let mut set: BTreeSet<ExponentVector> = BTreeSet::new();
        set.insert(ExponentVector::zero(r));
        let mut worklist: Vec<ExponentVector> = Vec::new();
        for g in gens.gens() {
            if set.insert(g.clone()) {
                worklist.push(g.clone());
            }
        }
        while let Some(q) = worklist.pop() {
            let mut fresh = Vec::new();
            for e in &set {
                let j = q.join(e).expect("same alphabet");
                if !set.contains(&j) {
                    fresh.push(j);
                }
            }
            for j in fresh {
                if set.insert(j.clone()) {
                    worklist.push(j);
                }
            }
        }
        let mut elements: Vec<ExponentVector> = set.into_iter().collect();
        elements.sort_by_key(|e| (e.total_degree(), e.clone()));
        let index: HashMap<ExponentVector, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let atom_index = gens.gens().iter().map(|g| index[g]).collect();
        Ok(LcmLattice {
            gens: gens.clone(),
            elements,
            index,
            atom_index,
            fibers: OnceLock::new(),
        })
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[ExponentVector] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &ExponentVector {
        &self.elements[id]
    }

    pub fn id_of(&self, e: &ExponentVector) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn require_id(&self, e: &ExponentVector) -> Result<usize, Error> {
        self.id_of(e)
            .ok_or_else(|| Error::NotInLattice(format!("{e}")))
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    /// Atom element ids, in generator order. Minimal generation forces the
    /// atoms of D to be exactly the generators.
    pub fn atoms(&self) -> &[usize] {
        &self.atom_index
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[a]
            .divides(&self.elements[b])
            .expect("same alphabet")
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Join inside D (componentwise max; D is join-closed).
    pub fn join_id(&self, a: usize, b: usize) -> usize {
        let j = self.elements[a]
            .join(&self.elements[b])
            .expect("same alphabet");
        self.index[&j]
    }

    /// Meet inside D: the join of all common lower bounds.
    pub fn meet_id(&self, a: usize, b: usize) -> usize {
        let mut acc = 0;
        for c in 0..self.len() {
            if self.leq(c, a) && self.leq(c, b) {
                acc = self.join_id(acc, c);
            }
        }
        acc
    }

    /// Covering relation, as (lower, upper) pairs.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if !self.lt(a, b) {
                    continue;
                }
                let covered = (0..n).all(|c| !(self.lt(a, c) && self.lt(c, b)));
                if covered {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    fn all_fibers(&self) -> &Vec<Vec<u32>> {
        self.fibers.get_or_init(|| {
            let m = self.gens.num_gens();
            let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); self.len()];
            for mask in 0u32..1 << m {
                let q = self.gens.join_of_mask(mask);
                buckets[self.index[&q]].push(mask);
            }
            buckets
        })
    }

    /// The fiber B(Q) = φ^{-1}(Q): all subsets with lcm Q.
    pub fn fiber(&self, element: usize) -> Result<Fiber, Error> {
        if element >= self.len() {
            return Err(Error::NotInLattice(format!("id {element}")));
        }
        Ok(Fiber {
            element,
            masks: self.all_fibers()[element].clone(),
        })
    }

    /// The open interval (bottom, Q).
    pub fn lower_interval(&self, q: usize) -> Result<FinitePoset, Error> {
        if q >= self.len() {
            return Err(Error::NotInLattice(format!("id {q}")));
        }
        self.open_interval(self.bottom(), q)
    }

    /// The open interval (x, y) with the induced order.
    pub fn open_interval(&self, x: usize, y: usize) -> Result<FinitePoset, Error> {
        let ids: Vec<usize> = (0..self.len())
            .filter(|&p| self.lt(x, p) && self.lt(p, y))
            .collect();
        Ok(FinitePoset::new(
            ids.iter().map(|&i| i as u64).collect(),
            |i, j| self.leq(ids[i], ids[j]),
        ))
    }

    /// ψ_G(Q): the largest divisor of Q supported on G.
    pub fn project(&self, g: &SaturatedSet, q: usize) -> ExponentVector {
        self.elements[q].mask_to(g.members())
    }

    /// The image ψ_G(D), sorted by (total degree, lex).
    pub fn projection_image(&self, g: &SaturatedSet) -> Vec<ExponentVector> {
        let mut set: BTreeSet<ExponentVector> =
            (0..self.len()).map(|q| self.project(g, q)).collect();
        let mut out: Vec<ExponentVector> = std::mem::take(&mut set).into_iter().collect();
        out.sort_by_key(|e| (e.total_degree(), e.clone()));
        out
    }

    /// D(G,<P): the nonbottom lattice elements whose projection strictly
    /// divides P. The bottom is excluded so the poset is not coned.
    pub fn strict_sublevel(
        &self,
        g: &SaturatedSet,
        p: &ExponentVector,
    ) -> Result<FinitePoset, Error> {
        if !self.projection_image(g).contains(p) {
            return Err(Error::NotInProjectionImage(format!("{p}")));
        }
        let ids: Vec<usize> = (1..self.len())
            .filter(|&q| {
                let proj = self.project(g, q);
                proj != *p && proj.divides(p).expect("same alphabet")
            })
            .collect();
        Ok(FinitePoset::new(
            ids.iter().map(|&i| i as u64).collect(),
            |i, j| self.leq(ids[i], ids[j]),
        ))
    }
}

/// Enumerate the saturated sets for the chosen mode, smallest first.
pub fn saturated_sets(
    gens: &GeneratorSet,
    mode: &SaturationMode<'_>,
) -> Result<Vec<SaturatedSet>, Error> {
    let r = gens.num_factors();
    match mode {
        SaturationMode::Monomial => {
            let mut out = Vec::with_capacity(1 << r);
            for mask in 0u64..1 << r {
                let idx: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
                out.push(SaturatedSet::from_indices(r, &idx));
            }
            out.sort_by_key(|s| (s.size(), s.indices()));
            Ok(out)
        }
        SaturationMode::Linear(real) => {
            if real.num_factors() != r {
                return Err(Error::Realization(format!(
                    "realization has {} rows but the alphabet has {} factors",
                    real.num_factors(),
                    r
                )));
            }
            let mut out = Vec::new();
            for mask in 0u64..1 << r {
                let idx: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).collect();
                let closed = (0..r)
                    .filter(|i| mask >> i & 1 == 0)
                    .all(|z| !real.in_span(&idx, z));
                if closed {
                    out.push(SaturatedSet::from_indices(r, &idx));
                }
            }
            out.sort_by_key(|s| (s.size(), s.indices()));
            Ok(out)
        }
        SaturationMode::Table(entries) => {
            let mut out: Vec<SaturatedSet> = entries
                .iter()
                .map(|(idx, _)| SaturatedSet::from_indices(r, idx))
                .collect();
            out.sort_by_key(|s| (s.size(), s.indices()));
            out.dedup();
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Rationals};
    use crate::matrix::Mat;
    use crate::model::FactorAlphabet;

    pub(crate) fn gens_from(labels: &[&str], rows: &[&[u32]]) -> GeneratorSet {
        let al = FactorAlphabet::new(labels.iter().map(|s| s.to_string()).collect()).unwrap();
        GeneratorSet::new(
            al,
            rows.iter().map(|r| ExponentVector(r.to_vec())).collect(),
        )
        .unwrap()
    }

    /// Example 4.2: A = {xy, xz, yu, uv}.
    pub(crate) fn ex42() -> GeneratorSet {
        gens_from(
            &["x", "y", "z", "u", "v"],
            &[
                &[1, 1, 0, 0, 0],
                &[1, 0, 1, 0, 0],
                &[0, 1, 0, 1, 0],
                &[0, 0, 0, 1, 1],
            ],
        )
    }

    fn brute_force_lattice(gens: &GeneratorSet) -> BTreeSet<ExponentVector> {
        let m = gens.num_gens();
        (0u32..1 << m).map(|mask| gens.join_of_mask(mask)).collect()
    }

    #[test]
    fn ex42_lattice_size() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        let oracle = brute_force_lattice(&gens);
        assert_eq!(lat.len(), oracle.len());
        assert_eq!(lat.len(), 12);
        for e in lat.elements() {
            assert!(oracle.contains(e));
        }
    }

    #[test]
    fn degenerate_lattices() {
        let single = gens_from(&["x", "y"], &[&[1, 2]]);
        let lat = LcmLattice::build(&single);
        assert_eq!(lat.len(), 2);

        let coprime = gens_from(&["x", "y"], &[&[1, 0], &[0, 1]]);
        let lat = LcmLattice::build(&coprime);
        assert_eq!(lat.len(), 4); // Boolean B_2
    }

    #[test]
    fn atoms_are_generators() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        let minimal: BTreeSet<usize> = (1..lat.len())
            .filter(|&q| (1..lat.len()).all(|p| !lat.lt(p, q)))
            .collect();
        let atoms: BTreeSet<usize> = lat.atoms().iter().copied().collect();
        assert_eq!(minimal, atoms);
        assert_eq!(atoms.len(), gens.num_gens());
    }

    #[test]
    fn ex42_fibers() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        // B(xyzu) = {{2,3},{1,2,3}}
        let xyzu = lat
            .require_id(&ExponentVector(vec![1, 1, 1, 1, 0]))
            .unwrap();
        let f = lat.fiber(xyzu).unwrap();
        assert_eq!(f.masks, vec![0b0110, 0b0111]);
        // B(xyzuv) = {{1,2,4},{2,3,4},{1,2,3,4}}
        let top = lat.top();
        assert_eq!(
            lat.element(top),
            &ExponentVector(vec![1, 1, 1, 1, 1])
        );
        let f = lat.fiber(top).unwrap();
        assert_eq!(f.masks, vec![0b1011, 0b1110, 0b1111]);
        // Bottom fiber is exactly {∅}.
        let f = lat.fiber(lat.bottom()).unwrap();
        assert_eq!(f.masks, vec![0]);
    }

    #[test]
    fn fiber_sizes_partition_subsets() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        let total: usize = (0..lat.len())
            .map(|q| lat.fiber(q).unwrap().masks.len())
            .sum();
        assert_eq!(total, 1 << gens.num_gens());
    }

    #[test]
    fn lower_intervals() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        for &a in lat.atoms() {
            assert_eq!(lat.lower_interval(a).unwrap().len(), 0);
        }
        let xyzu = lat
            .require_id(&ExponentVector(vec![1, 1, 1, 1, 0]))
            .unwrap();
        let poset = lat.lower_interval(xyzu).unwrap();
        let members: BTreeSet<ExponentVector> = poset
            .labels()
            .iter()
            .map(|&id| lat.element(id as usize).clone())
            .collect();
        let expected: BTreeSet<ExponentVector> = (1..lat.len())
            .filter(|&p| lat.lt(p, xyzu))
            .map(|p| lat.element(p).clone())
            .collect();
        assert_eq!(members, expected);

        let coprime = gens_from(&["x", "y"], &[&[1, 0], &[0, 1]]);
        let lat = LcmLattice::build(&coprime);
        let poset = lat.lower_interval(lat.top()).unwrap();
        assert_eq!(poset.len(), 2);
        assert!(!poset.lt(0, 1) && !poset.lt(1, 0));
    }

    #[test]
    fn projection() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        let r = gens.num_factors();
        let top = lat.top();
        assert_eq!(
            lat.project(&SaturatedSet::full(r), top),
            *lat.element(top)
        );
        assert!(lat.project(&SaturatedSet::empty(r), top).is_zero());
        let g = SaturatedSet::from_indices(r, &[0, 1, 2]);
        assert_eq!(lat.project(&g, top), ExponentVector(vec![1, 1, 1, 0, 0]));
        // Monotone and idempotent onto its image.
        for a in 0..lat.len() {
            let pa = lat.project(&g, a);
            assert_eq!(pa.mask_to(g.members()), pa);
            for b in 0..lat.len() {
                if lat.leq(a, b) {
                    assert!(pa.divides(&lat.project(&g, b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn strict_sublevel_cases() {
        let gens = ex42();
        let lat = LcmLattice::build(&gens);
        let r = gens.num_factors();
        let full = SaturatedSet::full(r);
        // With G = all factors, ψ is the identity and the sublevel poset is
        // the open lower interval.
        let top_vec = lat.element(lat.top()).clone();
        let sub = lat.strict_sublevel(&full, &top_vec).unwrap();
        assert_eq!(sub.len(), 10); // 12 elements minus bottom and top
        let low = lat.lower_interval(lat.top()).unwrap();
        assert_eq!(sub.len(), low.len());

        // Below an atom's shadow there is nothing.
        let atom_vec = lat.element(lat.atoms()[0]).clone();
        let sub = lat.strict_sublevel(&full, &atom_vec).unwrap();
        assert_eq!(sub.len(), 0);

        // P not in the image is rejected.
        let bogus = ExponentVector(vec![9, 0, 0, 0, 0]);
        assert!(lat.strict_sublevel(&full, &bogus).is_err());
    }

    #[test]
    fn phi_monotone() {
        let gens = ex42();
        let m = gens.num_gens();
        for sub in 0u32..1 << m {
            for sup in 0u32..1 << m {
                if sub & sup == sub {
                    assert!(gens
                        .join_of_mask(sub)
                        .divides(&gens.join_of_mask(sup))
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn saturated_sets_monomial() {
        let gens = gens_from(&["x", "y", "z"], &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let sets = saturated_sets(&gens, &SaturationMode::Monomial).unwrap();
        assert_eq!(sets.len(), 8);
    }

    #[test]
    fn saturated_sets_linear_flats() {
        // Rows x, y, x+y in the plane: the flats are ∅, the three lines,
        // and the whole plane.
        let gens = gens_from(&["x", "y", "s"], &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let f = Rationals;
        let rows = Mat::from_rows(
            f,
            vec![
                vec![f.from_i64(1), f.from_i64(0)],
                vec![f.from_i64(0), f.from_i64(1)],
                vec![f.from_i64(1), f.from_i64(1)],
            ],
        );
        let real = LinearRealization::new(rows).unwrap();
        let sets = saturated_sets(&gens, &SaturationMode::Linear(&real)).unwrap();
        let as_idx: Vec<Vec<usize>> = sets.iter().map(|s| s.indices()).collect();
        assert_eq!(
            as_idx,
            vec![vec![], vec![0], vec![1], vec![2], vec![0, 1, 2]]
        );
    }

    #[test]
    fn realization_validation() {
        let f = Rationals;
        let zero_row = Mat::from_rows(
            f,
            vec![
                vec![f.from_i64(0), f.from_i64(0)],
                vec![f.from_i64(1), f.from_i64(0)],
            ],
        );
        assert!(LinearRealization::new(zero_row).is_err());
        let proportional = Mat::from_rows(
            f,
            vec![
                vec![f.from_i64(1), f.from_i64(2)],
                vec![f.from_i64(2), f.from_i64(4)],
            ],
        );
        assert!(LinearRealization::new(proportional).is_err());
    }
}
