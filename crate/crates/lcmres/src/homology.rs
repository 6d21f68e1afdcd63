//! Abstract simplicial complexes, exact chain complexes, and homology
//! with deterministic representative bases.

use std::collections::HashMap;

use crate::error::Error;
use crate::field::Field;
use crate::matrix::Mat;
use crate::poset::FinitePoset;

/// A downward-closed family of vertex subsets, grouped by cardinality.
/// `faces[k]` holds the k-element faces; `faces[0]` is always `[[]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    faces: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Build from a list of faces (the downward closure is taken).
    pub fn from_faces(faces: impl IntoIterator<Item = Vec<usize>>) -> Self {
        use std::collections::BTreeSet;
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        all.insert(Vec::new());
        let mut stack: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        while let Some(f) = stack.pop() {
            if all.contains(&f) {
                continue;
            }
            for i in 0..f.len() {
                let mut sub = f.clone();
                sub.remove(i);
                stack.push(sub);
            }
            all.insert(f);
        }
        let max_k = all.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut grouped: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_k + 1];
        for f in all {
            grouped[f.len()].push(f);
        }
        for g in &mut grouped {
            g.sort();
        }
        SimplicialComplex { faces: grouped }
    }

    /// Only the empty face.
    pub fn trivial() -> Self {
        SimplicialComplex {
            faces: vec![vec![Vec::new()]],
        }
    }

    pub fn faces_of_size(&self, k: usize) -> &[Vec<usize>] {
        self.faces.get(k).map_or(&[], |f| f.as_slice())
    }

    /// Largest face cardinality.
    pub fn max_size(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn num_faces(&self) -> usize {
        self.faces.iter().map(|f| f.len()).sum()
    }
}

/// Flag complex of a poset: faces are the chains.
pub fn flag_complex(poset: &FinitePoset) -> SimplicialComplex {
    let chains = poset.chains();
    let max_k = chains.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut grouped: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_k + 1];
    for c in chains {
        grouped[c.len()].push(c);
    }
    for g in &mut grouped {
        g.sort();
    }
    // Chains are closed under subsets, so this is already a complex.
    SimplicialComplex { faces: grouped }
}

/// Atomic complex of a bounded lattice given by its open interval:
/// vertices are the minimal elements, and a set of them is a face when it
/// is bounded above inside the interval.
pub fn atomic_complex(interval: &FinitePoset) -> SimplicialComplex {
    let atoms = interval.minimal_elements();
    bounded_subset_complex(&atoms, |members| interval.bounded_above(members))
}

/// Coatomic complex: dual to [`atomic_complex`], on the maximal elements.
pub fn coatomic_complex(interval: &FinitePoset) -> SimplicialComplex {
    let coatoms = interval.maximal_elements();
    bounded_subset_complex(&coatoms, |members| interval.bounded_below(members))
}

fn bounded_subset_complex(
    vertices: &[usize],
    bounded: impl Fn(&[usize]) -> bool,
) -> SimplicialComplex {
    let v = vertices.len();
    assert!(v < 30, "too many vertices for subset enumeration");
    let mut faces = Vec::new();
    for mask in 0u32..1 << v {
        let members: Vec<usize> = (0..v)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| vertices[i])
            .collect();
        if members.is_empty() || bounded(&members) {
            // Face recorded over local vertex indices 0..v.
            faces.push((0..v).filter(|&i| mask >> i & 1 == 1).collect());
        }
    }
    SimplicialComplex::from_faces(faces)
}

/// A bounded-degree chain complex of finite-dimensional spaces over an
/// exact field. `boundary[k]` maps degree `offset + k` to `offset + k - 1`.
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Field> {
    pub field: F,
    pub offset: i32,
    pub dims: Vec<usize>,
    pub boundary: Vec<Mat<F>>,
    pub labels: Vec<Vec<String>>,
}

impl<F: Field> ChainComplex<F> {
    /// `boundary[0]` must be the zero map out of the lowest degree
    /// (a `0 × dims[0]` matrix). Verifies d∘d = 0.
    pub fn new(
        field: F,
        offset: i32,
        dims: Vec<usize>,
        boundary: Vec<Mat<F>>,
        labels: Vec<Vec<String>>,
    ) -> Result<Self, Error> {
        assert_eq!(dims.len(), boundary.len());
        assert_eq!(dims.len(), labels.len());
        for k in 0..dims.len() {
            assert_eq!(boundary[k].cols, dims[k]);
            if k > 0 {
                assert_eq!(boundary[k].rows, dims[k - 1]);
            } else {
                assert_eq!(boundary[k].rows, 0);
            }
        }
        let cc = ChainComplex {
            field,
            offset,
            dims,
            boundary,
            labels,
        };
        for k in 1..cc.boundary.len() {
            if !cc.boundary[k - 1].mul(&cc.boundary[k]).is_zero() {
                return Err(Error::NotAComplex(
                    cc.offset + k as i32,
                    cc.offset + k as i32 - 2,
                ));
            }
        }
        Ok(cc)
    }

    pub fn min_degree(&self) -> i32 {
        self.offset
    }

    pub fn max_degree(&self) -> i32 {
        self.offset + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, degree: i32) -> usize {
        let k = degree - self.offset;
        if k < 0 || k as usize >= self.dims.len() {
            0
        } else {
            self.dims[k as usize]
        }
    }

    /// The boundary map out of `degree`; zero map outside the range.
    pub fn boundary_from(&self, degree: i32) -> Mat<F> {
        let k = degree - self.offset;
        if k <= 0 || k as usize >= self.boundary.len() {
            Mat::zero(
                self.field.clone(),
                self.dim(degree - 1),
                self.dim(degree),
            )
        } else {
            self.boundary[k as usize].clone()
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Simplicial boundary with the sign (−1)^i on deletion of the i-th
/// smallest vertex. With `reduced`, the empty face sits in degree −1 and
/// vertices map onto it (augmentation); otherwise degree p holds the
/// (p+1)-element faces and vertices have zero boundary.
pub fn chain_complex<F: Field>(
    cx: &SimplicialComplex,
    field: &F,
    reduced: bool,
) -> ChainComplex<F> {
    let start = if reduced { 0 } else { 1 };
    let offset = if reduced { -1 } else { 0 };
    let sizes: Vec<usize> = (start..=cx.max_size().max(start)).collect();
    let mut dims = Vec::new();
    let mut labels = Vec::new();
    let mut boundary = Vec::new();
    let mut prev_index: HashMap<&[usize], usize> = HashMap::new();
    for (pos, &k) in sizes.iter().enumerate() {
        let faces = cx.faces_of_size(k);
        dims.push(faces.len());
        labels.push(faces.iter().map(|f| format!("{f:?}")).collect());
        let rows = if pos == 0 { 0 } else { prev_index.len() };
        let mut d = Mat::zero(field.clone(), rows, faces.len());
        if pos > 0 {
            for (j, face) in faces.iter().enumerate() {
                for (i, _) in face.iter().enumerate() {
                    let mut sub = face.clone();
                    sub.remove(i);
                    let Some(&row) = prev_index.get(sub.as_slice()) else {
                        continue;
                    };
                    let sign = if i % 2 == 0 {
                        field.one()
                    } else {
                        field.neg(&field.one())
                    };
                    d.set(row, j, sign);
                }
            }
        }
        boundary.push(d);
        prev_index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.as_slice(), i))
            .collect();
    }
    ChainComplex::new(field.clone(), offset, dims, boundary, labels)
        .expect("simplicial boundary squares to zero")
}

/// Homology in one degree, with deterministic cycle representatives and
/// the data needed to project arbitrary cycles onto homology coordinates.
#[derive(Clone, Debug)]
pub struct DegreeHomology<F: Field> {
    pub dim: usize,
    /// Cycle representatives, as coordinate vectors in the chain basis.
    pub representatives: Vec<Vec<F::Elem>>,
    /// Columns: a boundary basis followed by the representatives. Present
    /// only when the chain space is nonzero.
    span: Option<(Mat<F>, Mat<F>, usize)>, // (A = [B|H], left inverse, |B|)
}

impl<F: Field> DegreeHomology<F> {
    /// Express a cycle in homology coordinates (reduce modulo boundaries).
    /// Errors if the vector is not a cycle of this degree.
    pub fn project(&self, _field: &F, cycle: &[F::Elem]) -> Result<Vec<F::Elem>, Error> {
        if self.dim == 0 && self.span.is_none() {
            return Ok(Vec::new());
        }
        let (a, l, b_count) = self.span.as_ref().expect("span data");
        let x = l.mul_vec(cycle);
        let back = a.mul_vec(&x);
        if back != cycle {
            return Err(Error::Internal(
                "vector is not a cycle in this degree".into(),
            ));
        }
        Ok(x[*b_count..].to_vec())
    }
}

#[derive(Clone, Debug)]
pub struct HomologyResult<F: Field> {
    pub offset: i32,
    pub degrees: Vec<DegreeHomology<F>>,
}

impl<F: Field> HomologyResult<F> {
    pub fn dim(&self, degree: i32) -> usize {
        let k = degree - self.offset;
        if k < 0 || k as usize >= self.degrees.len() {
            0
        } else {
            self.degrees[k as usize].dim
        }
    }

    pub fn at(&self, degree: i32) -> Option<&DegreeHomology<F>> {
        let k = degree - self.offset;
        if k < 0 || k as usize >= self.degrees.len() {
            None
        } else {
            Some(&self.degrees[k as usize])
        }
    }

    pub fn dims_map(&self) -> Vec<(i32, usize)> {
        self.degrees
            .iter()
            .enumerate()
            .filter(|(_, d)| d.dim > 0)
            .map(|(k, d)| (self.offset + k as i32, d.dim))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.iter().map(|d| d.dim).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.total_dim() == 0
    }
}

/// Homology of every degree, with first-pivot representatives.
pub fn homology<F: Field>(cc: &ChainComplex<F>) -> HomologyResult<F> {
    let f = &cc.field;
    let mut degrees = Vec::new();
    for k in 0..cc.dims.len() {
        let p = cc.offset + k as i32;
        let n = cc.dims[k];
        if n == 0 {
            degrees.push(DegreeHomology {
                dim: 0,
                representatives: Vec::new(),
                span: None,
            });
            continue;
        }
        let d_out = cc.boundary_from(p);
        let d_in = cc.boundary_from(p + 1);
        let cycles = d_out.kernel_basis();
        let image_cols: Vec<Vec<F::Elem>> = d_in
            .pivot_columns()
            .into_iter()
            .map(|j| d_in.column(j))
            .collect();
        // Extend the boundary basis to the cycle space: pivot columns of
        // [B | Z] past the B block pick the representatives.
        let mut cols = image_cols.clone();
        cols.extend(cycles.iter().cloned());
        let combined = Mat::from_columns(f.clone(), n, &cols);
        let pivots = combined.pivot_columns();
        debug_assert!(pivots.len() >= image_cols.len());
        let reps: Vec<Vec<F::Elem>> = pivots
            .iter()
            .filter(|&&j| j >= image_cols.len())
            .map(|&j| cycles[j - image_cols.len()].clone())
            .collect();
        let dim = reps.len();
        let span = {
            let mut a_cols = image_cols.clone();
            a_cols.extend(reps.iter().cloned());
            if a_cols.is_empty() {
                None
            } else {
                let a = Mat::from_columns(f.clone(), n, &a_cols);
                let l = a.left_inverse();
                Some((a, l, image_cols.len()))
            }
        };
        degrees.push(DegreeHomology {
            dim,
            representatives: reps,
            span,
        });
    }
    HomologyResult {
        offset: cc.offset,
        degrees,
    }
}

/// Reduced homology dimensions of the flag complex of a poset. The empty
/// poset yields the field in degree −1.
pub fn reduced_flag_homology_dims<F: Field>(poset: &FinitePoset, field: &F) -> Vec<(i32, usize)> {
    let cc = chain_complex(&flag_complex(poset), field, true);
    homology(&cc).dims_map()
}
