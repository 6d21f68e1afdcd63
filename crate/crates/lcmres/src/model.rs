//! The factor monoid W ≅ ℕ^r and the abstract factor algebra.
//!
//! Generators are multisets of abstract irreducible factors; nothing is
//! ever expanded into actual polynomials. All downstream constructions
//! depend only on exponent vectors and the fixed generator order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::Field;
use crate::matrix::Mat;

/// Names for the r abstract irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorAlphabet {
    labels: Vec<String>,
}

impl FactorAlphabet {
    pub fn new(labels: Vec<String>) -> Result<Self, Error> {
        if labels.is_empty() || labels.iter().any(|l| l.is_empty()) {
            return Err(Error::BadAlphabet);
        }
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                if labels[i] == labels[j] {
                    return Err(Error::BadAlphabet);
                }
            }
        }
        Ok(FactorAlphabet { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// An element of W ≅ ℕ^r: a product of abstract irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(r: usize) -> Self {
        ExponentVector(vec![0; r])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Factor indices with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] > 0).collect()
    }

    fn check_len(&self, other: &Self) -> Result<(), Error> {
        if self.len() != other.len() {
            return Err(Error::AlphabetMismatch(self.len(), other.len()));
        }
        Ok(())
    }

    /// Componentwise maximum (lcm in W).
    pub fn join(&self, other: &Self) -> Result<Self, Error> {
        self.check_len(other)?;
        Ok(ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        ))
    }

    /// Componentwise minimum (gcd in W).
    pub fn meet(&self, other: &Self) -> Result<Self, Error> {
        self.check_len(other)?;
        Ok(ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        ))
    }

    /// Divisibility: componentwise ≤.
    pub fn divides(&self, other: &Self) -> Result<bool, Error> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b))
    }

    /// `self / p`, defined when `p` divides `self`.
    pub fn quotient(&self, p: &Self) -> Result<Self, Error> {
        if !p.divides(self)? {
            return Err(Error::NonDivisible(
                format!("{:?}", self.0),
                format!("{:?}", p.0),
            ));
        }
        Ok(ExponentVector(
            self.0.iter().zip(&p.0).map(|(&a, &b)| a - b).collect(),
        ))
    }

    /// Componentwise sum (product in W).
    pub fn product(&self, other: &Self) -> Result<Self, Error> {
        self.check_len(other)?;
        Ok(ExponentVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect(),
        ))
    }

    /// Zero out every coordinate whose factor index is not in `mask`.
    /// This is the projection ψ_G: the largest divisor supported on G.
    pub fn mask_to(&self, members: &[bool]) -> Self {
        ExponentVector(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| if members[i] { e } else { 0 })
                .collect(),
        )
    }

    pub fn render(&self, alphabet: &FactorAlphabet) -> String {
        if self.is_zero() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 1 {
                parts.push(alphabet.labels()[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", alphabet.labels()[i], e));
            }
        }
        parts.join(" ")
    }
}

/// A validated, minimally generating list of exponent vectors.
///
/// The input order is preserved; it fixes every sign convention downstream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    alphabet: FactorAlphabet,
    gens: Vec<ExponentVector>,
}

impl GeneratorSet {
    /// Validate minimality, tightness, and non-duplication.
    pub fn new(alphabet: FactorAlphabet, gens: Vec<ExponentVector>) -> Result<Self, Error> {
        let r = alphabet.size();
        for (i, g) in gens.iter().enumerate() {
            if g.len() != r {
                return Err(Error::AlphabetMismatch(g.len(), r));
            }
            if g.is_zero() {
                return Err(Error::ZeroGenerator(i + 1));
            }
        }
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                if i == j {
                    continue;
                }
                if gens[i] == gens[j] {
                    return Err(Error::DuplicateGenerator(i.min(j) + 1, i.max(j) + 1));
                }
                if gens[i].divides(&gens[j])? {
                    return Err(Error::Minimality(i + 1, j + 1));
                }
            }
        }
        for k in 0..r {
            if gens.iter().all(|g| g.0[k] == 0) {
                return Err(Error::SlackAlphabet(alphabet.labels()[k].clone()));
            }
        }
        Ok(GeneratorSet { alphabet, gens })
    }

    pub fn alphabet(&self) -> &FactorAlphabet {
        &self.alphabet
    }

    pub fn gens(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn num_factors(&self) -> usize {
        self.alphabet.size()
    }

    /// lcm of the generators selected by `mask` (bit i = generator i).
    pub fn join_of_mask(&self, mask: u32) -> ExponentVector {
        let mut acc = ExponentVector::zero(self.num_factors());
        for i in 0..self.num_gens() {
            if mask >> i & 1 == 1 {
                acc = acc.join(&self.gens[i]).expect("same alphabet");
            }
        }
        acc
    }
}

/// Rows realize the irreducible factors as linear forms in n variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRealization {
    /// r × n matrix over ℚ; row i is the coefficient vector of factor i.
    pub rows: Mat<crate::field::Rationals>,
}

impl LinearRealization {
    pub fn new(rows: Mat<crate::field::Rationals>) -> Result<Self, Error> {
        use crate::field::Rationals;
        let f = Rationals;
        for i in 0..rows.rows {
            if (0..rows.cols).all(|j| f.is_zero(rows.get(i, j))) {
                return Err(Error::Realization(format!("row {} is zero", i + 1)));
            }
        }
        // No two rows proportional: factors must be pairwise non-associate.
        for i in 0..rows.rows {
            for j in i + 1..rows.rows {
                let a = Mat::from_rows(f, vec![rows.row_vec(i), rows.row_vec(j)]);
                if a.rank() < 2 {
                    return Err(Error::Realization(format!(
                        "rows {} and {} are proportional",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(LinearRealization { rows })
    }

    pub fn num_factors(&self) -> usize {
        self.rows.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows.cols
    }

    /// Rank of the subspace spanned by the rows selected by `members`.
    pub fn rank_of(&self, members: &[usize]) -> usize {
        use crate::field::Rationals;
        let sel: Vec<Vec<_>> = members.iter().map(|&i| self.rows.row_vec(i)).collect();
        if sel.is_empty() {
            return 0;
        }
        Mat::from_rows(Rationals, sel).rank()
    }

    /// Is row `z` in the span of the rows selected by `members`?
    pub fn in_span(&self, members: &[usize], z: usize) -> bool {
        let base = self.rank_of(members);
        let mut ext = members.to_vec();
        ext.push(z);
        self.rank_of(&ext) == base
    }
}

impl<F: Field> Mat<F> {
    pub(crate) fn row_vec(&self, i: usize) -> Vec<F::Elem> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }
}

/// An element of the abstract factor algebra S̃ = k[y_1..y_r]:
/// a finite scalar combination of exponent vectors. The empty map is 0.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialCombo<F: Field> {
    terms: BTreeMap<ExponentVector, F::Elem>,
}

impl<F: Field> MonomialCombo<F> {
    pub fn zero() -> Self {
        MonomialCombo {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: &F, coeff: F::Elem, exp: ExponentVector) -> Self {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&coeff) {
            terms.insert(exp, coeff);
        }
        MonomialCombo { terms }
    }

    pub fn one(field: &F, r: usize) -> Self {
        Self::monomial(field, field.one(), ExponentVector::zero(r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the constant monomial; detects non-minimal entries.
    pub fn constant_coeff(&self, field: &F, r: usize) -> F::Elem {
        self.terms
            .get(&ExponentVector::zero(r))
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(acc) => {
                    let v = field.add(acc, c);
                    if field.is_zero(&v) {
                        terms.remove(e);
                    } else {
                        *acc = v;
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        MonomialCombo { terms }
    }

    pub fn neg(&self, field: &F) -> Self {
        MonomialCombo {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        let mut out = MonomialCombo::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.product(e2).expect("same alphabet");
                let c = field.mul(c1, c2);
                out = out.add(field, &MonomialCombo::monomial(field, c, e));
            }
        }
        out
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        if field.is_zero(s) {
            return MonomialCombo::zero();
        }
        MonomialCombo {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.mul(c, s)))
                .collect(),
        }
    }

    /// Evaluate at a point: factor i ↦ `point[i]`.
    pub fn eval(&self, field: &F, point: &[F::Elem]) -> F::Elem {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.0.iter().enumerate() {
                for _ in 0..exp {
                    term = field.mul(&term, &point[i]);
                }
            }
            acc = field.add(&acc, &term);
        }
        acc
    }

    pub fn render(&self, alphabet: &FactorAlphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| format!("({})*{}", c, e.render(alphabet)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector(v.to_vec())
    }

    fn alphabet(names: &[&str]) -> FactorAlphabet {
        FactorAlphabet::new(names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn join_examples() {
        assert_eq!(ev(&[1, 1, 0]).join(&ev(&[1, 0, 1])).unwrap(), ev(&[1, 1, 1]));
        // Example 4.1 shape: lcm picks the max exponent coordinatewise.
        assert_eq!(
            ev(&[2, 1, 1, 0]).join(&ev(&[0, 0, 1, 1])).unwrap(),
            ev(&[2, 1, 1, 1])
        );
        let a = ev(&[3, 0, 2]);
        assert_eq!(a.join(&a).unwrap(), a);
        assert!(ev(&[1]).join(&ev(&[1, 2])).is_err());
    }

    #[test]
    fn divides_examples() {
        assert!(ev(&[1, 0]).divides(&ev(&[1, 1])).unwrap());
        assert!(!ev(&[2, 0]).divides(&ev(&[1, 1])).unwrap());
        let a = ev(&[2, 3]);
        assert!(a.divides(&a).unwrap());
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(
            ev(&[2, 1, 1]).quotient(&ev(&[1, 1, 0])).unwrap(),
            ev(&[1, 0, 1])
        );
        let q = ev(&[4, 2]);
        assert_eq!(q.quotient(&q).unwrap(), ev(&[0, 0]));
        // lcm(xy, xz) / xy = z on the {xy, xz} fixture.
        assert_eq!(
            ev(&[1, 1, 1]).quotient(&ev(&[1, 1, 0])).unwrap(),
            ev(&[0, 0, 1])
        );
        assert!(ev(&[1, 0]).quotient(&ev(&[0, 1])).is_err());
    }

    #[test]
    fn join_minus_a_reconstructs() {
        let a = ev(&[2, 0, 1]);
        let b = ev(&[1, 3, 1]);
        let j = a.join(&b).unwrap();
        let q = j.quotient(&a).unwrap();
        assert_eq!(a.product(&q).unwrap(), j);
    }

    #[test]
    fn validate_examples() {
        // Example 4.2: {xy, xz, yu, uv} over x y z u v.
        let al = alphabet(&["x", "y", "z", "u", "v"]);
        let gens = vec![
            ev(&[1, 1, 0, 0, 0]),
            ev(&[1, 0, 1, 0, 0]),
            ev(&[0, 1, 0, 1, 0]),
            ev(&[0, 0, 0, 1, 1]),
        ];
        assert!(GeneratorSet::new(al, gens).is_ok());

        let al2 = alphabet(&["x", "y"]);
        let err = GeneratorSet::new(al2.clone(), vec![ev(&[1, 0]), ev(&[1, 1])]).unwrap_err();
        assert!(matches!(err, Error::Minimality(1, 2)));

        let err = GeneratorSet::new(al2.clone(), vec![ev(&[1, 1]), ev(&[1, 1])]).unwrap_err();
        assert!(matches!(err, Error::DuplicateGenerator(1, 2)));

        let err = GeneratorSet::new(al2, vec![ev(&[1, 0]), ev(&[2, 0])]).unwrap_err();
        // y never appears, but divisibility is reported first.
        assert!(matches!(err, Error::Minimality(1, 2)));

        let err =
            GeneratorSet::new(alphabet(&["x", "y", "z"]), vec![ev(&[1, 0, 0]), ev(&[0, 2, 0])])
                .unwrap_err();
        assert!(matches!(err, Error::SlackAlphabet(ref l) if l == "z"));
    }

    #[test]
    fn combo_ring() {
        let f = Rationals;
        let x = MonomialCombo::monomial(&f, f.one(), ev(&[1, 0]));
        let y = MonomialCombo::monomial(&f, f.one(), ev(&[0, 1]));
        let s = x.add(&f, &y);
        let p = s.mul(&f, &s);
        // (x+y)^2 = x^2 + 2xy + y^2
        assert_eq!(p.num_terms(), 3);
        let zero = MonomialCombo::zero();
        assert!(p.mul(&f, &zero).is_zero());
        assert!(s.sub(&f, &s).is_zero());
        // commutativity
        assert_eq!(x.mul(&f, &y), y.mul(&f, &x));
    }
}
