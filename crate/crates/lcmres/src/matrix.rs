//! Dense exact linear algebra over a [`Field`], plus a fraction-free
//! integer rank routine used as an independent cross-check.
//!
//! Pivoting is deterministic (first nonzero in row-major order) so every
//! downstream basis is reproducible bit for bit.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::field::Field;

/// Above this many entries, rank computations switch to a sparse
/// elimination path.
pub const SPARSE_THRESHOLD: usize = 250_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F: Field> {
    pub field: F,
    pub rows: usize,
    pub cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Mat<F> {
        let mut t = Mat::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let f = &self.field;
        let mut out = Mat::zero(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(i, j), &f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    if !f.is_zero(self.get(i, j)) && !f.is_zero(&v[j]) {
                        acc = f.add(&acc, &f.mul(self.get(i, j), &v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduction to reduced row echelon form. Returns pivot columns
    /// in increasing order. First-pivot convention: for each column, the
    /// topmost unused row with a nonzero entry becomes the pivot.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&i| !f.is_zero(self.get(i, col))) else {
                continue;
            };
            self.swap_rows(row, piv);
            let inv = f.inv(self.get(row, col));
            for j in col..self.cols {
                let v = f.mul(self.get(row, j), &inv);
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row || f.is_zero(self.get(i, col)) {
                    continue;
                }
                let factor = self.get(i, col).clone();
                for j in col..self.cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(row, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows * self.cols > SPARSE_THRESHOLD {
            self.rank_sparse()
        } else {
            self.clone().rref().len()
        }
    }

    /// Sparse elimination keeping rows as sorted (col, value) lists.
    fn rank_sparse(&self) -> usize {
        let f = &self.field;
        let mut rows: Vec<Vec<(usize, F::Elem)>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !f.is_zero(self.get(i, j)))
                    .map(|j| (j, self.get(i, j).clone()))
                    .collect()
            })
            .filter(|r: &Vec<_>| !r.is_empty())
            .collect();
        let mut rank = 0;
        // Eliminate column by column on the leading terms.
        while !rows.is_empty() {
            // Pick the row whose leading column is smallest (ties: first).
            let lead_col = rows.iter().map(|r| r[0].0).min().unwrap();
            let pos = rows.iter().position(|r| r[0].0 == lead_col).unwrap();
            let pivot = rows.swap_remove(pos);
            let pinv = f.inv(&pivot[0].1);
            rank += 1;
            let mut next = Vec::with_capacity(rows.len());
            for r in rows {
                if r[0].0 != lead_col {
                    next.push(r);
                    continue;
                }
                let factor = f.mul(&r[0].1, &pinv);
                let combined = sparse_axpy(f, &r, &factor, &pivot);
                if !combined.is_empty() {
                    next.push(combined);
                }
            }
            rows = next;
        }
        rank
    }

    /// Basis of the right kernel, as columns. Deterministic: one basis
    /// vector per free column, with 1 in the free position.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut r = self.clone();
        let pivots = r.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = Some(prow);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![f.zero(); self.cols];
            vec[free] = f.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                vec[pcol] = f.neg(r.get(prow, free));
            }
            basis.push(vec);
        }
        basis
    }

    /// Indices of pivot columns of `self`; the corresponding columns form a
    /// deterministic basis of the column space.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.clone().rref()
    }

    /// Solve `self * x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(self.rows, b.len());
        let f = &self.field;
        let mut aug = Mat::zero(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.get(prow, self.cols).clone();
        }
        Some(x)
    }

    /// Left inverse `L` with `L * self = I` for a matrix of full column
    /// rank. Panics if the columns are dependent.
    pub fn left_inverse(&self) -> Mat<F> {
        let f = &self.field;
        let n = self.rows;
        let k = self.cols;
        let mut aug = Mat::zero(f.clone(), n, k + n);
        for i in 0..n {
            for j in 0..k {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, k + i, f.one());
        }
        // Row-reduce only on the first k columns.
        let mut row = 0;
        for col in 0..k {
            let piv = (row..n)
                .find(|&i| !f.is_zero(aug.get(i, col)))
                .expect("left_inverse: columns are dependent");
            aug.swap_rows(row, piv);
            let inv = f.inv(aug.get(row, col));
            for j in 0..k + n {
                let v = f.mul(aug.get(row, j), &inv);
                aug.set(row, j, v);
            }
            for i in 0..n {
                if i == row || f.is_zero(aug.get(i, col)) {
                    continue;
                }
                let factor = aug.get(i, col).clone();
                for j in 0..k + n {
                    let v = f.sub(aug.get(i, j), &f.mul(&factor, aug.get(row, j)));
                    aug.set(i, j, v);
                }
            }
            row += 1;
        }
        assert_eq!(row, k, "left_inverse: columns are dependent");
        let mut l = Mat::zero(f.clone(), k, n);
        for i in 0..k {
            for j in 0..n {
                l.set(i, j, aug.get(i, k + j).clone());
            }
        }
        l
    }

    pub fn from_columns(field: F, rows: usize, cols: &[Vec<F::Elem>]) -> Mat<F> {
        let mut m = Mat::zero(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }
}

fn sparse_axpy<F: Field>(
    f: &F,
    r: &[(usize, F::Elem)],
    factor: &F::Elem,
    pivot: &[(usize, F::Elem)],
) -> Vec<(usize, F::Elem)> {
    // r - factor * pivot, merged by column.
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < pivot.len() {
        if j == pivot.len() || (i < r.len() && r[i].0 < pivot[j].0) {
            out.push(r[i].clone());
            i += 1;
        } else if i == r.len() || pivot[j].0 < r[i].0 {
            out.push((pivot[j].0, f.neg(&f.mul(factor, &pivot[j].1))));
            j += 1;
        } else {
            let v = f.sub(&r[i].1, &f.mul(factor, &pivot[j].1));
            if !f.is_zero(&v) {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Fraction-free (Bareiss) rank of an integer matrix. Independent of the
/// field elimination path; used to cross-check ranks over ℚ.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(piv) = (row..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        for i in row + 1..m {
            for j in col + 1..n {
                let num = &a[row][col] * &a[i][j] - &a[i][col] * &a[row][j];
                a[i][j] = &num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        assert!(prev.is_positive() || prev.is_negative());
        rank += 1;
        row += 1;
    }
    rank
}
