//! Dense exact matrices over a prime field, with Gaussian elimination.
//!
//! Elimination uses partial structural pivoting (first nonzero entry).
//! This is the designated hot spot of the crate; see `benches/`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{PrimeField, Scalar};

/// A rows x cols matrix over `k`, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub k: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(k: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            k,
            rows,
            cols,
            data: vec![k.zero(); rows * cols],
        }
    }

    pub fn identity(k: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(k, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = k.one();
        }
        m
    }

    pub fn from_rows(k: PrimeField, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            k,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(
        k: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            k,
            rows,
            cols,
            data,
        }
    }

    /// Column vector from a slice.
    pub fn column(k: PrimeField, v: &[Scalar]) -> Self {
        Matrix {
            k,
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        *self.at(i, j) == self.k.one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.k, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = a.add(b, &self.k);
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a = a.sub(b, &self.k);
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.neg(&self.k);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.mul(c, &self.k);
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product shape {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let k = self.k;
        let mut out = Matrix::zeros(k, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b, &k);
                    let cur = out.at(i, j).add(&prod, &k);
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let k = self.k;
        let mut out = vec![k.zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = k.zero();
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&v[j], &k), &k);
            }
            out[i] = acc;
        }
        out
    }

    /// Kronecker product; (i1*r2+i2, j1*c2+j2) entry is a[i1,j1]*b[i2,j2].
    pub fn kronecker(&self, rhs: &Matrix) -> Matrix {
        let k = self.k;
        Matrix::from_fn(
            k,
            self.rows * rhs.rows,
            self.cols * rhs.cols,
            |i, j| {
                let (i1, i2) = (i / rhs.rows, i % rhs.rows);
                let (j1, j2) = (j / rhs.cols, j % rhs.cols);
                self.at(i1, j1).mul(rhs.at(i2, j2), &k)
            },
        )
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        Matrix::from_fn(self.k, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                rhs.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        Matrix::from_fn(self.k, self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                rhs.at(i - self.rows, j).clone()
            }
        })
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let k = self.k;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            // structural pivoting: first row with a nonzero entry in column c
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.at(r, c).inv(&k).expect("pivot nonzero");
            for j in c..self.cols {
                let v = self.at(r, j).mul(&inv, &k);
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = self.at(i, j).sub(&f.mul(self.at(r, j), &k), &k);
                    *self.at_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
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
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel { v : A v = 0 }.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let k = self.k;
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![k.zero(); self.cols];
            v[free] = k.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m.at(r, free).neg(&k);
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        pivots.into_iter().map(|c| self.col(c)).collect()
    }

    /// One solution of A x = b, or `Error::NoSolution`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let sol = self.solve_matrix(&Matrix::column(self.k, b))?;
        Ok(sol.col(0))
    }

    /// Solve A X = B for all columns of B at once (one elimination pass).
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix> {
        if b.rows() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.rows(),
            });
        }
        let k = self.k;
        let mut aug = self.hstack(b);
        let pivots = aug.rref_in_place();
        // any pivot in the augmented block means inconsistency
        if pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = Matrix::zeros(k, self.cols, b.cols());
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                *x.at_mut(c, j) = aug.at(r, self.cols + j).clone();
            }
        }
        Ok(x)
    }

    /// Two-sided inverse, or `Error::NoSolution` if singular.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::Internal("inverse of non-square matrix".to_string()));
        }
        let inv = self.solve_matrix(&Matrix::identity(self.k, self.rows))?;
        if self.mul(&inv).is_identity() {
            Ok(inv)
        } else {
            Err(Error::NoSolution)
        }
    }
}

/// A subspace of k^n in reduced echelon form; supports membership tests
/// and coordinates with respect to the echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub k: PrimeField,
    pub ambient: usize,
    /// Echelon basis, one row per basis vector.
    pub basis: Matrix,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_span(k: PrimeField, ambient: usize, span: &[Vec<Scalar>]) -> Self {
        let mut m = if span.is_empty() {
            Matrix::zeros(k, 0, ambient)
        } else {
            Matrix::from_rows(k, span.to_vec())
        };
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        let basis = Matrix::from_fn(k, rank, ambient, |i, j| m.at(i, j).clone());
        Subspace {
            k,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of v in the echelon basis, if v lies in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        // with a reduced echelon basis the coefficient of row i is v[pivot_i]
        let coeffs: Vec<Scalar> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let mut rec = vec![self.k.zero(); self.ambient];
        for (i, c) in coeffs.iter().enumerate() {
            for j in 0..self.ambient {
                rec[j] = rec[j].add(&c.mul(self.basis.at(i, j), &self.k), &self.k);
            }
        }
        if rec == v {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }
}

/// The quotient k^n / W with an explicit projection and a section.
///
/// The quotient basis is the set of coordinates that are not pivot columns
/// of W's echelon form, so bases are reproducible bit for bit.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub k: PrimeField,
    pub ambient: usize,
    sub: Subspace,
    free_cols: Vec<usize>,
}

impl Quotient {
    pub fn by_span(k: PrimeField, ambient: usize, span: &[Vec<Scalar>]) -> Self {
        let sub = Subspace::from_span(k, ambient, span);
        let mut is_pivot = vec![false; ambient];
        for &c in &sub.pivots {
            is_pivot[c] = true;
        }
        let free_cols = (0..ambient).filter(|&c| !is_pivot[c]).collect();
        Quotient {
            k,
            ambient,
            sub,
            free_cols,
        }
    }

    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    /// Image of v in the quotient.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let k = self.k;
        // reduce v modulo the echelon rows, then read off free coordinates
        let mut w = v.to_vec();
        for (i, &p) in self.sub.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for j in 0..self.ambient {
                w[j] = w[j].sub(&f.mul(self.sub.basis.at(i, j), &k), &k);
            }
        }
        self.free_cols.iter().map(|&c| w[c].clone()).collect()
    }

    /// Canonical representative of a quotient element.
    pub fn lift(&self, q: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(q.len(), self.dim());
        let mut v = vec![self.k.zero(); self.ambient];
        for (i, &c) in self.free_cols.iter().enumerate() {
            v[c] = q[i].clone();
        }
        v
    }

    /// The projection as a dim x ambient matrix.
    pub fn projection_matrix(&self) -> Matrix {
        let k = self.k;
        let mut e = vec![k.zero(); self.ambient];
        let mut out = Matrix::zeros(k, self.dim(), self.ambient);
        for j in 0..self.ambient {
            e[j] = k.one();
            let p = self.project(&e);
            for i in 0..self.dim() {
                *out.at_mut(i, j) = p[i].clone();
            }
            e[j] = k.zero();
        }
        out
    }

    /// The section as an ambient x dim matrix.
    pub fn lift_matrix(&self) -> Matrix {
        let k = self.k;
        let mut out = Matrix::zeros(k, self.ambient, self.dim());
        for (i, &c) in self.free_cols.iter().enumerate() {
            *out.at_mut(c, i) = k.one();
        }
        out
    }
}

/// Map a k-linear map `f : k^a -> k^b` through quotients on both sides:
/// returns the induced matrix `target.project . f . source.lift`.
/// Callers are responsible for `f` descending to the source quotient.
pub fn induced_on_quotients(f: &Matrix, source: &Quotient, target: &Quotient) -> Matrix {
    target
        .projection_matrix()
        .mul(f)
        .mul(&source.lift_matrix())
}
