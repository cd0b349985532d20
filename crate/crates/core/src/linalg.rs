//! Dense exact matrices and Gaussian elimination.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.field.format(self.get(r, c)))?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_i64(field: &F, rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::from_rows(field, rows, cols, data.iter().map(|&v| field.from_i64(v)).collect())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &F::Elem) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(&self.data[i], v);
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Self {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f.mul(s, x)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix add shape");
        let f = &self.field;
        Self {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix mul shape");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !f.is_zero(b) {
                        out.add_at(r, c, &f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "matrix apply shape");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Block-diagonal placement of `blocks` into a fresh matrix.
    pub fn block_diagonal(field: &F, blocks: &[&Matrix<F>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Copies `b` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, b: &Matrix<F>) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    /// Reduced row echelon form; returns the reduced matrix and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(None);
        (m, pivots)
    }

    /// Row-reduces in place, applying every row operation to `companion` too.
    fn rref_in_place(&mut self, mut companion: Option<&mut Matrix<F>>) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !f.is_zero(self.get(r, col))) else {
                continue;
            };
            self.swap_rows(row, p);
            if let Some(c) = companion.as_deref_mut() {
                c.swap_rows(row, p);
            }
            let inv = f.inv(self.get(row, col)).expect("nonzero pivot");
            self.scale_row(row, &inv);
            if let Some(c) = companion.as_deref_mut() {
                c.scale_row(row, &inv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let neg = f.neg(&factor);
                self.axpy_row(r, row, &neg);
                if let Some(c) = companion.as_deref_mut() {
                    c.axpy_row(r, row, &neg);
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
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &F::Elem) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = self.field.mul(&self.data[i], s);
        }
    }

    /// row[dst] += s * row[src]
    fn axpy_row(&mut self, dst: usize, src: usize, s: &F::Elem) {
        for c in 0..self.cols {
            let v = self.data[src * self.cols + c].clone();
            if self.field.is_zero(&v) {
                continue;
            }
            let i = dst * self.cols + c;
            self.data[i] = self.field.add(&self.data[i], &self.field.mul(s, &v));
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of the null space `{v : self * v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution `x` of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        aug.paste(0, 0, self);
        for (r, v) in b.iter().enumerate() {
            aug.set(r, self.cols, v.clone());
        }
        let pivots = aug.rref_in_place(None);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// A left inverse `L` with `L * self = I`, for a matrix of full column rank.
    pub fn left_inverse(&self) -> Option<Self> {
        let f = &self.field;
        let mut m = self.clone();
        let mut t = Self::identity(f, self.rows);
        let pivots = m.rref_in_place(Some(&mut t));
        if pivots.len() != self.cols {
            return None;
        }
        let mut l = Self::zeros(f, self.cols, self.rows);
        for i in 0..self.cols {
            for c in 0..self.rows {
                l.set(i, c, t.get(i, c).clone());
            }
        }
        Some(l)
    }

    /// Two-sided inverse of a square matrix.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        self.left_inverse()
    }

    pub fn random<R: rand::Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self::from_rows(field, rows, cols, data)
    }
}

/// Componentwise helpers for coordinate vectors.
pub fn vec_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.len(), b.len(), "vector add length");
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn vec_scale<F: Field>(f: &F, s: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(s, x)).collect()
}

pub fn vec_is_zero<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    a.iter().all(|x| f.is_zero(x))
}

/// `acc += s * v`
pub fn vec_axpy<F: Field>(f: &F, acc: &mut [F::Elem], s: &F::Elem, v: &[F::Elem]) {
    assert_eq!(acc.len(), v.len(), "axpy length");
    if f.is_zero(s) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !f.is_zero(x) {
            *a = f.add(a, &f.mul(s, x));
        }
    }
}
