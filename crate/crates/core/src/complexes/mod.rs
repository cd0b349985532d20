//! Bounded, finitely generated chain complexes over an exact field.
//!
//! Differentials lower degree by one. Every complex carries an explicit degree
//! window; outside the window all chain groups vanish. Within a degree the
//! basis order is the order supplied by whoever built the complex, and every
//! reported matrix is written in that basis.

mod homology;
mod map;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;

pub use homology::{homology, HomologyReport};
pub use map::{cone, is_quasi_iso, ChainMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential at degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        degree: i32,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("d∘d is nonzero at degree {degree}")]
    NotSquareZero { degree: i32 },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("chain map does not commute with the differentials at degree {degree}")]
    NotAChainMap { degree: i32 },
    #[error("operation requires a degree-0 chain map, got shift {0}")]
    ShiftNotZero(i32),
}

/// A homogeneous chain: a coordinate vector in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain<F: Field> {
    pub degree: i32,
    pub coords: Vec<F::Elem>,
}

impl<F: Field> Chain<F> {
    pub fn new(degree: i32, coords: Vec<F::Elem>) -> Self {
        Self { degree, coords }
    }

    pub fn zero(c: &ChainComplex<F>, degree: i32) -> Self {
        Self::new(degree, vec![c.field().zero(); c.dim(degree)])
    }

    pub fn is_zero(&self, f: &F) -> bool {
        self.coords.iter().all(|x| f.is_zero(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex<F: Field> {
    field: F,
    lo: i32,
    dims: Vec<usize>,
    /// `diffs[i]` maps degree `lo + i` to degree `lo + i - 1`.
    diffs: Vec<Matrix<F>>,
}

/// Builds and validates a complex from per-degree dimensions and differentials.
///
/// `dims` fixes the degree window (from its smallest to largest key; missing
/// degrees in between have dimension 0). A differential absent from
/// `differentials` is zero.
pub fn make_complex<F: Field>(
    field: &F,
    dims: &BTreeMap<i32, usize>,
    differentials: BTreeMap<i32, Matrix<F>>,
) -> Result<ChainComplex<F>, ComplexError> {
    let (lo, hi) = match (dims.keys().next(), dims.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, -1),
    };
    let dim_vec: Vec<usize> = (lo..=hi).map(|q| dims.get(&q).copied().unwrap_or(0)).collect();
    let mut diffs: Vec<Option<Matrix<F>>> = vec![None; dim_vec.len()];
    for (q, m) in differentials {
        if m.field() != field {
            return Err(ComplexError::FieldMismatch);
        }
        let expected = (dim_at(lo, &dim_vec, q - 1), dim_at(lo, &dim_vec, q));
        if m.shape() != expected {
            return Err(ComplexError::ShapeMismatch {
                degree: q,
                expected,
                found: m.shape(),
            });
        }
        if q < lo || q > hi {
            // Shape check above forces this to be an empty matrix.
            continue;
        }
        diffs[(q - lo) as usize] = Some(m);
    }
    let diffs = diffs
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.unwrap_or_else(|| {
                let q = lo + i as i32;
                Matrix::zeros(field, dim_at(lo, &dim_vec, q - 1), dim_at(lo, &dim_vec, q))
            })
        })
        .collect();
    ChainComplex::from_parts(field, lo, dim_vec, diffs)
}

fn dim_at(lo: i32, dims: &[usize], q: i32) -> usize {
    if q < lo {
        return 0;
    }
    dims.get((q - lo) as usize).copied().unwrap_or(0)
}

impl<F: Field> ChainComplex<F> {
    /// Validating constructor from a contiguous window starting at `lo`.
    pub fn from_parts(
        field: &F,
        lo: i32,
        dims: Vec<usize>,
        diffs: Vec<Matrix<F>>,
    ) -> Result<Self, ComplexError> {
        assert_eq!(dims.len(), diffs.len(), "one differential per degree");
        for (i, m) in diffs.iter().enumerate() {
            let q = lo + i as i32;
            let expected = (dim_at(lo, &dims, q - 1), dims[i]);
            if m.shape() != expected {
                return Err(ComplexError::ShapeMismatch {
                    degree: q,
                    expected,
                    found: m.shape(),
                });
            }
            if m.field() != field {
                return Err(ComplexError::FieldMismatch);
            }
        }
        let c = Self {
            field: field.clone(),
            lo,
            dims,
            diffs,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    /// The complex with no chains.
    pub fn zero(field: &F) -> Self {
        Self {
            field: field.clone(),
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `dim` copies of the field in a single degree.
    pub fn concentrated(field: &F, degree: i32, dim: usize) -> Self {
        Self {
            field: field.clone(),
            lo: degree,
            dims: vec![dim],
            diffs: vec![Matrix::zeros(field, 0, dim)],
        }
    }

    /// First degree in which `d_{q-1} d_q` fails to vanish.
    fn check_square_zero(&self) -> Result<(), ComplexError> {
        for q in self.degrees() {
            let dq = self.differential(q);
            let dq1 = self.differential(q - 1);
            if dq.rows() > 0 && dq1.rows() > 0 && !dq1.mul(&dq).is_zero() {
                return Err(ComplexError::NotSquareZero { degree: q });
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Lowest degree of the window.
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree of the window (`lo - 1` when empty).
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, q: i32) -> usize {
        dim_at(self.lo, &self.dims, q)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Nonzero dimensions only.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees()
            .filter(|&q| self.dim(q) > 0)
            .map(|q| (q, self.dim(q)))
            .collect()
    }

    /// `d_q : C_q -> C_{q-1}`, zero-shaped outside the window.
    pub fn differential(&self, q: i32) -> Matrix<F> {
        if q < self.lo || q > self.hi() {
            return Matrix::zeros(&self.field, self.dim(q - 1), self.dim(q));
        }
        self.diffs[(q - self.lo) as usize].clone()
    }

    pub fn differential_ref(&self, q: i32) -> Option<&Matrix<F>> {
        if q < self.lo || q > self.hi() {
            None
        } else {
            Some(&self.diffs[(q - self.lo) as usize])
        }
    }

    /// Applies the differential to a homogeneous chain.
    pub fn d(&self, c: &Chain<F>) -> Chain<F> {
        assert_eq!(c.coords.len(), self.dim(c.degree), "chain dimension");
        let coords = match self.differential_ref(c.degree) {
            Some(m) => m.apply(&c.coords),
            None => vec![self.field.zero(); self.dim(c.degree - 1)],
        };
        Chain::new(c.degree - 1, coords)
    }

    /// Offset of degree `q` in the global basis (all degrees stacked in
    /// increasing order).
    pub fn offset(&self, q: i32) -> usize {
        (self.lo..q).map(|p| self.dim(p)).sum()
    }

    /// Degree and local index of a global basis index.
    pub fn locate(&self, global: usize) -> (i32, usize) {
        let mut rest = global;
        for q in self.degrees() {
            let d = self.dim(q);
            if rest < d {
                return (q, rest);
            }
            rest -= d;
        }
        panic!("basis index {global} out of range");
    }

    pub fn is_acyclic(&self) -> bool {
        homology(self).ranks.values().all(|&r| r == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|q| if q.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(q) as i64)
            .sum()
    }
}

/// `c[k]`: the chain group in degree `q + k` is `c_q`; the differential is
/// multiplied by `(-1)^k`.
pub fn shift<F: Field>(c: &ChainComplex<F>, k: i32) -> ChainComplex<F> {
    let s = c.field.sign(k as i64);
    ChainComplex {
        field: c.field.clone(),
        lo: c.lo + k,
        dims: c.dims.clone(),
        diffs: c.diffs.iter().map(|m| m.scale(&s)).collect(),
    }
}

pub fn direct_sum<F: Field>(
    a: &ChainComplex<F>,
    b: &ChainComplex<F>,
) -> Result<ChainComplex<F>, ComplexError> {
    if a.field != b.field {
        return Err(ComplexError::FieldMismatch);
    }
    let f = &a.field;
    let (lo, hi) = union_window(a, b);
    let dims: Vec<usize> = (lo..=hi).map(|q| a.dim(q) + b.dim(q)).collect();
    let diffs = (lo..=hi)
        .map(|q| Matrix::block_diagonal(f, &[&a.differential(q), &b.differential(q)]))
        .collect();
    ChainComplex::from_parts(f, lo, dims, diffs)
}

fn union_window<F: Field>(a: &ChainComplex<F>, b: &ChainComplex<F>) -> (i32, i32) {
    match (a.dims.is_empty(), b.dims.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        (false, false) => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

/// Tensor product with basis ordered by `(left degree, left index, right index)`
/// and differential `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
pub fn tensor<F: Field>(
    a: &ChainComplex<F>,
    b: &ChainComplex<F>,
) -> Result<ChainComplex<F>, ComplexError> {
    if a.field != b.field {
        return Err(ComplexError::FieldMismatch);
    }
    let f = &a.field;
    if a.dims.is_empty() || b.dims.is_empty() {
        return Ok(ChainComplex::zero(f));
    }
    let lo = a.lo + b.lo;
    let hi = a.hi() + b.hi();
    // offsets[(n, p)] = start of the block a_p ⊗ b_{n-p} inside degree n
    let block_offset = |n: i32, p: i32| -> usize {
        (a.lo..p).map(|p2| a.dim(p2) * b.dim(n - p2)).sum()
    };
    let dims: Vec<usize> = (lo..=hi)
        .map(|n| a.degrees().map(|p| a.dim(p) * b.dim(n - p)).sum())
        .collect();
    let mut diffs = Vec::new();
    for n in lo..=hi {
        let mut m = Matrix::zeros(f, dim_at(lo, &dims, n - 1), dim_at(lo, &dims, n));
        for p in a.degrees() {
            let q = n - p;
            let (da, db) = (a.dim(p), b.dim(q));
            if da == 0 || db == 0 {
                continue;
            }
            let src = block_offset(n, p);
            let sign = f.sign(p as i64);
            let dif_a = a.differential(p);
            let dif_b = b.differential(q);
            for i in 0..da {
                for j in 0..db {
                    let col = src + i * db + j;
                    // dx ⊗ y lands in block (p-1, q)
                    if a.dim(p - 1) > 0 {
                        let tgt = block_offset(n - 1, p - 1);
                        for r in 0..a.dim(p - 1) {
                            let v = dif_a.get(r, i);
                            if !f.is_zero(v) {
                                m.add_at(tgt + r * db + j, col, v);
                            }
                        }
                    }
                    // x ⊗ dy lands in block (p, q-1)
                    if b.dim(q - 1) > 0 {
                        let tgt = block_offset(n - 1, p);
                        let db1 = b.dim(q - 1);
                        for s in 0..db1 {
                            let v = dif_b.get(s, j);
                            if !f.is_zero(v) {
                                m.add_at(tgt + i * db1 + s, col, &f.mul(&sign, v));
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    ChainComplex::from_parts(f, lo, dims, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn interval<F: Field>(f: &F) -> ChainComplex<F> {
        // 0 -> k -(id)-> k -> 0 in degrees 1, 0
        make_complex(
            f,
            &BTreeMap::from([(0, 1), (1, 1)]),
            BTreeMap::from([(1, Matrix::from_i64(f, 1, 1, &[1]))]),
        )
        .unwrap()
    }

    #[test]
    fn make_complex_examples() {
        let q = Rationals;
        let c = interval(&q);
        assert!(c.is_acyclic());
        let d = make_complex(&q, &BTreeMap::from([(0, 2)]), BTreeMap::new()).unwrap();
        assert_eq!(d.dims(), BTreeMap::from([(0, 2)]));
        let err = make_complex(
            &q,
            &BTreeMap::from([(0, 1), (1, 1), (2, 1)]),
            BTreeMap::from([
                (1, Matrix::from_i64(&q, 1, 1, &[1])),
                (2, Matrix::from_i64(&q, 1, 1, &[1])),
            ]),
        )
        .unwrap_err();
        assert_eq!(err, ComplexError::NotSquareZero { degree: 2 });
    }

    #[test]
    fn shape_mismatch_reported() {
        let q = Rationals;
        let err = make_complex(
            &q,
            &BTreeMap::from([(0, 1), (1, 2)]),
            BTreeMap::from([(1, Matrix::from_i64(&q, 1, 1, &[1]))]),
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::ShapeMismatch { degree: 1, .. }));
    }

    #[test]
    fn shift_and_unit_tensor() {
        let q = Rationals;
        let k0 = ChainComplex::concentrated(&q, 0, 1);
        assert_eq!(shift(&k0, 1).dims(), BTreeMap::from([(1, 1)]));
        let c = interval(&q);
        let t = tensor(&k0, &c).unwrap();
        assert_eq!(t, c);
    }

    #[test]
    fn tensor_of_acyclic_is_acyclic() {
        let f = PrimeField::new(5).unwrap();
        let c = interval(&f);
        let t = tensor(&c, &c).unwrap();
        assert_eq!(t.total_dim(), 4);
        assert!(homology(&t).ranks.values().all(|&r| r == 0));
    }

    #[test]
    fn field_mismatch() {
        let a = ChainComplex::concentrated(&PrimeField::new(5).unwrap(), 0, 1);
        let b = ChainComplex::concentrated(&PrimeField::new(7).unwrap(), 0, 1);
        assert_eq!(tensor(&a, &b).unwrap_err(), ComplexError::FieldMismatch);
        assert_eq!(direct_sum(&a, &b).unwrap_err(), ComplexError::FieldMismatch);
    }
}
