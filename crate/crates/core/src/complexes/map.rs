use std::collections::BTreeMap;

use super::{homology, ChainComplex, ComplexError};
use crate::field::Field;
use crate::linalg::Matrix;

/// A map raising degree by `shift`, commuting with the differentials up to
/// `(-1)^shift`: `d ∘ f = (-1)^shift f ∘ d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap<F: Field> {
    source: ChainComplex<F>,
    target: ChainComplex<F>,
    shift: i32,
    /// keyed by source degree; absent degrees are zero
    components: BTreeMap<i32, Matrix<F>>,
}

impl<F: Field> ChainMap<F> {
    pub fn new(
        source: ChainComplex<F>,
        target: ChainComplex<F>,
        shift: i32,
        components: BTreeMap<i32, Matrix<F>>,
    ) -> Result<Self, ComplexError> {
        if source.field() != target.field() {
            return Err(ComplexError::FieldMismatch);
        }
        let mut full = BTreeMap::new();
        for q in source.degrees() {
            let expected = (target.dim(q + shift), source.dim(q));
            let m = match components.get(&q) {
                Some(m) => {
                    if m.shape() != expected {
                        return Err(ComplexError::ShapeMismatch {
                            degree: q,
                            expected,
                            found: m.shape(),
                        });
                    }
                    m.clone()
                }
                None => Matrix::zeros(source.field(), expected.0, expected.1),
            };
            full.insert(q, m);
        }
        let map = Self {
            source,
            target,
            shift,
            components: full,
        };
        map.check_commutes()?;
        Ok(map)
    }

    pub fn identity(c: &ChainComplex<F>) -> Self {
        let components = c
            .degrees()
            .map(|q| (q, Matrix::identity(c.field(), c.dim(q))))
            .collect();
        Self::new(c.clone(), c.clone(), 0, components).expect("identity is a chain map")
    }

    pub fn zero(source: &ChainComplex<F>, target: &ChainComplex<F>) -> Self {
        Self::new(source.clone(), target.clone(), 0, BTreeMap::new()).expect("zero map")
    }

    fn check_commutes(&self) -> Result<(), ComplexError> {
        let f = self.source.field();
        let sign = f.sign(self.shift as i64);
        for q in self.source.degrees() {
            let lhs = self.target.differential(q + self.shift).mul(&self.component(q));
            let rhs = self.component(q - 1).mul(&self.source.differential(q)).scale(&sign);
            if lhs != rhs {
                return Err(ComplexError::NotAChainMap { degree: q });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &ChainComplex<F> {
        &self.source
    }
    pub fn target(&self) -> &ChainComplex<F> {
        &self.target
    }
    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Component on source degree `q`, zero-shaped outside the window.
    pub fn component(&self, q: i32) -> Matrix<F> {
        match self.components.get(&q) {
            Some(m) => m.clone(),
            None => Matrix::zeros(
                self.source.field(),
                self.target.dim(q + self.shift),
                self.source.dim(q),
            ),
        }
    }
}

/// Mapping cone of a degree-0 map: `cone_n = target_n ⊕ source_{n-1}` with
/// `d(t, s) = (d t + f s, -d s)`.
pub fn cone<F: Field>(f: &ChainMap<F>) -> Result<ChainComplex<F>, ComplexError> {
    if f.shift != 0 {
        return Err(ComplexError::ShiftNotZero(f.shift));
    }
    let k = f.source.field();
    let (s, t) = (&f.source, &f.target);
    let candidates = [
        (!t.dims.is_empty()).then(|| (t.lo(), t.hi())),
        (!s.dims.is_empty()).then(|| (s.lo() + 1, s.hi() + 1)),
    ];
    let (lo, hi) = candidates
        .iter()
        .flatten()
        .fold(None, |acc: Option<(i32, i32)>, &(a, b)| match acc {
            None => Some((a, b)),
            Some((x, y)) => Some((x.min(a), y.max(b))),
        })
        .unwrap_or((0, -1));
    let dim = |n: i32| t.dim(n) + s.dim(n - 1);
    let dims: Vec<usize> = (lo..=hi).map(dim).collect();
    let minus = k.neg(&k.one());
    let diffs = (lo..=hi)
        .map(|n| {
            let mut m = Matrix::zeros(k, dim(n - 1), dim(n));
            m.paste(0, 0, &t.differential(n));
            m.paste(0, t.dim(n), &f.component(n - 1));
            m.paste(t.dim(n - 1), t.dim(n), &s.differential(n - 1).scale(&minus));
            m
        })
        .collect();
    ChainComplex::from_parts(k, lo, dims, diffs)
}

/// A degree-0 map is a quasi-isomorphism iff its cone is acyclic.
pub fn is_quasi_iso<F: Field>(f: &ChainMap<F>) -> Result<bool, ComplexError> {
    Ok(homology(&cone(f)?).is_acyclic())
}
