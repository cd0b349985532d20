//! Maurer–Cartan calculus over the standard simplex `Δ^n`.
//!
//! A cochain of total degree `t` has, on each `k`-simplex `I = (i_0 < … < i_k)`,
//! a component in `Hom_{t+k}(E_{i_0}, F_{i_k})`. Maurer–Cartan elements have
//! `t = -1` and no vertex components. Sign exponents use the cohomological
//! degree `-t`.
//!
//! ```text
//! (δα)(I)  = d α(I) + (-1)^t Σ_{0<j<k} (-1)^j α(I \ i_j)
//! (φ∘η)(I) = Σ_{j=0}^{k} (-1)^{t_φ j} φ(i_j..i_k) ∘ η(i_0..i_j)
//! D(a)     = δa − (-1)^{t_a} φ∘a + a∘η            for a: (E, η) → (F, φ)
//! ```

mod hom;
mod koszul;
mod object;
mod simplicial;
mod strictify;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::complexes::Chain;
use crate::dgcat::{DgCatError, DgCategory, ObjId};
use crate::field::Field;

pub use hom::{hom_complex_mc, McHomComplex};
pub use koszul::{exterior_contraction_complex, koszul_model};
pub use object::{mc_compose, mc_identity, mc_is_valid, mc_residual, MCMorphism, MCObject};
pub use simplicial::{degeneracy_map, face_map, iota, pullback, pullback_morphism};
pub use strictify::{
    cochain_inverse, gauge_transport, strict_from_chain, strictify, strictify_step, Strictification,
    StrictifyStep,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McError {
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("source and target objects do not match")]
    ObjectMismatch,
    #[error("Maurer–Cartan equation fails on {simplex}")]
    NotMaurerCartan { simplex: MultiIndex },
    #[error("edge ({0}, {1}) is not homotopy invertible")]
    EdgeNotInvertible(usize, usize),
    #[error("degree window [{given_lo}, {given_hi}] does not cover [{needed_lo}, {needed_hi}]")]
    WindowTooSmall {
        needed_lo: i32,
        needed_hi: i32,
        given_lo: i32,
        given_hi: i32,
    },
    #[error("map {0:?} is not a monotone map of finite ordinals")]
    NotMonotone(Vec<usize>),
    #[error("component on {simplex} must vanish for the inductive step")]
    InductiveHypothesisViolated { simplex: MultiIndex },
    #[error("vertex component {vertex} is not closed and strictly invertible")]
    NotStrictlyInvertible { vertex: usize },
    #[error("edge ({0}, {1}) has no strict inverse")]
    RequiresStrictInverses(usize, usize),
    #[error(transparent)]
    Category(#[from] DgCatError),
}

/// A strictly increasing sequence `i_0 < … < i_k`, ordered by length, then
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self, McError> {
        if entries.is_empty() || entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(McError::ShapeError(format!("{entries:?} is not strictly increasing")));
        }
        Ok(Self(entries))
    }

    pub(crate) fn from_sorted(entries: Vec<usize>) -> Self {
        debug_assert!(!entries.is_empty() && entries.windows(2).all(|w| w[0] < w[1]));
        Self(entries)
    }

    pub fn vertex(i: usize) -> Self {
        Self(vec![i])
    }

    pub fn edge(i: usize, j: usize) -> Self {
        Self::new(vec![i, j]).expect("i < j")
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Simplicial level `k` (number of entries minus one).
    pub fn level(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// Entries `i_a ..= i_b`.
    pub fn slice(&self, a: usize, b: usize) -> Self {
        Self(self.0[a..=b].to_vec())
    }

    /// Deletes entry `j`.
    pub fn delete(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(j);
        Self(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// All `k`-simplices of `Δ^n` in lexicographic order.
pub fn simplices(n: usize, k: usize) -> Vec<MultiIndex> {
    (0..=n).combinations(k + 1).map(MultiIndex).collect()
}

/// All simplices of `Δ^n` from level `min_level` up, in basis order.
pub fn all_simplices(n: usize, min_level: usize) -> Vec<MultiIndex> {
    (min_level..=n).flat_map(|k| simplices(n, k)).collect()
}

/// A cochain on `Δ^n` with values in a dg-category. Zero components are not
/// stored, so structural equality is equality of cochains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialCochain<F: Field> {
    n: usize,
    t: i32,
    source: Vec<ObjId>,
    target: Vec<ObjId>,
    components: BTreeMap<MultiIndex, Vec<F::Elem>>,
}

impl<F: Field> SimplicialCochain<F> {
    pub fn zero(n: usize, t: i32, source: Vec<ObjId>, target: Vec<ObjId>) -> Self {
        assert_eq!(source.len(), n + 1);
        assert_eq!(target.len(), n + 1);
        Self {
            n,
            t,
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    /// Checks that every component has the right simplex and dimension.
    pub fn new(
        cat: &DgCategory<F>,
        n: usize,
        t: i32,
        source: Vec<ObjId>,
        target: Vec<ObjId>,
        components: BTreeMap<MultiIndex, Vec<F::Elem>>,
    ) -> Result<Self, McError> {
        if source.len() != n + 1 || target.len() != n + 1 {
            return Err(McError::ShapeError(format!("expected {} vertex objects", n + 1)));
        }
        let count = cat.object_count();
        if source.iter().chain(&target).any(|&o| o >= count) {
            return Err(McError::ShapeError("unknown object".into()));
        }
        let mut c = Self::zero(n, t, source, target);
        for (i, v) in components {
            if i.last() > n {
                return Err(McError::ShapeError(format!("simplex {i} outside Δ^{n}")));
            }
            let expected = c.hom_dim(cat, &i);
            if v.len() != expected {
                return Err(McError::ShapeError(format!(
                    "component on {i} has {} coordinates, expected {expected}",
                    v.len()
                )));
            }
            c.set(cat.field(), i, v);
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total homological degree.
    pub fn degree(&self) -> i32 {
        self.t
    }

    pub fn source(&self) -> &[ObjId] {
        &self.source
    }

    pub fn target(&self) -> &[ObjId] {
        &self.target
    }

    /// Internal degree of the component on a `k`-simplex.
    pub fn internal_degree(&self, i: &MultiIndex) -> i32 {
        self.t + i.level() as i32
    }

    pub fn hom_dim(&self, cat: &DgCategory<F>, i: &MultiIndex) -> usize {
        cat.hom(self.source[i.first()], self.target[i.last()]).dim(self.internal_degree(i))
    }

    /// Nonzero components.
    pub fn components(&self) -> &BTreeMap<MultiIndex, Vec<F::Elem>> {
        &self.components
    }

    pub fn get(&self, cat: &DgCategory<F>, i: &MultiIndex) -> Chain<F> {
        let degree = self.internal_degree(i);
        match self.components.get(i) {
            Some(v) => Chain::new(degree, v.clone()),
            None => Chain::new(degree, vec![cat.field().zero(); self.hom_dim(cat, i)]),
        }
    }

    pub fn set(&mut self, field: &F, i: MultiIndex, v: Vec<F::Elem>) {
        if v.iter().all(|x| field.is_zero(x)) {
            self.components.remove(&i);
        } else {
            self.components.insert(i, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.n == other.n && self.t == other.t && self.source == other.source && self.target == other.target
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    /// `self + s·other`.
    pub fn axpy(&self, field: &F, s: &F::Elem, other: &Self) -> Self {
        assert!(self.same_shape(other), "cochains of different shape");
        let mut out = self.clone();
        for (i, v) in &other.components {
            let cur = out.components.get(i).cloned().unwrap_or_else(|| vec![field.zero(); v.len()]);
            let mut cur = cur;
            crate::linalg::vec_axpy(field, &mut cur, s, v);
            out.set(field, i.clone(), cur);
        }
        out
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        let mut out = Self::zero(self.n, self.t, self.source.clone(), self.target.clone());
        for (i, v) in &self.components {
            out.set(field, i.clone(), crate::linalg::vec_scale(field, s, v));
        }
        out
    }

    /// Restriction along the face spanned by vertices `0..=m`.
    pub fn restrict_front(&self, m: usize) -> Self {
        let mut out = Self::zero(m, self.t, self.source[..=m].to_vec(), self.target[..=m].to_vec());
        for (i, v) in &self.components {
            if i.last() <= m {
                out.components.insert(i.clone(), v.clone());
            }
        }
        out
    }
}

/// Internal part `d` of `δ`, applied componentwise.
pub fn simplicial_d<F: Field>(cat: &DgCategory<F>, a: &SimplicialCochain<F>) -> SimplicialCochain<F> {
    let mut out = SimplicialCochain::zero(a.n, a.t - 1, a.source.clone(), a.target.clone());
    for i in a.components.keys() {
        let (x, y) = (a.source[i.first()], a.target[i.last()]);
        out.set(cat.field(), i.clone(), cat.d(x, y, &a.get(cat, i)).coords);
    }
    out
}

/// Interior-face part `Δ` of `δ`.
pub fn simplicial_face_sum<F: Field>(cat: &DgCategory<F>, a: &SimplicialCochain<F>) -> SimplicialCochain<F> {
    let k = cat.field();
    let mut out = SimplicialCochain::zero(a.n, a.t - 1, a.source.clone(), a.target.clone());
    let outer = k.sign(a.t as i64);
    for i in all_simplices(a.n, 2) {
        let mut acc = vec![k.zero(); out.hom_dim(cat, &i)];
        for j in 1..i.level() {
            if let Some(v) = a.components.get(&i.delete(j)) {
                let s = k.mul(&outer, &k.sign(j as i64));
                crate::linalg::vec_axpy(k, &mut acc, &s, v);
            }
        }
        out.set(k, i, acc);
    }
    out
}

/// `δ = d + Δ`; lowers the total degree by one.
pub fn simplicial_delta<F: Field>(cat: &DgCategory<F>, a: &SimplicialCochain<F>) -> SimplicialCochain<F> {
    simplicial_d(cat, a).add(cat.field(), &simplicial_face_sum(cat, a))
}

/// `φ ∘ η`; requires the targets of `η` to be the sources of `φ`.
pub fn simplicial_compose<F: Field>(
    cat: &DgCategory<F>,
    phi: &SimplicialCochain<F>,
    eta: &SimplicialCochain<F>,
) -> Result<SimplicialCochain<F>, McError> {
    if phi.n != eta.n || phi.source != eta.target {
        return Err(McError::ObjectMismatch);
    }
    let k = cat.field();
    let n = phi.n;
    let mut out = SimplicialCochain::zero(n, phi.t + eta.t, eta.source.clone(), phi.target.clone());
    for i in all_simplices(n, 0) {
        let level = i.level();
        let (x, z) = (eta.source[i.first()], phi.target[i.last()]);
        let mut acc: Option<Vec<F::Elem>> = None;
        for j in 0..=level {
            let (front, back) = (i.slice(0, j), i.slice(j, level));
            let (Some(e), Some(p)) = (eta.components.get(&front), phi.components.get(&back)) else {
                continue;
            };
            let y = eta.target[i.entries()[j]];
            let ec = Chain::new(eta.internal_degree(&front), e.clone());
            let pc = Chain::new(phi.internal_degree(&back), p.clone());
            let prod = cat.compose(x, y, z, &pc, &ec);
            let s = k.sign(phi.t as i64 * j as i64);
            let acc = acc.get_or_insert_with(|| vec![k.zero(); prod.coords.len()]);
            crate::linalg::vec_axpy(k, acc, &s, &prod.coords);
        }
        if let Some(acc) = acc {
            out.set(k, i, acc);
        }
    }
    Ok(out)
}
