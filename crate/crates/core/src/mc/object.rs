use std::sync::Arc;

use super::{
    simplicial_compose, simplicial_delta, McError, MultiIndex, SimplicialCochain,
};
use crate::dgcat::{is_homotopy_invertible, DgCategory, InvertibilityCertificate, ObjId};
use crate::field::Field;

/// `δη + η∘η` for a cochain of total degree −1.
pub fn mc_residual<F: Field>(
    cat: &DgCategory<F>,
    eta: &SimplicialCochain<F>,
) -> Result<SimplicialCochain<F>, McError> {
    check_mc_shape(eta)?;
    let sq = simplicial_compose(cat, eta, eta)?;
    Ok(simplicial_delta(cat, eta).add(cat.field(), &sq))
}

fn check_mc_shape<F: Field>(eta: &SimplicialCochain<F>) -> Result<(), McError> {
    if eta.degree() != -1 {
        return Err(McError::ShapeError(format!("total degree {} instead of -1", eta.degree())));
    }
    if eta.source() != eta.target() {
        return Err(McError::ShapeError("source and target objects differ".into()));
    }
    if let Some(i) = eta.components().keys().find(|i| i.level() == 0) {
        return Err(McError::ShapeError(format!("vertex component on {i}")));
    }
    Ok(())
}

/// Residual vanishes and every edge `η(i, i+1)` is homotopy invertible.
pub fn mc_is_valid<F: Field>(cat: &DgCategory<F>, eta: &SimplicialCochain<F>) -> bool {
    validate(cat, eta).is_ok()
}

fn validate<F: Field>(
    cat: &DgCategory<F>,
    eta: &SimplicialCochain<F>,
) -> Result<Vec<InvertibilityCertificate<F>>, McError> {
    let residual = mc_residual(cat, eta)?;
    if let Some(i) = residual.components().keys().next() {
        return Err(McError::NotMaurerCartan { simplex: i.clone() });
    }
    (0..eta.n())
        .map(|i| {
            let e = MultiIndex::edge(i, i + 1);
            let objs = eta.source();
            is_homotopy_invertible(cat, objs[i], objs[i + 1], &eta.get(cat, &e))?
                .certificate()
                .cloned()
                .ok_or(McError::EdgeNotInvertible(i, i + 1))
        })
        .collect()
}

/// An object `(E, η)` of the simplicial resolution at level `n`.
#[derive(Debug, Clone)]
pub struct MCObject<F: Field> {
    cat: Arc<DgCategory<F>>,
    eta: SimplicialCochain<F>,
    certificates: Vec<InvertibilityCertificate<F>>,
}

impl<F: Field> PartialEq for MCObject<F> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.cat, &other.cat) || *self.cat == *other.cat) && self.eta == other.eta
    }
}

impl<F: Field> MCObject<F> {
    /// Verifies the MC equation and edge invertibility.
    pub fn new(cat: Arc<DgCategory<F>>, eta: SimplicialCochain<F>) -> Result<Self, McError> {
        let certificates = validate(&cat, &eta)?;
        Ok(Self {
            cat,
            eta,
            certificates,
        })
    }

    /// Level-0 object: a single object of the category.
    pub fn point(cat: Arc<DgCategory<F>>, e: ObjId) -> Self {
        let eta = SimplicialCochain::zero(0, -1, vec![e], vec![e]);
        Self::new(cat, eta).expect("a point is Maurer–Cartan")
    }

    pub fn category(&self) -> &Arc<DgCategory<F>> {
        &self.cat
    }

    pub fn n(&self) -> usize {
        self.eta.n()
    }

    pub fn objects(&self) -> &[ObjId] {
        self.eta.source()
    }

    pub fn eta(&self) -> &SimplicialCochain<F> {
        &self.eta
    }

    /// Certificates for the edges `(i, i+1)`.
    pub fn certificates(&self) -> &[InvertibilityCertificate<F>] {
        &self.certificates
    }

    /// No components above level one.
    pub fn is_strict(&self) -> bool {
        self.eta.components().keys().all(|i| i.level() <= 1)
    }
}

/// A homogeneous morphism `a: (E, η) → (F, φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MCMorphism<F: Field> {
    source: MCObject<F>,
    target: MCObject<F>,
    a: SimplicialCochain<F>,
}

impl<F: Field> MCMorphism<F> {
    pub fn new(source: MCObject<F>, target: MCObject<F>, a: SimplicialCochain<F>) -> Result<Self, McError> {
        if source.n() != target.n() || a.n() != source.n() {
            return Err(McError::ShapeError("levels differ".into()));
        }
        if a.source() != source.objects() || a.target() != target.objects() {
            return Err(McError::ObjectMismatch);
        }
        if !Arc::ptr_eq(&source.cat, &target.cat) && *source.cat != *target.cat {
            return Err(McError::ObjectMismatch);
        }
        Ok(Self { source, target, a })
    }

    pub fn zero(source: &MCObject<F>, target: &MCObject<F>, degree: i32) -> Self {
        let a = SimplicialCochain::zero(
            source.n(),
            degree,
            source.objects().to_vec(),
            target.objects().to_vec(),
        );
        Self::new(source.clone(), target.clone(), a).expect("matching shapes")
    }

    pub fn source(&self) -> &MCObject<F> {
        &self.source
    }

    pub fn target(&self) -> &MCObject<F> {
        &self.target
    }

    pub fn cochain(&self) -> &SimplicialCochain<F> {
        &self.a
    }

    pub fn degree(&self) -> i32 {
        self.a.degree()
    }

    fn cat(&self) -> &DgCategory<F> {
        &self.source.cat
    }

    /// `D(a) = δa − (-1)^{t} φ∘a + a∘η`.
    pub fn differential(&self) -> Self {
        let cat = self.cat();
        let k = cat.field();
        let delta = simplicial_delta(cat, &self.a);
        let left = simplicial_compose(cat, self.target.eta(), &self.a).expect("composable");
        let right = simplicial_compose(cat, &self.a, self.source.eta()).expect("composable");
        let s = k.neg(&k.sign(self.a.degree() as i64));
        let a = delta.axpy(k, &s, &left).add(k, &right);
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            a,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().a.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            a: self.a.add(self.cat().field(), &other.a),
        }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            a: self.a.scale(self.cat().field(), s),
        }
    }

    /// Components on simplices of positive level negated.
    pub(crate) fn negate_positive_levels(&self) -> SimplicialCochain<F> {
        let k = self.cat().field();
        let mut out = self.a.clone();
        for (i, v) in self.a.components() {
            if i.level() > 0 {
                out.set(k, i.clone(), crate::linalg::vec_scale(k, &k.neg(&k.one()), v));
            }
        }
        out
    }
}

/// Identity: units at the vertices, zero above.
pub fn mc_identity<F: Field>(x: &MCObject<F>) -> MCMorphism<F> {
    let cat = &x.cat;
    let mut a = SimplicialCochain::zero(x.n(), 0, x.objects().to_vec(), x.objects().to_vec());
    for (i, &e) in x.objects().iter().enumerate() {
        a.set(cat.field(), MultiIndex::vertex(i), cat.unit(e).coords);
    }
    MCMorphism::new(x.clone(), x.clone(), a).expect("identity shape")
}

/// `b ∘ a`.
pub fn mc_compose<F: Field>(b: &MCMorphism<F>, a: &MCMorphism<F>) -> Result<MCMorphism<F>, McError> {
    if a.target != b.source {
        return Err(McError::ObjectMismatch);
    }
    let c = simplicial_compose(a.cat(), &b.a, &a.a)?;
    MCMorphism::new(a.source.clone(), b.target.clone(), c)
}
