//! Finite dg-categories given by hom complexes and structure constants.
//!
//! Sign convention: composition is written backwards (`g ∘ f` means first `f`,
//! then `g`) and the differential obeys
//!
//! ```text
//! d(g ∘ f) = (-1)^{|f|} dg ∘ f + g ∘ df
//! ```
//!
//! This is the rule under which the simplicial calculus in [`crate::mc`]
//! satisfies its Leibniz identity. Degrees are homological.

mod complexes_cat;
mod fixtures;
mod functor;
mod h0;
mod quasi;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use thiserror::Error;

use crate::complexes::{homology, Chain, ChainComplex, HomologyReport};
use crate::field::Field;

pub use complexes_cat::complexes_category;
pub use fixtures::{fixture, Fixture};
pub use functor::DgFunctor;
pub use h0::{
    is_homotopy_invertible, strict_inverse, h0_category, H0Category, Invertibility,
    InvertibilityCertificate,
};
pub use quasi::{is_quasi_equivalence, EssentialVerdict, QuasiEquivalenceReport, Verdict};

pub type ObjId = usize;

/// A basis element of a hom complex, used to report witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisRef {
    pub source: ObjId,
    pub target: ObjId,
    pub degree: i32,
    pub index: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgCatError {
    #[error("Leibniz rule fails for g = {g:?}, f = {f:?}")]
    LeibnizViolation { g: BasisRef, f: BasisRef },
    #[error("associativity fails for h = {h:?}, g = {g:?}, f = {f:?}")]
    AssociativityViolation { h: BasisRef, g: BasisRef, f: BasisRef },
    #[error("unit law fails for object {object} (witness {witness:?})")]
    UnitViolation { object: ObjId, witness: Option<BasisRef> },
    #[error("structure constant for g = {g:?}, f = {f:?} lands outside degree {expected_degree}")]
    DegreeViolation { g: BasisRef, f: BasisRef, expected_degree: i32 },
    #[error("hom complexes live over different fields")]
    FieldMismatch,
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("morphism is not closed")]
    NotClosed,
    #[error("morphism has degree {0}, expected 0")]
    WrongDegree(i32),
    #[error("functor does not preserve {what} (witness {witness:?})")]
    FunctorViolation { what: &'static str, witness: Option<BasisRef> },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error(transparent)]
    Complex(#[from] crate::complexes::ComplexError),
}

/// Sparse structure constants keyed by `(x, y, z)` and global basis indices
/// `(g in Hom(y, z), f in Hom(x, y))`; values are sparse vectors in `Hom(x, z)`.
pub type ProductTable<F> =
    HashMap<(ObjId, ObjId, ObjId), HashMap<(usize, usize), Vec<(usize, <F as Field>::Elem)>>>;

#[derive(Debug, Clone)]
pub struct DgCategory<F: Field> {
    field: F,
    objects: Vec<String>,
    homs: Vec<ChainComplex<F>>,
    units: Vec<Vec<F::Elem>>,
    products: ProductTable<F>,
    homology_cache: Vec<OnceLock<HomologyReport<F>>>,
}

/// Incremental description of a dg-category, validated by [`make_dgcat`].
#[derive(Debug, Clone)]
pub struct DgCategoryBuilder<F: Field> {
    field: F,
    objects: Vec<String>,
    homs: BTreeMap<(ObjId, ObjId), ChainComplex<F>>,
    units: BTreeMap<ObjId, Vec<F::Elem>>,
    products: ProductTable<F>,
}

impl<F: Field> DgCategoryBuilder<F> {
    pub fn new(field: &F, objects: &[&str]) -> Self {
        Self {
            field: field.clone(),
            objects: objects.iter().map(|s| s.to_string()).collect(),
            homs: BTreeMap::new(),
            units: BTreeMap::new(),
            products: HashMap::new(),
        }
    }

    pub fn with_objects(field: &F, objects: Vec<String>) -> Self {
        Self {
            field: field.clone(),
            objects,
            homs: BTreeMap::new(),
            units: BTreeMap::new(),
            products: HashMap::new(),
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> Option<&ChainComplex<F>> {
        self.homs.get(&(x, y))
    }

    pub fn set_hom(&mut self, x: ObjId, y: ObjId, c: ChainComplex<F>) -> &mut Self {
        self.homs.insert((x, y), c);
        self
    }

    pub fn set_unit(&mut self, x: ObjId, coords: Vec<F::Elem>) -> &mut Self {
        self.units.insert(x, coords);
        self
    }

    /// Sets the unit of `x` to the degree-0 basis vector `index` of `End(x)`
    /// and fills in the unit products with every basis element.
    pub fn set_unit_basis(&mut self, x: ObjId, index: usize) -> &mut Self {
        let f = self.field.clone();
        let end = self.homs.get(&(x, x)).cloned().unwrap_or_else(|| ChainComplex::zero(&f));
        let mut coords = vec![f.zero(); end.dim(0)];
        coords[index] = f.one();
        self.units.insert(x, coords);
        let id = end.offset(0) + index;
        for y in 0..self.objects.len() {
            if let Some(h) = self.homs.get(&(x, y)).cloned() {
                for j in 0..h.total_dim() {
                    // f ∘ id_x = f for f in Hom(x, y)
                    self.set_product(x, x, y, j, id, vec![(j, f.one())]);
                }
            }
            if let Some(h) = self.homs.get(&(y, x)).cloned() {
                for j in 0..h.total_dim() {
                    // id_x ∘ f = f for f in Hom(y, x)
                    self.set_product(y, x, x, id, j, vec![(j, f.one())]);
                }
            }
        }
        self
    }

    /// Product `g ∘ f` of global basis elements `g ∈ Hom(y, z)`, `f ∈ Hom(x, y)`.
    pub fn set_product(
        &mut self,
        x: ObjId,
        y: ObjId,
        z: ObjId,
        g: usize,
        f: usize,
        value: Vec<(usize, F::Elem)>,
    ) -> &mut Self {
        let k = &self.field;
        let value: Vec<_> = value.into_iter().filter(|(_, v)| !k.is_zero(v)).collect();
        let entry = self.products.entry((x, y, z)).or_default();
        if value.is_empty() {
            entry.remove(&(g, f));
        } else {
            entry.insert((g, f), value);
        }
        self
    }

    pub fn build(self) -> Result<DgCategory<F>, DgCatError> {
        make_dgcat(self)
    }
}

/// Validates all algebraic laws exhaustively on basis elements.
pub fn make_dgcat<F: Field>(data: DgCategoryBuilder<F>) -> Result<DgCategory<F>, DgCatError> {
    let cat = DgCategory::assemble(data)?;
    cat.validate()?;
    Ok(cat)
}

impl<F: Field> DgCategory<F> {
    /// Assembles without validating the algebraic laws.
    pub(crate) fn assemble(data: DgCategoryBuilder<F>) -> Result<Self, DgCatError> {
        let n = data.objects.len();
        let f = data.field.clone();
        let mut homs = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let h = data.homs.get(&(x, y)).cloned().unwrap_or_else(|| ChainComplex::zero(&f));
                if h.field() != &f {
                    return Err(DgCatError::FieldMismatch);
                }
                homs.push(h);
            }
        }
        let mut units = Vec::with_capacity(n);
        for x in 0..n {
            let dim0 = homs[x * n + x].dim(0);
            let u = data.units.get(&x).cloned().unwrap_or_else(|| vec![f.zero(); dim0]);
            if u.len() != dim0 {
                return Err(DgCatError::UnitViolation { object: x, witness: None });
            }
            units.push(u);
        }
        Ok(Self {
            field: f,
            objects: data.objects,
            homs,
            units,
            products: data.products,
            homology_cache: (0..n * n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId, DgCatError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| DgCatError::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &ChainComplex<F> {
        &self.homs[x * self.objects.len() + y]
    }

    /// Cached homology of `Hom(x, y)`.
    pub fn hom_homology(&self, x: ObjId, y: ObjId) -> &HomologyReport<F> {
        self.homology_cache[x * self.objects.len() + y].get_or_init(|| homology(self.hom(x, y)))
    }

    pub fn unit(&self, x: ObjId) -> Chain<F> {
        Chain::new(0, self.units[x].clone())
    }

    pub fn zero(&self, x: ObjId, y: ObjId, degree: i32) -> Chain<F> {
        Chain::zero(self.hom(x, y), degree)
    }

    pub fn basis_chain(&self, x: ObjId, y: ObjId, degree: i32, index: usize) -> Chain<F> {
        let mut c = self.zero(x, y, degree);
        c.coords[index] = self.field.one();
        c
    }

    /// Sparse structure constants, see [`ProductTable`].
    pub fn products(&self) -> &ProductTable<F> {
        &self.products
    }

    /// Differential of a homogeneous element of `Hom(x, y)`.
    pub fn d(&self, x: ObjId, y: ObjId, a: &Chain<F>) -> Chain<F> {
        self.hom(x, y).d(a)
    }

    /// `g ∘ f` for `f ∈ Hom(x, y)` and `g ∈ Hom(y, z)`.
    pub fn compose(&self, x: ObjId, y: ObjId, z: ObjId, g: &Chain<F>, f: &Chain<F>) -> Chain<F> {
        let k = &self.field;
        let (hxy, hyz, hxz) = (self.hom(x, y), self.hom(y, z), self.hom(x, z));
        assert_eq!(f.coords.len(), hxy.dim(f.degree), "f has wrong dimension");
        assert_eq!(g.coords.len(), hyz.dim(g.degree), "g has wrong dimension");
        let degree = f.degree + g.degree;
        let mut out = vec![k.zero(); hxz.dim(degree)];
        let Some(table) = self.products.get(&(x, y, z)) else {
            return Chain::new(degree, out);
        };
        let (og, of, oo) = (hyz.offset(g.degree), hxy.offset(f.degree), hxz.offset(degree));
        for (i, gi) in g.coords.iter().enumerate() {
            if k.is_zero(gi) {
                continue;
            }
            for (j, fj) in f.coords.iter().enumerate() {
                if k.is_zero(fj) {
                    continue;
                }
                if let Some(v) = table.get(&(og + i, of + j)) {
                    let c = k.mul(gi, fj);
                    for (idx, val) in v {
                        let local = idx - oo;
                        out[local] = k.add(&out[local], &k.mul(&c, val));
                    }
                }
            }
        }
        Chain::new(degree, out)
    }

    fn basis_ref(&self, x: ObjId, y: ObjId, global: usize) -> BasisRef {
        let (degree, index) = self.hom(x, y).locate(global);
        BasisRef {
            source: x,
            target: y,
            degree,
            index,
        }
    }

    fn validate(&self) -> Result<(), DgCatError> {
        let n = self.objects.len();
        let k = &self.field;
        // structure constants land in the right degree
        for (&(x, y, z), table) in &self.products {
            for (&(g, f), v) in table {
                let (dg, _) = self.hom(y, z).locate(g);
                let (df, _) = self.hom(x, y).locate(f);
                let expected = dg + df;
                let hxz = self.hom(x, z);
                let bad = v.iter().any(|&(idx, _)| {
                    idx >= hxz.total_dim() || hxz.locate(idx).0 != expected
                });
                if bad {
                    return Err(DgCatError::DegreeViolation {
                        g: self.basis_ref(y, z, g),
                        f: self.basis_ref(x, y, f),
                        expected_degree: expected,
                    });
                }
            }
        }
        // units: closed, degree 0, two-sided
        for x in 0..n {
            let id = self.unit(x);
            if !self.d(x, x, &id).is_zero(k) {
                return Err(DgCatError::UnitViolation { object: x, witness: None });
            }
            for y in 0..n {
                for b in self.basis(x, y) {
                    if self.compose(x, x, y, &b.1, &id) != b.1 {
                        return Err(DgCatError::UnitViolation {
                            object: x,
                            witness: Some(b.0),
                        });
                    }
                }
                for b in self.basis(y, x) {
                    if self.compose(y, x, x, &id, &b.1) != b.1 {
                        return Err(DgCatError::UnitViolation {
                            object: x,
                            witness: Some(b.0),
                        });
                    }
                }
            }
        }
        // Leibniz: d(g∘f) = (-1)^{|f|} dg∘f + g∘df
        for x in 0..n {
            for y in 0..n {
                let fs = self.basis(x, y);
                for z in 0..n {
                    for (gr, g) in self.basis(y, z) {
                        let dg = self.d(y, z, &g);
                        for (fr, f) in &fs {
                            let lhs = self.d(x, z, &self.compose(x, y, z, &g, f));
                            let a = self.compose(x, y, z, &dg, f);
                            let b = self.compose(x, y, z, &g, &self.d(x, y, f));
                            let s = k.sign(f.degree as i64);
                            let rhs: Vec<_> = a
                                .coords
                                .iter()
                                .zip(&b.coords)
                                .map(|(p, q)| k.add(&k.mul(&s, p), q))
                                .collect();
                            if lhs.coords != rhs {
                                return Err(DgCatError::LeibnizViolation { g: gr, f: *fr });
                            }
                        }
                    }
                }
            }
        }
        // associativity on basis triples with a nonzero inner product
        for w in 0..n {
            for x in 0..n {
                let fs = self.basis(w, x);
                for y in 0..n {
                    let gs = self.basis(x, y);
                    for z in 0..n {
                        let hs = self.basis(y, z);
                        if hs.is_empty() {
                            continue;
                        }
                        for (gr, g) in &gs {
                            for (fr, f) in &fs {
                                let gf = self.compose(w, x, y, g, f);
                                for (hr, h) in &hs {
                                    let hg = self.compose(x, y, z, h, g);
                                    let left = self.compose(w, x, z, &hg, f);
                                    let right = self.compose(w, y, z, h, &gf);
                                    if left != right {
                                        return Err(DgCatError::AssociativityViolation {
                                            h: *hr,
                                            g: *gr,
                                            f: *fr,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// All basis elements of `Hom(x, y)` as chains.
    pub fn basis(&self, x: ObjId, y: ObjId) -> Vec<(BasisRef, Chain<F>)> {
        let h = self.hom(x, y);
        let mut out = Vec::with_capacity(h.total_dim());
        for q in h.degrees() {
            for i in 0..h.dim(q) {
                out.push((
                    BasisRef {
                        source: x,
                        target: y,
                        degree: q,
                        index: i,
                    },
                    self.basis_chain(x, y, q, i),
                ));
            }
        }
        out
    }

    /// Re-validates every law; categories from [`make_dgcat`] always pass.
    pub fn check_laws(&self) -> Result<(), DgCatError> {
        self.validate()
    }

    /// Builder seeded with this category's data, for derived constructions.
    pub fn to_builder(&self) -> DgCategoryBuilder<F> {
        let n = self.objects.len();
        let mut homs = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                if self.hom(x, y).total_dim() > 0 {
                    homs.insert((x, y), self.hom(x, y).clone());
                }
            }
        }
        DgCategoryBuilder {
            field: self.field.clone(),
            objects: self.objects.clone(),
            homs,
            units: self.units.iter().cloned().enumerate().collect(),
            products: self.products.clone(),
        }
    }
}

impl<F: Field> PartialEq for DgCategory<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.objects == other.objects
            && self.homs == other.homs
            && self.units == other.units
            && self.products == other.products
    }
}
