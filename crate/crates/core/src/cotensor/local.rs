use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CotensorError, FiniteSSet, Inclusion};
use crate::complexes::{make_complex, Chain, ChainComplex};
use crate::dgcat::{is_homotopy_invertible, DgCategory, InvertibilityCertificate, ObjId};
use crate::field::Field;
use crate::linalg::{vec_axpy, vec_scale, Matrix};
use crate::mc::{MCObject, SimplicialCochain};

/// A cell as `(dimension, index)`.
pub type Cell = (usize, usize);

/// A cochain of total degree `t` on a semisimplicial set: the component on a
/// `k`-cell lies in internal degree `t + k`. Only nonzero components are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCochain<F: Field> {
    t: i32,
    source: Vec<ObjId>,
    target: Vec<ObjId>,
    components: BTreeMap<Cell, Vec<F::Elem>>,
}

impl<F: Field> KCochain<F> {
    pub fn zero(t: i32, source: Vec<ObjId>, target: Vec<ObjId>) -> Self {
        Self {
            t,
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> i32 {
        self.t
    }

    pub fn source(&self) -> &[ObjId] {
        &self.source
    }

    pub fn target(&self) -> &[ObjId] {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<Cell, Vec<F::Elem>> {
        &self.components
    }

    /// `(Hom(E(v_0 σ), F(v_k σ)), internal degree)` for the cell `σ`.
    fn slot(&self, k: &FiniteSSet, (dim, c): Cell) -> (ObjId, ObjId, i32) {
        (
            self.source[k.vertex(dim, c, 0)],
            self.target[k.vertex(dim, c, dim)],
            self.t + dim as i32,
        )
    }

    pub fn hom_dim(&self, cat: &DgCategory<F>, k: &FiniteSSet, cell: Cell) -> usize {
        let (x, y, q) = self.slot(k, cell);
        cat.hom(x, y).dim(q)
    }

    pub fn get(&self, cat: &DgCategory<F>, k: &FiniteSSet, cell: Cell) -> Chain<F> {
        let (x, y, q) = self.slot(k, cell);
        match self.components.get(&cell) {
            Some(v) => Chain::new(q, v.clone()),
            None => Chain::new(q, vec![cat.field().zero(); cat.hom(x, y).dim(q)]),
        }
    }

    pub fn set(&mut self, field: &F, cell: Cell, v: Vec<F::Elem>) {
        if v.iter().all(|x| field.is_zero(x)) {
            self.components.remove(&cell);
        } else {
            self.components.insert(cell, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn axpy(&self, field: &F, s: &F::Elem, other: &Self) -> Self {
        assert_eq!(self.t, other.t, "degrees differ");
        let mut out = self.clone();
        for (c, v) in &other.components {
            let mut acc = out.components.get(c).cloned().unwrap_or_else(|| vec![field.zero(); v.len()]);
            vec_axpy(field, &mut acc, s, v);
            out.set(field, *c, acc);
        }
        out
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.one(), other)
    }

    pub fn scale(&self, field: &F, s: &F::Elem) -> Self {
        let mut out = Self::zero(self.t, self.source.clone(), self.target.clone());
        for (c, v) in &self.components {
            out.set(field, *c, vec_scale(field, s, v));
        }
        out
    }

    /// Componentwise restriction along `L ⊆ K`.
    pub fn restrict(&self, inc: &Inclusion) -> Self {
        let sub = inc.sub();
        let pull = |objs: &[ObjId]| (0..sub.cell_count(0)).map(|v| objs[inc.image(0, v)]).collect();
        let mut out = Self::zero(self.t, pull(&self.source), pull(&self.target));
        for (dim, c) in sub.cells() {
            if let Some(v) = self.components.get(&(dim, inc.image(dim, c))) {
                out.components.insert((dim, c), v.clone());
            }
        }
        out
    }
}

/// `δa = d a + (-1)^t Σ_{0<j<k} (-1)^j a(∂_j σ)`.
pub fn ls_delta<F: Field>(cat: &DgCategory<F>, k: &FiniteSSet, a: &KCochain<F>) -> KCochain<F> {
    let f = cat.field();
    let mut out = KCochain::zero(a.t - 1, a.source.clone(), a.target.clone());
    let outer = f.sign(a.t as i64);
    for cell @ (dim, c) in k.cells() {
        let (x, y, _) = a.slot(k, cell);
        let mut acc = cat.d(x, y, &a.get(cat, k, cell)).coords;
        for j in 1..dim {
            if let Some(v) = a.components.get(&(dim - 1, k.face(dim, c, j))) {
                vec_axpy(f, &mut acc, &f.mul(&outer, &f.sign(j as i64)), v);
            }
        }
        out.set(f, cell, acc);
    }
    out
}

/// `(φ∘η)(σ) = Σ_j (-1)^{t_φ j} φ(back_j σ) ∘ η(front_j σ)`.
pub fn ls_compose<F: Field>(
    cat: &DgCategory<F>,
    k: &FiniteSSet,
    phi: &KCochain<F>,
    eta: &KCochain<F>,
) -> Result<KCochain<F>, CotensorError> {
    if phi.source != eta.target {
        return Err(CotensorError::ObjectMismatch);
    }
    let f = cat.field();
    let mut out = KCochain::zero(phi.t + eta.t, eta.source.clone(), phi.target.clone());
    for cell @ (dim, c) in k.cells() {
        let (x, z, q) = out.slot(k, cell);
        let mut acc = vec![f.zero(); cat.hom(x, z).dim(q)];
        for j in 0..=dim {
            let front = (j, k.front(dim, c, j));
            let back = (dim - j, k.back(dim, c, j));
            let (Some(_), Some(_)) = (eta.components.get(&front), phi.components.get(&back)) else {
                continue;
            };
            let y = eta.target[k.vertex(dim, c, j)];
            let prod = cat.compose(x, y, z, &phi.get(cat, k, back), &eta.get(cat, k, front));
            vec_axpy(f, &mut acc, &f.sign(phi.t as i64 * j as i64), &prod.coords);
        }
        out.set(f, cell, acc);
    }
    Ok(out)
}

/// `δη + η∘η`.
pub fn ls_residual<F: Field>(
    cat: &DgCategory<F>,
    k: &FiniteSSet,
    eta: &KCochain<F>,
) -> Result<KCochain<F>, CotensorError> {
    check_shape(cat, k, eta)?;
    Ok(ls_delta(cat, k, eta).add(cat.field(), &ls_compose(cat, k, eta, eta)?))
}

fn check_shape<F: Field>(cat: &DgCategory<F>, k: &FiniteSSet, eta: &KCochain<F>) -> Result<(), CotensorError> {
    let shape = |m: String| Err(CotensorError::ShapeError(m));
    if eta.t != -1 {
        return shape(format!("total degree {} instead of -1", eta.t));
    }
    if eta.source != eta.target {
        return shape("source and target objects differ".into());
    }
    if eta.source.len() != k.cell_count(0) {
        return shape(format!("{} objects for {} vertices", eta.source.len(), k.cell_count(0)));
    }
    if let Some(&bad) = eta.source.iter().find(|&&o| o >= cat.object_count()) {
        return shape(format!("unknown object {bad}"));
    }
    for (&(dim, c), v) in &eta.components {
        if dim == 0 {
            return shape(format!("vertex component on {c}"));
        }
        if dim > k.dim() || c >= k.cell_count(dim) {
            return shape(format!("no cell {c} in dimension {dim}"));
        }
        if v.len() != eta.hom_dim(cat, k, (dim, c)) {
            return shape(format!("component on cell {c} of dimension {dim} has length {}", v.len()));
        }
    }
    Ok(())
}

/// An object of the cotensor: a Maurer–Cartan element over `K` with
/// homotopy-invertible edges.
#[derive(Debug, Clone)]
pub struct LocalSystem<F: Field> {
    cat: Arc<DgCategory<F>>,
    space: Arc<FiniteSSet>,
    eta: KCochain<F>,
    certificates: Vec<InvertibilityCertificate<F>>,
}

impl<F: Field> PartialEq for LocalSystem<F> {
    fn eq(&self, other: &Self) -> bool {
        *self.cat == *other.cat && *self.space == *other.space && self.eta == other.eta
    }
}

fn validate<F: Field>(
    cat: &DgCategory<F>,
    k: &FiniteSSet,
    eta: &KCochain<F>,
) -> Result<Vec<InvertibilityCertificate<F>>, CotensorError> {
    let r = ls_residual(cat, k, eta)?;
    if let Some(&(dim, cell)) = r.components.keys().next() {
        return Err(CotensorError::NotMaurerCartan { dim, cell });
    }
    (0..k.cell_count(1))
        .map(|e| {
            let (x, y) = (eta.source[k.vertex(1, e, 0)], eta.source[k.vertex(1, e, 1)]);
            is_homotopy_invertible(cat, x, y, &eta.get(cat, k, (1, e)))?
                .certificate()
                .cloned()
                .ok_or(CotensorError::EdgeNotInvertible(e))
        })
        .collect()
}

impl<F: Field> LocalSystem<F> {
    /// Objects on the vertices and components on cells of positive dimension.
    pub fn new(
        cat: Arc<DgCategory<F>>,
        space: Arc<FiniteSSet>,
        objects: Vec<ObjId>,
        components: BTreeMap<Cell, Vec<F::Elem>>,
    ) -> Result<Self, CotensorError> {
        let mut eta = KCochain::zero(-1, objects.clone(), objects);
        for (c, v) in components {
            eta.set(cat.field(), c, v);
        }
        let certificates = validate(&cat, &space, &eta)?;
        Ok(Self {
            cat,
            space,
            eta,
            certificates,
        })
    }

    /// The same data over `Δ^n`, cells matched to simplices.
    pub fn from_mc(x: &MCObject<F>) -> Self {
        let n = x.n();
        let space = Arc::new(FiniteSSet::standard_simplex(n));
        let comps = x
            .eta()
            .components()
            .iter()
            .map(|(i, v)| ((i.level(), FiniteSSet::subset_cell(n, i.entries())), v.clone()))
            .collect();
        Self::new(x.category().clone(), space, x.objects().to_vec(), comps).expect("MC objects are local systems")
    }

    pub fn category(&self) -> &Arc<DgCategory<F>> {
        &self.cat
    }

    pub fn space(&self) -> &Arc<FiniteSSet> {
        &self.space
    }

    pub fn objects(&self) -> &[ObjId] {
        &self.eta.source
    }

    pub fn eta(&self) -> &KCochain<F> {
        &self.eta
    }

    /// Certificates for the 1-cells, in cell order.
    pub fn certificates(&self) -> &[InvertibilityCertificate<F>] {
        &self.certificates
    }

    /// `D(a) = δa − (-1)^{t} φ∘a + a∘η` for `a: self → tgt`.
    pub fn differential(&self, tgt: &LocalSystem<F>, a: &KCochain<F>) -> KCochain<F> {
        let (cat, k) = (&*self.cat, &*self.space);
        let f = cat.field();
        let left = ls_compose(cat, k, &tgt.eta, a).expect("composable");
        let right = ls_compose(cat, k, a, &self.eta).expect("composable");
        ls_delta(cat, k, a)
            .axpy(f, &f.neg(&f.sign(a.t as i64)), &left)
            .add(f, &right)
    }
}

/// Re-checks the Maurer–Cartan equation and the edge certificates.
pub fn ls_is_valid<F: Field>(cat: &DgCategory<F>, x: &LocalSystem<F>) -> bool {
    *cat == *x.cat
        && validate(cat, &x.space, &x.eta).is_ok()
        && x.certificates.iter().all(|c| c.verify(cat))
}

/// Restriction along `L ⊆ K`; the Maurer–Cartan equation is cellwise, so the
/// result is again a local system.
pub fn restrict<F: Field>(x: &LocalSystem<F>, inc: &Inclusion) -> Result<LocalSystem<F>, CotensorError> {
    if inc.ambient() != &*x.space {
        return Err(CotensorError::NotASubcomplex("inclusion does not land in the base space".into()));
    }
    let eta = x.eta.restrict(inc);
    let sub = Arc::new(inc.sub().clone());
    let certificates = validate(&x.cat, &sub, &eta).expect("restriction preserves validity");
    Ok(LocalSystem {
        cat: x.cat.clone(),
        space: sub,
        eta,
        certificates,
    })
}

/// The hom complex between two local systems over the same space, with its
/// basis of `(cell, internal basis index)` pairs.
#[derive(Debug, Clone)]
pub struct LsHomComplex<F: Field> {
    pub complex: ChainComplex<F>,
    /// per total degree, ordered by cell dimension, cell index, then index
    pub basis: BTreeMap<i32, Vec<(Cell, usize)>>,
    pub window: (i32, i32),
    source: LocalSystem<F>,
    target: LocalSystem<F>,
}

impl<F: Field> LsHomComplex<F> {
    pub fn source(&self) -> &LocalSystem<F> {
        &self.source
    }

    pub fn target(&self) -> &LocalSystem<F> {
        &self.target
    }

    pub fn coordinates(&self, a: &KCochain<F>) -> Chain<F> {
        let (cat, k) = (&*self.source.cat, &*self.source.space);
        let basis = self.basis.get(&a.t).map(Vec::as_slice).unwrap_or(&[]);
        Chain::new(a.t, basis.iter().map(|(c, i)| a.get(cat, k, *c).coords[*i].clone()).collect())
    }

    pub fn cochain(&self, v: &Chain<F>) -> KCochain<F> {
        let (cat, k) = (&*self.source.cat, &*self.source.space);
        let f = cat.field();
        let mut a = KCochain::zero(v.degree, self.source.objects().to_vec(), self.target.objects().to_vec());
        let basis = self.basis.get(&v.degree).map(Vec::as_slice).unwrap_or(&[]);
        let mut comps: BTreeMap<Cell, Vec<F::Elem>> = BTreeMap::new();
        for ((c, i), x) in basis.iter().zip(&v.coords) {
            comps.entry(*c).or_insert_with(|| vec![f.zero(); a.hom_dim(cat, k, *c)])[*i] = x.clone();
        }
        for (c, x) in comps {
            a.set(f, c, x);
        }
        a
    }
}

/// Builds the hom complex with differential `D`. Windows follow the same rule
/// as for the simplicial resolution, with `n` the dimension of `K`.
pub fn ls_hom_complex<F: Field>(
    cat: &DgCategory<F>,
    src: &LocalSystem<F>,
    tgt: &LocalSystem<F>,
    window: Option<(i32, i32)>,
) -> Result<LsHomComplex<F>, CotensorError> {
    if *src.cat != *cat || *tgt.cat != *cat || src.space != tgt.space {
        return Err(CotensorError::ObjectMismatch);
    }
    let k = &*src.space;
    let f = cat.field();
    let n = k.dim() as i32;
    let probe = |t| KCochain::<F>::zero(t, src.objects().to_vec(), tgt.objects().to_vec());
    let mut supp: Option<(i32, i32)> = None;
    for (dim, c) in k.cells() {
        let (x, y, _) = probe(0).slot(k, (dim, c));
        for (q, _) in cat.hom(x, y).dims() {
            supp = Some(supp.map_or((q, q), |(a, b)| (a.min(q), b.max(q))));
        }
    }
    let window = match (window, supp) {
        (Some(w), None) => w,
        (None, None) => (0, -1),
        (None, Some((lo, hi))) => (lo - n - 1, hi + n + 1),
        (Some((lo, hi)), Some((slo, shi))) => {
            if lo > slo - n || hi < shi {
                return Err(CotensorError::WindowTooSmall {
                    needed_lo: slo - n,
                    needed_hi: shi,
                    given_lo: lo,
                    given_hi: hi,
                });
            }
            (lo, hi)
        }
    };
    let mut basis = BTreeMap::new();
    for t in window.0..=window.1 {
        let z = probe(t);
        let b: Vec<(Cell, usize)> = k
            .cells()
            .into_iter()
            .flat_map(|c| (0..z.hom_dim(cat, k, c)).map(move |i| (c, i)))
            .collect();
        basis.insert(t, b);
    }
    let mut result = LsHomComplex {
        complex: ChainComplex::zero(f),
        basis,
        window,
        source: src.clone(),
        target: tgt.clone(),
    };
    let dims: BTreeMap<i32, usize> = result.basis.iter().map(|(&t, b)| (t, b.len())).collect();
    let mut diffs = BTreeMap::new();
    for t in (window.0 + 1)..=window.1 {
        let (cols, rows) = (dims[&t], dims[&(t - 1)]);
        let mut m = Matrix::zeros(f, rows, cols);
        for col in 0..cols {
            let mut e = vec![f.zero(); cols];
            e[col] = f.one();
            let image = result.coordinates(&src.differential(tgt, &result.cochain(&Chain::new(t, e))));
            for (r, v) in image.coords.into_iter().enumerate() {
                if !f.is_zero(&v) {
                    m.set(r, col, v);
                }
            }
        }
        diffs.insert(t, m);
    }
    result.complex = make_complex(f, &dims, diffs).map_err(|e| CotensorError::ShapeError(e.to_string()))?;
    Ok(result)
}

impl<F: Field> KCochain<F> {
    /// The cochain over `Δ^n` with the same components as `a`.
    pub fn from_simplicial(a: &SimplicialCochain<F>) -> Self {
        let n = a.n();
        let mut out = Self::zero(a.degree(), a.source().to_vec(), a.target().to_vec());
        for (i, v) in a.components() {
            out.components.insert((i.level(), FiniteSSet::subset_cell(n, i.entries())), v.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology;
    use crate::dgcat::{fixture, Fixture};
    use crate::field::Rationals;

    fn end_k() -> Arc<DgCategory<Rationals>> {
        Arc::new(fixture(&Rationals, Fixture::UnitK, 0).unwrap())
    }

    fn circle_system(lambda: i64) -> Result<LocalSystem<Rationals>, CotensorError> {
        let q = Rationals;
        let comps = BTreeMap::from([((1, 0), vec![q.from_i64(lambda)])]);
        LocalSystem::new(end_k(), Arc::new(FiniteSSet::circle()), vec![0], comps)
    }

    #[test]
    fn circle_systems() {
        assert!(circle_system(3).is_ok());
        assert_eq!(circle_system(0).unwrap_err(), CotensorError::EdgeNotInvertible(0));
        let (a, b) = (circle_system(2).unwrap(), circle_system(5).unwrap());
        let cat = end_k();
        let h = ls_hom_complex(&cat, &a, &a, None).unwrap();
        assert_eq!(homology(&h.complex).nonzero_ranks(), BTreeMap::from([(-1, 1), (0, 1)]));
        let h = ls_hom_complex(&cat, &a, &b, None).unwrap();
        assert!(h.complex.is_acyclic());
    }

    #[test]
    fn disjoint_points_need_no_data() {
        let q = Rationals;
        let cat = Arc::new(fixture(&q, Fixture::Sphere, 0).unwrap());
        let x = LocalSystem::new(cat.clone(), Arc::new(FiniteSSet::points(2)), vec![0, 1], BTreeMap::new()).unwrap();
        assert!(ls_is_valid(&cat, &x));
    }

    #[test]
    fn explicit_window_must_cover_support() {
        let a = circle_system(2).unwrap();
        let err = ls_hom_complex(&end_k(), &a, &a, Some((0, 0))).unwrap_err();
        assert!(matches!(err, CotensorError::WindowTooSmall { needed_lo: -1, .. }));
        assert!(ls_hom_complex(&end_k(), &a, &a, Some((-1, 0))).is_ok());
    }
}
