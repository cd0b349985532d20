use super::{
    all_simplices, mc_compose, mc_identity, simplicial_compose, simplicial_delta, McError, MCMorphism,
    MCObject, MultiIndex, SimplicialCochain,
};
use crate::complexes::Chain;
use crate::dgcat::{strict_inverse, DgCategory};
use crate::field::Field;

/// Replaces every edge `(i, j)` by the composite of the consecutive edges
/// between `i` and `j` and drops all higher components.
pub fn strict_from_chain<F: Field>(x: &MCObject<F>) -> MCObject<F> {
    let cat = x.category();
    let objs = x.objects();
    let mut eta = SimplicialCochain::zero(x.n(), -1, objs.to_vec(), objs.to_vec());
    for i in 0..x.n() {
        let mut acc = x.eta().get(cat, &MultiIndex::edge(i, i + 1));
        eta.set(cat.field(), MultiIndex::edge(i, i + 1), acc.coords.clone());
        for j in i + 2..=x.n() {
            let next = x.eta().get(cat, &MultiIndex::edge(j - 1, j));
            acc = cat.compose(objs[i], objs[j - 1], objs[j], &next, &acc);
            eta.set(cat.field(), MultiIndex::edge(i, j), acc.coords.clone());
        }
    }
    MCObject::new(cat.clone(), eta).expect("composites of closed edges are Maurer–Cartan")
}

/// A homotopy equivalence `h: source → target` with exact inverse `h_inv`.
#[derive(Debug, Clone)]
pub struct StrictifyStep<F: Field> {
    pub h: MCMorphism<F>,
    pub h_inv: MCMorphism<F>,
    pub target: MCObject<F>,
}

impl<F: Field> StrictifyStep<F> {
    /// Checks closedness and both inverse identities exactly.
    pub fn verify(&self) -> bool {
        let id_s = mc_identity(self.h.source());
        let id_t = mc_identity(&self.target);
        self.h.is_closed()
            && self.h_inv.is_closed()
            && mc_compose(&self.h_inv, &self.h).ok() == Some(id_s)
            && mc_compose(&self.h, &self.h_inv).ok() == Some(id_t)
    }
}

/// One inductive step: requires all components on simplices of level ≥ 2
/// not ending at `n` to vanish, and returns an equivalence to
/// [`strict_from_chain`]. With `k` the level of `I`,
///
/// ```text
/// H(i) = id
/// H(i_0..i_k) = (-1)^{k-1} η(i_0..i_{k-1}, n-1, n)   if i_k = n, i_{k-1} ≠ n-1
/// ```
///
/// and `H⁻` is `H` with the positive-level components negated.
pub fn strictify_step<F: Field>(x: &MCObject<F>) -> Result<StrictifyStep<F>, McError> {
    let n = x.n();
    if let Some(i) = x.eta().components().keys().find(|i| i.level() >= 2 && i.last() < n) {
        return Err(McError::InductiveHypothesisViolated { simplex: i.clone() });
    }
    let cat = x.category();
    let k = cat.field();
    let target = strict_from_chain(x);
    let objs = x.objects().to_vec();
    let mut h = SimplicialCochain::zero(n, 0, objs.clone(), objs.clone());
    for (i, &e) in objs.iter().enumerate() {
        h.set(k, MultiIndex::vertex(i), cat.unit(e).coords);
    }
    if n >= 1 {
        for i in all_simplices(n, 1) {
            let level = i.level();
            if i.last() != n || i.entries()[level - 1] == n - 1 {
                continue;
            }
            let mut longer = i.entries()[..level].to_vec();
            longer.extend([n - 1, n]);
            let v = x.eta().get(cat, &MultiIndex::from_sorted(longer)).coords;
            h.set(k, i, crate::linalg::vec_scale(k, &k.sign(level as i64 - 1), &v));
        }
    }
    let h = MCMorphism::new(x.clone(), target.clone(), h)?;
    let h_inv = MCMorphism::new(target.clone(), x.clone(), h.negate_positive_levels())?;
    let step = StrictifyStep { h, h_inv, target };
    assert!(step.verify(), "strictification step is an exact equivalence");
    Ok(step)
}

/// Inverse of a degree-0 cochain in the cochain algebra, computed level by
/// level from strict inverses of the vertex components.
pub fn cochain_inverse<F: Field>(
    cat: &DgCategory<F>,
    g: &SimplicialCochain<F>,
) -> Result<SimplicialCochain<F>, McError> {
    assert_eq!(g.degree(), 0);
    let k = cat.field();
    let (src, tgt) = (g.source(), g.target());
    let mut inv = SimplicialCochain::zero(g.n(), 0, tgt.to_vec(), src.to_vec());
    let mut vertex_inv = Vec::with_capacity(g.n() + 1);
    for v in 0..=g.n() {
        let gv = g.get(cat, &MultiIndex::vertex(v));
        let closed = cat.d(src[v], tgt[v], &gv).is_zero(k);
        let Some(x) = closed.then(|| strict_inverse(cat, src[v], tgt[v], &gv)).transpose()?.flatten() else {
            return Err(McError::NotStrictlyInvertible { vertex: v });
        };
        inv.set(k, MultiIndex::vertex(v), x.coords.clone());
        vertex_inv.push(x);
    }
    // (g ∘ x)(I) = Σ_j g(i_j..i_k) ∘ x(i_0..i_j) = 0 for k ≥ 1, solved for x(I)
    for i in all_simplices(g.n(), 1) {
        let level = i.level();
        let (a, z) = (tgt[i.first()], tgt[i.last()]);
        let mut acc = Chain::<F>::new(level as i32, vec![k.zero(); cat.hom(a, src[i.last()]).dim(level as i32)]);
        for j in 0..level {
            let front = inv.get(cat, &i.slice(0, j));
            let back = g.get(cat, &i.slice(j, level));
            let p = cat.compose(a, src[i.entries()[j]], z, &back, &front);
            let acc2 = cat.compose(a, z, src[i.last()], &vertex_inv[i.last()], &p);
            crate::linalg::vec_axpy(k, &mut acc.coords, &k.neg(&k.one()), &acc2.coords);
        }
        inv.set(k, i, acc.coords);
    }
    Ok(inv)
}

/// Conjugates `η` by `g`: `η̃ = (g∘η + δg)∘g⁻¹`. The vertex components of
/// `g` must be closed and strictly invertible; `g` becomes a closed
/// morphism `(E, η) → (E', η̃)`.
pub fn gauge_transport<F: Field>(
    x: &MCObject<F>,
    g: &SimplicialCochain<F>,
) -> Result<(MCObject<F>, MCMorphism<F>), McError> {
    let cat = x.category();
    let k = cat.field();
    if g.n() != x.n() || g.degree() != 0 || g.source() != x.objects() {
        return Err(McError::ObjectMismatch);
    }
    let inv = cochain_inverse(cat, g)?;
    let conj = simplicial_compose(cat, g, x.eta())?.add(k, &simplicial_delta(cat, g));
    let eta = simplicial_compose(cat, &conj, &inv)?;
    let y = MCObject::new(cat.clone(), eta)?;
    let m = MCMorphism::new(x.clone(), y.clone(), g.clone())?;
    assert!(m.is_closed(), "gauge morphism is closed");
    Ok((y, m))
}

/// A chain of exact equivalences from an MC object to a strict one.
#[derive(Debug, Clone)]
pub struct Strictification<F: Field> {
    pub steps: Vec<StrictifyStep<F>>,
    pub target: MCObject<F>,
}

impl<F: Field> Strictification<F> {
    /// Composite equivalence and its inverse; identities for an empty chain.
    pub fn composite(&self, source: &MCObject<F>) -> (MCMorphism<F>, MCMorphism<F>) {
        let mut fwd = mc_identity(source);
        let mut bwd = mc_identity(source);
        for s in &self.steps {
            fwd = mc_compose(&s.h, &fwd).expect("consecutive steps compose");
            bwd = mc_compose(&bwd, &s.h_inv).expect("consecutive steps compose");
        }
        (fwd, bwd)
    }
}

/// Strictifies face by face: for `m = 2..=n` the front face `Δ^m` is
/// strictified by [`strictify_step`] and the result is transported to `Δ^n`.
/// Refuses objects whose edges are invertible only up to homotopy.
pub fn strictify<F: Field>(x: &MCObject<F>) -> Result<Strictification<F>, McError> {
    let cat = x.category();
    let k = cat.field();
    let objs = x.objects();
    for i in 0..x.n() {
        let e = x.eta().get(cat, &MultiIndex::edge(i, i + 1));
        if strict_inverse(cat, objs[i], objs[i + 1], &e)?.is_none() {
            return Err(McError::RequiresStrictInverses(i, i + 1));
        }
    }
    let mut steps = Vec::new();
    let mut cur = x.clone();
    for m in 2..=x.n() {
        let face = MCObject::new(cat.clone(), cur.eta().restrict_front(m))?;
        if is_composite_strict(&face) {
            continue;
        }
        let step = strictify_step(&face)?;
        let mut g = SimplicialCochain::zero(x.n(), 0, objs.to_vec(), objs.to_vec());
        for (i, v) in step.h.cochain().components() {
            g.set(k, i.clone(), v.clone());
        }
        for (v, &e) in objs.iter().enumerate().skip(m + 1) {
            g.set(k, MultiIndex::vertex(v), cat.unit(e).coords);
        }
        let (next, h) = gauge_transport(&cur, &g)?;
        let inv = cochain_inverse(cat, &g)?;
        let h_inv = MCMorphism::new(next.clone(), cur.clone(), inv)?;
        let step = StrictifyStep {
            h,
            h_inv,
            target: next.clone(),
        };
        assert!(step.verify(), "transported step is an exact equivalence");
        steps.push(step);
        cur = next;
    }
    assert!(cur.is_strict());
    Ok(Strictification { steps, target: cur })
}

/// Long edges equal the composites of consecutive ones.
fn is_composite_strict<F: Field>(x: &MCObject<F>) -> bool {
    strict_from_chain(x) == *x
}
