use std::collections::BTreeMap;
use std::sync::Arc;

use super::{all_simplices, McError, MCMorphism, MCObject, MultiIndex, SimplicialCochain};
use crate::dgcat::{DgCategory, ObjId};
use crate::field::Field;

/// Face `∂_i: [m−1] → [m]`, skipping `i`.
pub fn face_map(i: usize, m: usize) -> Vec<usize> {
    (0..m).map(|j| if j < i { j } else { j + 1 }).collect()
}

/// Degeneracy `σ_i: [m+1] → [m]`, hitting `i` twice.
pub fn degeneracy_map(i: usize, m: usize) -> Vec<usize> {
    (0..m + 2).map(|j| if j <= i { j } else { j - 1 }).collect()
}

fn check_monotone(f: &[usize], n: usize) -> Result<(), McError> {
    if f.is_empty() || f.windows(2).any(|w| w[0] > w[1]) || f.iter().any(|&v| v > n) {
        return Err(McError::NotMonotone(f.to_vec()));
    }
    Ok(())
}

/// Image of a simplex, `None` when the image has repeated entries.
fn image(f: &[usize], j: &MultiIndex) -> Option<MultiIndex> {
    let img: Vec<usize> = j.entries().iter().map(|&v| f[v]).collect();
    MultiIndex::new(img).ok()
}

fn pull_objects(f: &[usize], objs: &[ObjId]) -> Vec<ObjId> {
    f.iter().map(|&v| objs[v]).collect()
}

/// Pulls an MC object back along a monotone `f: [m] → [n]`, given as the
/// list of images. Degenerate edges become identities and degenerate higher
/// simplices zero.
pub fn pullback<F: Field>(f: &[usize], x: &MCObject<F>) -> Result<MCObject<F>, McError> {
    check_monotone(f, x.n())?;
    let cat = x.category();
    let m = f.len() - 1;
    let objs = pull_objects(f, x.objects());
    let mut eta = SimplicialCochain::zero(m, -1, objs.clone(), objs.clone());
    for j in all_simplices(m, 1) {
        match image(f, &j) {
            Some(i) => eta.set(cat.field(), j, x.eta().get(cat, &i).coords),
            None if j.level() == 1 => eta.set(cat.field(), j.clone(), cat.unit(objs[j.first()]).coords),
            None => {}
        }
    }
    Ok(MCObject::new(cat.clone(), eta).expect("pullback preserves Maurer–Cartan elements"))
}

/// Pulls a morphism back; components on degenerate simplices vanish.
pub fn pullback_morphism<F: Field>(f: &[usize], a: &MCMorphism<F>) -> Result<MCMorphism<F>, McError> {
    let src = pullback(f, a.source())?;
    let tgt = pullback(f, a.target())?;
    let cat = a.source().category();
    let m = f.len() - 1;
    let mut c = SimplicialCochain::zero(m, a.degree(), src.objects().to_vec(), tgt.objects().to_vec());
    for j in all_simplices(m, 0) {
        if let Some(i) = image(f, &j) {
            c.set(cat.field(), j, a.cochain().get(cat, &i).coords);
        }
    }
    MCMorphism::new(src, tgt, c)
}

/// The constant object at level `n`: identities on every edge.
pub fn iota<F: Field>(cat: &Arc<DgCategory<F>>, e: ObjId, n: usize) -> MCObject<F> {
    let comps: BTreeMap<MultiIndex, Vec<F::Elem>> = super::simplices(n, 1)
        .into_iter()
        .map(|i| (i, cat.unit(e).coords))
        .collect();
    let eta = SimplicialCochain::new(cat, n, -1, vec![e; n + 1], vec![e; n + 1], comps)
        .expect("identity edges have the unit's shape");
    MCObject::new(cat.clone(), eta).expect("constant object is Maurer–Cartan")
}
