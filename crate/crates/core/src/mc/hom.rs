use std::collections::BTreeMap;

use super::{all_simplices, McError, MCMorphism, MCObject, MultiIndex, SimplicialCochain};
use crate::complexes::{make_complex, Chain, ChainComplex};
use crate::field::Field;
use crate::linalg::Matrix;

/// The hom complex between two MC objects on a finite degree window, with
/// its basis of `(simplex, internal basis index)` pairs.
#[derive(Debug, Clone)]
pub struct McHomComplex<F: Field> {
    pub complex: ChainComplex<F>,
    /// per total degree, ordered by simplex (length, then lex), then index
    pub basis: BTreeMap<i32, Vec<(MultiIndex, usize)>>,
    pub window: (i32, i32),
    source: MCObject<F>,
    target: MCObject<F>,
}

impl<F: Field> McHomComplex<F> {
    pub fn source(&self) -> &MCObject<F> {
        &self.source
    }

    pub fn target(&self) -> &MCObject<F> {
        &self.target
    }

    /// Coordinates of a morphism in the basis of its degree.
    pub fn coordinates(&self, m: &MCMorphism<F>) -> Chain<F> {
        let cat = self.source.category();
        let t = m.degree();
        let basis = self.basis.get(&t).map(Vec::as_slice).unwrap_or(&[]);
        let coords = basis
            .iter()
            .map(|(i, idx)| m.cochain().get(cat, i).coords[*idx].clone())
            .collect();
        Chain::new(t, coords)
    }

    pub fn morphism(&self, c: &Chain<F>) -> MCMorphism<F> {
        let cat = self.source.category();
        let k = cat.field();
        let mut m = MCMorphism::zero(&self.source, &self.target, c.degree);
        let mut a = m.cochain().clone();
        let basis = self.basis.get(&c.degree).map(Vec::as_slice).unwrap_or(&[]);
        let mut comps: BTreeMap<MultiIndex, Vec<F::Elem>> = BTreeMap::new();
        for ((i, idx), v) in basis.iter().zip(&c.coords) {
            let entry = comps.entry(i.clone()).or_insert_with(|| vec![k.zero(); a.hom_dim(cat, i)]);
            entry[*idx] = v.clone();
        }
        for (i, v) in comps {
            a.set(k, i, v);
        }
        m = MCMorphism::new(self.source.clone(), self.target.clone(), a).expect("shape");
        m
    }
}

/// Degree support `[lo, hi]` of the homs `Hom(E_{i_0}, F_{i_k})`, if any.
fn support<F: Field>(src: &MCObject<F>, tgt: &MCObject<F>) -> Option<(i32, i32)> {
    let cat = src.category();
    let mut range: Option<(i32, i32)> = None;
    for i in all_simplices(src.n(), 0) {
        let h = cat.hom(src.objects()[i.first()], tgt.objects()[i.last()]);
        for (q, _) in h.dims() {
            range = Some(match range {
                None => (q, q),
                Some((a, b)) => (a.min(q), b.max(q)),
            });
        }
    }
    range
}

/// Builds the hom complex with differential `D`. The default window pads the
/// support by `n + 1` on both sides; an explicit window must cover every
/// total degree that can carry a component.
pub fn hom_complex_mc<F: Field>(
    src: &MCObject<F>,
    tgt: &MCObject<F>,
    window: Option<(i32, i32)>,
) -> Result<McHomComplex<F>, McError> {
    if src.n() != tgt.n() || *src.category() != *tgt.category() {
        return Err(McError::ObjectMismatch);
    }
    let cat = src.category();
    let k = cat.field();
    let n = src.n() as i32;
    let supp = support(src, tgt);
    let window = match (window, supp) {
        (Some(w), None) => w,
        (None, None) => (0, -1),
        (None, Some((lo, hi))) => (lo - n - 1, hi + n + 1),
        (Some((lo, hi)), Some((slo, shi))) => {
            if lo > slo - n || hi < shi {
                return Err(McError::WindowTooSmall {
                    needed_lo: slo - n,
                    needed_hi: shi,
                    given_lo: lo,
                    given_hi: hi,
                });
            }
            (lo, hi)
        }
    };
    let simplices = all_simplices(src.n(), 0);
    let zero_cochain =
        |t: i32| SimplicialCochain::<F>::zero(src.n(), t, src.objects().to_vec(), tgt.objects().to_vec());
    let mut basis = BTreeMap::new();
    for t in window.0..=window.1 {
        let z = zero_cochain(t);
        let b: Vec<(MultiIndex, usize)> = simplices
            .iter()
            .flat_map(|i| (0..z.hom_dim(cat, i)).map(move |idx| (i.clone(), idx)))
            .collect();
        basis.insert(t, b);
    }
    let mut result = McHomComplex {
        complex: ChainComplex::zero(k),
        basis,
        window,
        source: src.clone(),
        target: tgt.clone(),
    };
    let dims: BTreeMap<i32, usize> = result.basis.iter().map(|(&t, b)| (t, b.len())).collect();
    let mut diffs = BTreeMap::new();
    for t in (window.0 + 1)..=window.1 {
        let (cols, rows) = (dims[&t], dims[&(t - 1)]);
        let mut m = Matrix::zeros(k, rows, cols);
        for col in 0..cols {
            let mut e = vec![k.zero(); cols];
            e[col] = k.one();
            let image = result.coordinates(&result.morphism(&Chain::new(t, e)).differential());
            for (r, v) in image.coords.into_iter().enumerate() {
                if !k.is_zero(&v) {
                    m.set(r, col, v);
                }
            }
        }
        diffs.insert(t, m);
    }
    result.complex = make_complex(k, &dims, diffs).map_err(|e| McError::ShapeError(e.to_string()))?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology;
    use crate::dgcat::{fixture, Fixture};
    use crate::field::Rationals;
    use crate::mc::iota;
    use std::sync::Arc;

    #[test]
    fn level_zero_recovers_the_hom() {
        let q = Rationals;
        let cat = Arc::new(fixture(&q, Fixture::Disk, 1).unwrap());
        let (a, b) = (MCObject::point(cat.clone(), 0), MCObject::point(cat.clone(), 1));
        let h = hom_complex_mc(&a, &b, Some((0, 1))).unwrap();
        assert_eq!(h.complex, *cat.hom(0, 1));
    }

    #[test]
    fn unit_interval_resolution() {
        let q = Rationals;
        let cat = Arc::new(fixture(&q, Fixture::UnitK, 0).unwrap());
        let x = iota(&cat, 0, 1);
        let h = hom_complex_mc(&x, &x, None).unwrap();
        assert_eq!(h.complex.dims(), BTreeMap::from([(-1, 1), (0, 2)]));
        assert_eq!(homology(&h.complex).nonzero_ranks(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn narrow_window_is_reported() {
        let q = Rationals;
        let cat = Arc::new(fixture(&q, Fixture::UnitK, 0).unwrap());
        let x = iota(&cat, 0, 2);
        assert!(matches!(hom_complex_mc(&x, &x, Some((-1, 0))), Err(McError::WindowTooSmall { .. })));
    }
}
