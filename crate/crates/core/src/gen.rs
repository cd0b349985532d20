//! Random instances for property tests and demonstrations.

use std::sync::Arc;

use rand::Rng;

use crate::complexes::{Chain, ChainComplex};
use crate::dgcat::{complexes_category, strict_inverse, DgCategory, DgCategoryBuilder, ObjId};
use crate::field::Field;
use crate::linalg::{vec_axpy, Matrix};
use crate::mc::{
    all_simplices, simplices, gauge_transport, strict_from_chain, MCObject, MultiIndex, SimplicialCochain,
};

/// A complex in degrees `lo..lo + len` with dimensions below `max_dim + 1`.
/// Each differential maps into the kernel of the next one down.
pub fn random_complex<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    lo: i32,
    len: usize,
    max_dim: usize,
) -> ChainComplex<F> {
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
    let mut diffs: Vec<Matrix<F>> = Vec::with_capacity(len);
    for i in 0..len {
        let rows = if i == 0 { 0 } else { dims[i - 1] };
        let m = match diffs.last() {
            Some(prev) if rows > 0 => {
                let ker = prev.kernel();
                let cols: Vec<Vec<F::Elem>> = (0..dims[i])
                    .map(|_| {
                        let mut col = vec![field.zero(); rows];
                        for k in &ker {
                            vec_axpy(field, &mut col, &field.random(rng), k);
                        }
                        col
                    })
                    .collect();
                Matrix::from_columns(field, rows, &cols)
            }
            _ => Matrix::random(field, rows, dims[i], rng),
        };
        diffs.push(m);
    }
    ChainComplex::from_parts(field, lo, dims, diffs).expect("square-zero by construction")
}

/// The category of `count` random complexes supported in degrees `-1..=1`.
pub fn random_complexes_category<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    count: usize,
) -> Arc<DgCategory<F>> {
    let names: Vec<String> = (0..count).map(|i| format!("V{i}")).collect();
    let objects: Vec<(&str, ChainComplex<F>)> = names
        .iter()
        .map(|n| {
            let mut c = random_complex(field, rng, -1, 3, 1);
            while c.total_dim() == 0 {
                c = random_complex(field, rng, -1, 3, 1);
            }
            (n.as_str(), c)
        })
        .collect();
    Arc::new(complexes_category(field, &objects).expect("complexes form a dg-category"))
}

/// One object with endomorphisms `k[t]/t^dim` in degree 0.
pub fn polynomial_algebra<F: Field>(field: &F, dim: usize) -> DgCategory<F> {
    let mut b = DgCategoryBuilder::new(field, &["A"]);
    b.set_hom(0, 0, ChainComplex::concentrated(field, 0, dim));
    for i in 0..dim {
        for j in 0..dim {
            if i + j < dim {
                b.set_product(0, 0, 0, i, j, vec![(i + j, field.one())]);
            }
        }
    }
    let mut unit = vec![field.zero(); dim];
    unit[0] = field.one();
    b.set_unit(0, unit);
    b.build().expect("truncated polynomials form an algebra")
}

/// A random homogeneous element of `Hom(x, y)`.
pub fn random_element<F: Field, R: Rng + ?Sized>(
    cat: &DgCategory<F>,
    x: ObjId,
    y: ObjId,
    degree: i32,
    rng: &mut R,
) -> Chain<F> {
    let k = cat.field();
    Chain::new(degree, (0..cat.hom(x, y).dim(degree)).map(|_| k.random(rng)).collect())
}

/// `λ (id + d h)` with a strict inverse, retried until invertible.
pub fn random_closed_automorphism<F: Field, R: Rng + ?Sized>(
    cat: &DgCategory<F>,
    x: ObjId,
    rng: &mut R,
) -> Chain<F> {
    let k = cat.field();
    loop {
        let h = random_element(cat, x, x, 1, rng);
        let mut g = cat.unit(x);
        vec_axpy(k, &mut g.coords, &k.one(), &cat.d(x, x, &h).coords);
        let g = Chain::new(0, crate::linalg::vec_scale(k, &k.random_nonzero(rng), &g.coords));
        if strict_inverse(cat, x, x, &g).expect("closed degree 0").is_some() {
            return g;
        }
    }
}

/// A random cochain with components on simplices of level `min_level` and up.
pub fn random_cochain<F: Field, R: Rng + ?Sized>(
    cat: &DgCategory<F>,
    n: usize,
    t: i32,
    source: Vec<ObjId>,
    target: Vec<ObjId>,
    min_level: usize,
    rng: &mut R,
) -> SimplicialCochain<F> {
    let mut c = SimplicialCochain::zero(n, t, source, target);
    for i in all_simplices(n, min_level) {
        let v: Vec<F::Elem> = (0..c.hom_dim(cat, &i)).map(|_| cat.field().random(rng)).collect();
        c.set(cat.field(), i, v);
    }
    c
}

/// Strict object on the single object `x`: random closed automorphisms on
/// consecutive edges, composites on the others.
pub fn random_strict_mc<F: Field, R: Rng + ?Sized>(
    cat: &Arc<DgCategory<F>>,
    x: ObjId,
    n: usize,
    rng: &mut R,
) -> MCObject<F> {
    let mut eta = SimplicialCochain::zero(n, -1, vec![x; n + 1], vec![x; n + 1]);
    for i in 0..n {
        eta.set(cat.field(), MultiIndex::edge(i, i + 1), random_closed_automorphism(cat, x, rng).coords);
    }
    with_composite_edges(cat, &eta)
}

/// Fills in every long edge with the composite of the consecutive ones.
fn with_composite_edges<F: Field>(cat: &Arc<DgCategory<F>>, chain: &SimplicialCochain<F>) -> MCObject<F> {
    let n = chain.n();
    let x = chain.source()[0];
    let mut eta = chain.clone();
    for i in 0..n {
        let mut acc = chain.get(cat, &MultiIndex::edge(i, i + 1));
        for j in i + 2..=n {
            acc = cat.compose(x, x, x, &chain.get(cat, &MultiIndex::edge(j - 1, j)), &acc);
            eta.set(cat.field(), MultiIndex::edge(i, j), acc.coords.clone());
        }
    }
    let obj = MCObject::new(cat.clone(), eta).expect("strict composites are Maurer–Cartan");
    debug_assert_eq!(strict_from_chain(&obj), obj);
    obj
}

/// Degree-0 cochain with random closed automorphisms at the vertices and
/// random higher components, restricted to simplices ending at `only_end`
/// when given.
pub fn random_gauge<F: Field, R: Rng + ?Sized>(
    cat: &DgCategory<F>,
    x: ObjId,
    n: usize,
    only_end: Option<usize>,
    rng: &mut R,
) -> SimplicialCochain<F> {
    let mut g = SimplicialCochain::zero(n, 0, vec![x; n + 1], vec![x; n + 1]);
    for v in 0..=n {
        g.set(cat.field(), MultiIndex::vertex(v), random_closed_automorphism(cat, x, rng).coords);
    }
    for i in all_simplices(n, 1) {
        if only_end.map_or(true, |e| i.last() == e) {
            let v = random_element(cat, x, x, i.level() as i32, rng).coords;
            g.set(cat.field(), i, v);
        }
    }
    g
}

/// A generic (non-strict) MC object: a gauge transform of a strict one.
pub fn random_mc<F: Field, R: Rng + ?Sized>(
    cat: &Arc<DgCategory<F>>,
    x: ObjId,
    n: usize,
    rng: &mut R,
) -> MCObject<F> {
    let strict = random_strict_mc(cat, x, n, rng);
    let g = random_gauge(cat, x, n, None, rng);
    gauge_transport(&strict, &g).expect("random gauge is invertible").0
}

/// A non-strict MC object whose edges stay strictly invertible: the gauge
/// has no edge components.
pub fn random_mc_strict_edges<F: Field, R: Rng + ?Sized>(
    cat: &Arc<DgCategory<F>>,
    x: ObjId,
    n: usize,
    rng: &mut R,
) -> MCObject<F> {
    let strict = random_strict_mc(cat, x, n, rng);
    let mut g = random_gauge(cat, x, n, None, rng);
    for i in simplices(n, 1) {
        let zero = vec![cat.field().zero(); g.hom_dim(cat, &i)];
        g.set(cat.field(), i, zero);
    }
    gauge_transport(&strict, &g).expect("random gauge is invertible").0
}

/// An MC object whose components of level ≥ 2 vanish unless they end at `n`.
pub fn random_inductive_mc<F: Field, R: Rng + ?Sized>(
    cat: &Arc<DgCategory<F>>,
    x: ObjId,
    n: usize,
    rng: &mut R,
) -> MCObject<F> {
    let strict = random_strict_mc(cat, x, n, rng);
    let g = random_gauge(cat, x, n, Some(n), rng);
    gauge_transport(&strict, &g).expect("random gauge is invertible").0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_objects() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cat = random_complexes_category(&f, &mut rng, 2);
        let x = random_mc(&cat, 0, 2, &mut rng);
        assert_eq!(x.n(), 2);
        let y = random_inductive_mc(&cat, 1, 3, &mut rng);
        assert!(y.eta().components().keys().all(|i| i.level() < 2 || i.last() == 3));
    }
}
