use std::collections::BTreeMap;

use super::{DgCatError, DgCategory, DgCategoryBuilder};
use crate::complexes::{make_complex, ChainComplex};
use crate::field::Field;
use crate::linalg::Matrix;

/// Basis of `Hom(V, W)`: elementary maps `E_{w,v}` grouped by degree
/// `deg w − deg v`, ordered by `(w, v)` inside a degree.
fn elementary_basis<F: Field>(v: &ChainComplex<F>, w: &ChainComplex<F>) -> BTreeMap<i32, Vec<(usize, usize)>> {
    let mut by_degree: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    for wi in 0..w.total_dim() {
        let (dw, _) = w.locate(wi);
        for vi in 0..v.total_dim() {
            let (dv, _) = v.locate(vi);
            by_degree.entry(dw - dv).or_default().push((wi, vi));
        }
    }
    by_degree
}

/// Differential of the whole complex as one square matrix on the global basis.
fn global_differential<F: Field>(c: &ChainComplex<F>) -> Matrix<F> {
    let n = c.total_dim();
    let mut m = Matrix::zeros(c.field(), n, n);
    for q in c.degrees() {
        if q > c.lo() {
            m.paste(c.offset(q - 1), c.offset(q), &c.differential(q));
        }
    }
    m
}

/// The dg-category whose objects are the given complexes and whose hom
/// complexes are graded linear maps with `D φ = (-1)^{|φ|} d ∘ φ − φ ∘ d`.
pub fn complexes_category<F: Field>(
    field: &F,
    objects: &[(&str, ChainComplex<F>)],
) -> Result<DgCategory<F>, DgCatError> {
    let names: Vec<&str> = objects.iter().map(|(n, _)| *n).collect();
    let mut b = DgCategoryBuilder::new(field, &names);
    let m = objects.len();
    let bases: Vec<Vec<BTreeMap<i32, Vec<(usize, usize)>>>> = (0..m)
        .map(|x| (0..m).map(|y| elementary_basis(&objects[x].1, &objects[y].1)).collect())
        .collect();
    // (w, v) -> global index in Hom(x, y)
    let index = |x: usize, y: usize| -> BTreeMap<(usize, usize), usize> {
        bases[x][y].values().flatten().enumerate().map(|(i, &p)| (p, i)).collect()
    };
    let diffs: Vec<Matrix<F>> = objects.iter().map(|(_, c)| global_differential(c)).collect();
    for x in 0..m {
        for y in 0..m {
            let basis = &bases[x][y];
            if basis.is_empty() {
                continue;
            }
            let local: BTreeMap<(usize, usize), usize> = basis
                .values()
                .flat_map(|ps| ps.iter().enumerate().map(|(i, &p)| (p, i)))
                .collect();
            let (dv, dw) = (&diffs[x], &diffs[y]);
            let mut ds = BTreeMap::new();
            for (&r, ps) in basis {
                let below = basis.get(&(r - 1)).map_or(0, |b| b.len());
                let mut mat = Matrix::zeros(field, below, ps.len());
                let s = field.sign(r as i64);
                for (col, &(wi, vi)) in ps.iter().enumerate() {
                    // (-1)^r d_W E_{w,v} = (-1)^r Σ_u d_W[u, w] E_{u,v}
                    for u in 0..dw.rows() {
                        let c = dw.get(u, wi);
                        if !field.is_zero(c) {
                            mat.add_at(local[&(u, vi)], col, &field.mul(&s, c));
                        }
                    }
                    // −E_{w,v} d_V = −Σ_t d_V[v, t] E_{w,t}
                    for t in 0..dv.cols() {
                        let c = dv.get(vi, t);
                        if !field.is_zero(c) {
                            mat.add_at(local[&(wi, t)], col, &field.neg(c));
                        }
                    }
                }
                ds.insert(r, mat);
            }
            let dims = basis.iter().map(|(&r, ps)| (r, ps.len())).collect();
            b.set_hom(x, y, make_complex(field, &dims, ds)?);
        }
    }
    for x in 0..m {
        let dim = objects[x].1.total_dim();
        if dim == 0 {
            continue;
        }
        let hom = b.hom(x, x).expect("nonzero endomorphisms").clone();
        let idx = index(x, x);
        let mut unit = vec![field.zero(); hom.dim(0)];
        let off = hom.offset(0);
        for v in 0..dim {
            unit[idx[&(v, v)] - off] = field.one();
        }
        b.set_unit(x, unit);
    }
    for x in 0..m {
        for y in 0..m {
            let ixy = index(x, y);
            for z in 0..m {
                let iyz = index(y, z);
                let ixz = index(x, z);
                for (&(w, v), &f) in &ixy {
                    for u in 0..objects[z].1.total_dim() {
                        let g = iyz[&(u, w)];
                        b.set_product(x, y, z, g, f, vec![(ixz[&(u, v)], field.one())]);
                    }
                }
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology;
    use crate::field::Rationals;

    fn interval(q: &Rationals) -> ChainComplex<Rationals> {
        make_complex(
            q,
            &BTreeMap::from([(0, 1), (1, 1)]),
            BTreeMap::from([(1, Matrix::from_i64(q, 1, 1, &[1]))]),
        )
        .unwrap()
    }

    #[test]
    fn endomorphisms_of_a_contractible_complex_are_acyclic() {
        let q = Rationals;
        let cat = complexes_category(&q, &[("I", interval(&q))]).unwrap();
        assert_eq!(cat.hom(0, 0).dims(), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        assert!(homology(cat.hom(0, 0)).is_acyclic());
    }

    #[test]
    fn homs_compute_derived_homs() {
        let q = Rationals;
        let k0 = ChainComplex::concentrated(&q, 0, 1);
        let k1 = ChainComplex::concentrated(&q, 1, 2);
        let cat = complexes_category(&q, &[("a", k0), ("b", k1), ("I", interval(&q))]).unwrap();
        assert_eq!(cat.hom_homology(0, 1).nonzero_ranks(), BTreeMap::from([(1, 2)]));
        assert!(cat.hom_homology(0, 2).is_acyclic());
    }
}
