use std::collections::HashMap;

use super::{DgCatError, DgCategory, ObjId};
use crate::complexes::Chain;
use crate::field::Field;
use crate::linalg::{vec_is_zero, Matrix};

/// The homotopy category: `H_0` of every hom complex with induced composition.
#[derive(Debug, Clone)]
pub struct H0Category<F: Field> {
    field: F,
    objects: Vec<String>,
    dims: Vec<usize>,
    /// `(x, y, z) -> table[i][j]`, class of `rep_i ∘ rep_j`
    constants: HashMap<(ObjId, ObjId, ObjId), Vec<Vec<Vec<F::Elem>>>>,
    units: Vec<Vec<F::Elem>>,
}

impl<F: Field> H0Category<F> {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn hom_dim(&self, x: ObjId, y: ObjId) -> usize {
        self.dims[x * self.objects.len() + y]
    }

    pub fn unit(&self, x: ObjId) -> &[F::Elem] {
        &self.units[x]
    }

    /// Composite of classes `[g] ∘ [f]`, `f: x → y`, `g: y → z`.
    pub fn compose(&self, x: ObjId, y: ObjId, z: ObjId, g: &[F::Elem], f: &[F::Elem]) -> Vec<F::Elem> {
        let k = &self.field;
        let mut out = vec![k.zero(); self.hom_dim(x, z)];
        let table = &self.constants[&(x, y, z)];
        for (i, gi) in g.iter().enumerate() {
            for (j, fj) in f.iter().enumerate() {
                let c = k.mul(gi, fj);
                if k.is_zero(&c) {
                    continue;
                }
                crate::linalg::vec_axpy(k, &mut out, &c, &table[i][j]);
            }
        }
        out
    }
}

/// Degree-0 boundaries of `Hom(x, y)`, as columns of `d_1`.
pub(crate) fn boundaries<F: Field>(cat: &DgCategory<F>, x: ObjId, y: ObjId) -> Vec<Chain<F>> {
    let d1 = cat.hom(x, y).differential(1);
    (0..d1.cols()).map(|j| Chain::new(0, d1.column(j))).collect()
}

pub fn h0_category<F: Field>(cat: &DgCategory<F>) -> H0Category<F> {
    let n = cat.object_count();
    let k = cat.field();
    let reps = |x, y| -> Vec<Chain<F>> {
        let h = cat.hom_homology(x, y);
        h.representatives
            .get(&0)
            .map(|rs| rs.iter().map(|r| Chain::new(0, r.clone())).collect())
            .unwrap_or_default()
    };
    let mut dims = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            dims.push(cat.hom_homology(x, y).rank(0));
        }
    }
    let mut constants = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            let fs = reps(x, y);
            for z in 0..n {
                let gs = reps(y, z);
                let hxz = cat.hom_homology(x, z);
                let table = gs
                    .iter()
                    .map(|g| {
                        fs.iter()
                            .map(|f| {
                                hxz.classify(&cat.compose(x, y, z, g, f))
                                    .expect("composite of cycles is a cycle")
                            })
                            .collect()
                    })
                    .collect();
                // boundaries compose to boundaries, so the table does not
                // depend on the chosen representatives
                for b in boundaries(cat, y, z) {
                    for f in &fs {
                        assert!(hxz.is_boundary(&cat.compose(x, y, z, &b, f)));
                    }
                }
                for b in boundaries(cat, x, y) {
                    for g in &gs {
                        assert!(hxz.is_boundary(&cat.compose(x, y, z, g, &b)));
                    }
                }
                constants.insert((x, y, z), table);
            }
        }
    }
    let units = (0..n)
        .map(|x| cat.hom_homology(x, x).classify(&cat.unit(x)).expect("unit is closed"))
        .collect();
    H0Category {
        field: k.clone(),
        objects: cat.objects().to_vec(),
        dims,
        constants,
        units,
    }
}

/// Exact witness that `forward: x → y` is invertible up to homotopy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibilityCertificate<F: Field> {
    pub source: ObjId,
    pub target: ObjId,
    pub forward: Chain<F>,
    pub backward: Chain<F>,
    /// `d(left_homotopy) = backward ∘ forward − id_x`
    pub left_homotopy: Chain<F>,
    /// `d(right_homotopy) = forward ∘ backward − id_y`
    pub right_homotopy: Chain<F>,
}

impl<F: Field> InvertibilityCertificate<F> {
    /// Re-checks every identity exactly, without homology computations.
    pub fn verify(&self, cat: &DgCategory<F>) -> bool {
        let (x, y) = (self.source, self.target);
        let k = cat.field();
        let closed = |a, b, c: &Chain<F>| c.degree == 0 && cat.d(a, b, c).is_zero(k);
        if !closed(x, y, &self.forward) || !closed(y, x, &self.backward) {
            return false;
        }
        let check = |obj: ObjId, comp: Chain<F>, h: &Chain<F>| {
            if h.degree != 1 || h.coords.len() != cat.hom(obj, obj).dim(1) {
                return false;
            }
            let unit = cat.unit(obj);
            let residual: Vec<_> = comp.coords.iter().zip(&unit.coords).map(|(a, b)| k.sub(a, b)).collect();
            cat.d(obj, obj, h).coords == residual
        };
        check(x, cat.compose(x, y, x, &self.backward, &self.forward), &self.left_homotopy)
            && check(y, cat.compose(y, x, y, &self.forward, &self.backward), &self.right_homotopy)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invertibility<F: Field> {
    Invertible(InvertibilityCertificate<F>),
    /// At least one one-sided inverse system is infeasible over `H_0`.
    NotInvertible { left_solvable: bool, right_solvable: bool },
    /// Reserved for searches that cannot decide; exact linear algebra over
    /// `H_0` always decides, so this is not produced at present.
    Inconclusive,
}

impl<F: Field> Invertibility<F> {
    pub fn certificate(&self) -> Option<&InvertibilityCertificate<F>> {
        match self {
            Invertibility::Invertible(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_invertible(&self) -> bool {
        matches!(self, Invertibility::Invertible(_))
    }
}

fn check_closed_degree0<F: Field>(
    cat: &DgCategory<F>,
    x: ObjId,
    y: ObjId,
    u: &Chain<F>,
) -> Result<(), DgCatError> {
    if u.degree != 0 {
        return Err(DgCatError::WrongDegree(u.degree));
    }
    assert_eq!(u.coords.len(), cat.hom(x, y).dim(0), "morphism has wrong dimension");
    if !cat.d(x, y, u).is_zero(cat.field()) {
        return Err(DgCatError::NotClosed);
    }
    Ok(())
}

/// Solves `[v][u] = [id_x]` and `[u][v] = [id_y]` over `H_0`.
pub fn is_homotopy_invertible<F: Field>(
    cat: &DgCategory<F>,
    x: ObjId,
    y: ObjId,
    u: &Chain<F>,
) -> Result<Invertibility<F>, DgCatError> {
    check_closed_degree0(cat, x, y, u)?;
    let k = cat.field();
    let (hx, hy) = (cat.hom_homology(x, x), cat.hom_homology(y, y));
    let reps: Vec<Chain<F>> = cat
        .hom_homology(y, x)
        .representatives
        .get(&0)
        .map(|rs| rs.iter().map(|r| Chain::new(0, r.clone())).collect())
        .unwrap_or_default();
    let id_x = hx.classify(&cat.unit(x)).expect("unit is closed");
    let id_y = hy.classify(&cat.unit(y)).expect("unit is closed");
    let left_cols: Vec<_> = reps
        .iter()
        .map(|r| hx.classify(&cat.compose(x, y, x, r, u)).expect("cycle"))
        .collect();
    let right_cols: Vec<_> = reps
        .iter()
        .map(|r| hy.classify(&cat.compose(y, x, y, u, r)).expect("cycle"))
        .collect();
    let left = Matrix::from_columns(k, id_x.len(), &left_cols);
    let right = Matrix::from_columns(k, id_y.len(), &right_cols);
    let stacked_cols: Vec<Vec<F::Elem>> = left_cols
        .iter()
        .zip(&right_cols)
        .map(|(a, b)| a.iter().chain(b).cloned().collect())
        .collect();
    let rhs: Vec<F::Elem> = id_x.iter().chain(&id_y).cloned().collect();
    let stacked = Matrix::from_columns(k, rhs.len(), &stacked_cols);
    let Some(coeffs) = stacked.solve(&rhs) else {
        return Ok(Invertibility::NotInvertible {
            left_solvable: left.solve(&id_x).is_some(),
            right_solvable: right.solve(&id_y).is_some(),
        });
    };
    let mut v = vec![k.zero(); cat.hom(y, x).dim(0)];
    for (c, r) in coeffs.iter().zip(&reps) {
        crate::linalg::vec_axpy(k, &mut v, c, &r.coords);
    }
    let backward = Chain::new(0, v);
    let left_homotopy = homotopy(cat, x, &cat.compose(x, y, x, &backward, u));
    let right_homotopy = homotopy(cat, y, &cat.compose(y, x, y, u, &backward));
    let cert = InvertibilityCertificate {
        source: x,
        target: y,
        forward: u.clone(),
        backward,
        left_homotopy,
        right_homotopy,
    };
    debug_assert!(cert.verify(cat));
    Ok(Invertibility::Invertible(cert))
}

/// Some `h` with `dh = comp − id`, given that the difference is a boundary.
fn homotopy<F: Field>(cat: &DgCategory<F>, x: ObjId, comp: &Chain<F>) -> Chain<F> {
    let k = cat.field();
    let unit = cat.unit(x);
    let residual: Vec<_> = comp.coords.iter().zip(&unit.coords).map(|(a, b)| k.sub(a, b)).collect();
    let d1 = cat.hom(x, x).differential(1);
    if vec_is_zero(k, &residual) {
        return Chain::new(1, vec![k.zero(); d1.cols()]);
    }
    Chain::new(1, d1.solve(&residual).expect("residual is a boundary"))
}

/// A strict two-sided inverse of a closed degree-0 morphism, if one exists.
pub fn strict_inverse<F: Field>(
    cat: &DgCategory<F>,
    x: ObjId,
    y: ObjId,
    u: &Chain<F>,
) -> Result<Option<Chain<F>>, DgCatError> {
    check_closed_degree0(cat, x, y, u)?;
    let k = cat.field();
    let dim = cat.hom(y, x).dim(0);
    // v ↦ (v∘u, u∘v) is linear in v
    let mut cols = Vec::with_capacity(dim);
    for i in 0..dim {
        let e = cat.basis_chain(y, x, 0, i);
        let mut col = cat.compose(x, y, x, &e, u).coords;
        col.extend(cat.compose(y, x, y, u, &e).coords);
        cols.push(col);
    }
    let mut rhs = cat.unit(x).coords;
    rhs.extend(cat.unit(y).coords);
    let m = Matrix::from_columns(k, rhs.len(), &cols);
    Ok(m.solve(&rhs).map(|v| Chain::new(0, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgcat::{fixture, Fixture};
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn h0_of_fixtures() {
        let q = Rationals;
        let unit = h0_category(&fixture(&q, Fixture::UnitK, 0).unwrap());
        assert_eq!(unit.hom_dim(0, 0), 1);
        assert_eq!(unit.compose(0, 0, 0, unit.unit(0), unit.unit(0)), unit.unit(0).to_vec());
        assert_eq!(h0_category(&fixture(&q, Fixture::Disk, 1).unwrap()).hom_dim(0, 1), 0);
        assert_eq!(h0_category(&fixture(&q, Fixture::Sphere, 1).unwrap()).hom_dim(0, 1), 1);
    }

    #[test]
    fn identity_and_scalars_are_invertible() {
        let f = PrimeField::new(5).unwrap();
        let cat = fixture(&f, Fixture::UnitK, 0).unwrap();
        let id = cat.unit(0);
        let cert = is_homotopy_invertible(&cat, 0, 0, &id).unwrap();
        let cert = cert.certificate().unwrap();
        assert_eq!(cert.backward, id);
        assert!(cert.verify(&cat));
        let three = Chain::new(0, vec![3]);
        let cert = is_homotopy_invertible(&cat, 0, 0, &three).unwrap();
        assert_eq!(cert.certificate().unwrap().backward, Chain::new(0, vec![2]));
        assert_eq!(strict_inverse(&cat, 0, 0, &three).unwrap(), Some(Chain::new(0, vec![2])));
    }

    #[test]
    fn zero_is_not_invertible() {
        let q = Rationals;
        let cat = fixture(&q, Fixture::UnitK, 0).unwrap();
        let z = cat.zero(0, 0, 0);
        assert_eq!(
            is_homotopy_invertible(&cat, 0, 0, &z).unwrap(),
            Invertibility::NotInvertible { left_solvable: false, right_solvable: false }
        );
        // a -> b in the sphere category has no inverse at all
        let s = fixture(&q, Fixture::Sphere, 1).unwrap();
        let g = s.basis_chain(0, 1, 0, 0);
        assert!(!is_homotopy_invertible(&s, 0, 1, &g).unwrap().is_invertible());
    }

    #[test]
    fn preconditions_are_checked() {
        let q = Rationals;
        let d = fixture(&q, Fixture::Disk, 1).unwrap();
        let f = d.basis_chain(0, 1, 1, 0);
        assert_eq!(is_homotopy_invertible(&d, 0, 1, &f).unwrap_err(), DgCatError::WrongDegree(1));
        let d0 = fixture(&q, Fixture::Disk, 0).unwrap();
        let f0 = d0.basis_chain(0, 1, 0, 0);
        assert_eq!(is_homotopy_invertible(&d0, 0, 1, &f0).unwrap_err(), DgCatError::NotClosed);
    }
}
