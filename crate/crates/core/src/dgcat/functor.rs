use std::collections::BTreeMap;
use std::sync::Arc;

use super::{DgCatError, DgCategory, ObjId};
use crate::complexes::{Chain, ChainMap};
use crate::field::Field;
use crate::linalg::Matrix;

/// A dg-functor between finite dg-categories.
#[derive(Debug, Clone)]
pub struct DgFunctor<F: Field> {
    source: Arc<DgCategory<F>>,
    target: Arc<DgCategory<F>>,
    object_map: Vec<ObjId>,
    /// indexed by `x * |source| + y`
    maps: Vec<ChainMap<F>>,
}

impl<F: Field> DgFunctor<F> {
    /// Validates that every component is a chain map and that units and
    /// composition are preserved. Missing hom components are zero.
    pub fn new(
        source: Arc<DgCategory<F>>,
        target: Arc<DgCategory<F>>,
        object_map: Vec<ObjId>,
        components: BTreeMap<(ObjId, ObjId), BTreeMap<i32, Matrix<F>>>,
    ) -> Result<Self, DgCatError> {
        if source.field() != target.field() {
            return Err(DgCatError::FieldMismatch);
        }
        let n = source.object_count();
        if object_map.len() != n {
            return Err(DgCatError::FunctorViolation { what: "object map", witness: None });
        }
        if let Some(&bad) = object_map.iter().find(|&&o| o >= target.object_count()) {
            return Err(DgCatError::UnknownObject(bad.to_string()));
        }
        let mut maps = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let comps = components.get(&(x, y)).cloned().unwrap_or_default();
                let m = ChainMap::new(
                    source.hom(x, y).clone(),
                    target.hom(object_map[x], object_map[y]).clone(),
                    0,
                    comps,
                )?;
                maps.push(m);
            }
        }
        let functor = Self {
            source,
            target,
            object_map,
            maps,
        };
        functor.validate()?;
        Ok(functor)
    }

    pub fn identity(cat: Arc<DgCategory<F>>) -> Self {
        let n = cat.object_count();
        let maps = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| ChainMap::identity(cat.hom(x, y)))
            .collect();
        Self {
            source: cat.clone(),
            target: cat,
            object_map: (0..n).collect(),
            maps,
        }
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &DgFunctor<F>) -> Result<Self, DgCatError> {
        if *self.target != *other.source {
            return Err(DgCatError::FunctorViolation { what: "composable endpoints", witness: None });
        }
        let n = self.source.object_count();
        let mut comps = BTreeMap::new();
        for x in 0..n {
            for y in 0..n {
                let inner = self.hom_map(x, y);
                let outer = other.hom_map(self.object_map[x], self.object_map[y]);
                let c = self
                    .source
                    .hom(x, y)
                    .degrees()
                    .map(|q| (q, outer.component(q).mul(&inner.component(q))))
                    .collect();
                comps.insert((x, y), c);
            }
        }
        let object_map = self.object_map.iter().map(|&o| other.object_map[o]).collect();
        Self::new(self.source.clone(), other.target.clone(), object_map, comps)
    }

    fn validate(&self) -> Result<(), DgCatError> {
        let (s, t) = (&*self.source, &*self.target);
        let n = s.object_count();
        for x in 0..n {
            if self.apply(x, x, &s.unit(x)) != t.unit(self.object_map[x]) {
                return Err(DgCatError::FunctorViolation { what: "units", witness: None });
            }
        }
        for x in 0..n {
            for y in 0..n {
                let fs = s.basis(x, y);
                for z in 0..n {
                    for (gr, g) in s.basis(y, z) {
                        let fg = self.apply(y, z, &g);
                        for (_, f) in &fs {
                            let lhs = self.apply(x, z, &s.compose(x, y, z, &g, f));
                            let (a, b, c) = (self.object_map[x], self.object_map[y], self.object_map[z]);
                            let rhs = t.compose(a, b, c, &fg, &self.apply(x, y, f));
                            if lhs != rhs {
                                return Err(DgCatError::FunctorViolation {
                                    what: "composition",
                                    witness: Some(gr),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<DgCategory<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DgCategory<F>> {
        &self.target
    }

    pub fn object(&self, x: ObjId) -> ObjId {
        self.object_map[x]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.object_map
    }

    pub fn hom_map(&self, x: ObjId, y: ObjId) -> &ChainMap<F> {
        &self.maps[x * self.source.object_count() + y]
    }

    pub fn apply(&self, x: ObjId, y: ObjId, a: &Chain<F>) -> Chain<F> {
        let m = self.hom_map(x, y).component(a.degree);
        Chain::new(a.degree, m.apply(&a.coords))
    }
}
