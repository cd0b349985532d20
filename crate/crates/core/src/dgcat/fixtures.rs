use std::collections::BTreeMap;
use std::str::FromStr;

use super::{DgCatError, DgCategory, DgCategoryBuilder};
use crate::complexes::{make_complex, ChainComplex};
use crate::field::Field;
use crate::linalg::Matrix;

/// Small named dg-categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// One object with endomorphisms `k` in degree 0.
    UnitK,
    /// Objects `a`, `b` with `Hom(a, b) = k·g`, `|g| = n - 1`.
    Sphere,
    /// The sphere category with an extra `f`, `|f| = n`, `df = g`.
    Disk,
}

impl FromStr for Fixture {
    type Err = DgCatError;
    fn from_str(s: &str) -> Result<Self, DgCatError> {
        match s {
            "unit_k" => Ok(Fixture::UnitK),
            "sphere" => Ok(Fixture::Sphere),
            "disk" => Ok(Fixture::Disk),
            _ => Err(DgCatError::UnknownFixture(s.to_string())),
        }
    }
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::UnitK => "unit_k",
            Fixture::Sphere => "sphere",
            Fixture::Disk => "disk",
        }
    }
}

/// Builds a fixture; `n` is ignored for [`Fixture::UnitK`].
pub fn fixture<F: Field>(field: &F, which: Fixture, n: i32) -> Result<DgCategory<F>, DgCatError> {
    match which {
        Fixture::UnitK => {
            let mut b = DgCategoryBuilder::new(field, &["*"]);
            b.set_hom(0, 0, ChainComplex::concentrated(field, 0, 1)).set_unit_basis(0, 0);
            b.build()
        }
        Fixture::Sphere | Fixture::Disk => {
            let hom = if which == Fixture::Sphere {
                ChainComplex::concentrated(field, n - 1, 1)
            } else {
                make_complex(
                    field,
                    &BTreeMap::from([(n - 1, 1), (n, 1)]),
                    BTreeMap::from([(n, Matrix::from_i64(field, 1, 1, &[1]))]),
                )?
            };
            let mut b = DgCategoryBuilder::new(field, &["a", "b"]);
            b.set_hom(0, 0, ChainComplex::concentrated(field, 0, 1))
                .set_hom(1, 1, ChainComplex::concentrated(field, 0, 1))
                .set_hom(0, 1, hom)
                .set_unit_basis(0, 0)
                .set_unit_basis(1, 0);
            b.build()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn sphere_and_disk_homs() {
        let q = Rationals;
        let s = fixture(&q, Fixture::Sphere, 2).unwrap();
        assert_eq!(s.hom(0, 1).dims(), BTreeMap::from([(1, 1)]));
        assert_eq!(s.hom(1, 0).total_dim(), 0);
        let d = fixture(&q, Fixture::Disk, 2).unwrap();
        assert_eq!(d.hom(0, 1).dims(), BTreeMap::from([(1, 1), (2, 1)]));
        assert!(d.hom_homology(0, 1).is_acyclic());
    }

    #[test]
    fn fixture_names_round_trip() {
        for f in [Fixture::UnitK, Fixture::Sphere, Fixture::Disk] {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
        assert!("ball".parse::<Fixture>().is_err());
        let p = PrimeField::new(3).unwrap();
        assert_eq!(fixture(&p, Fixture::Disk, 0).unwrap().hom(0, 1).dims(), BTreeMap::from([(-1, 1), (0, 1)]));
    }
}
