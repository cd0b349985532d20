use std::collections::BTreeMap;
use std::sync::Arc;

use dgres_core::complexes::{homology, make_complex, tensor, Chain, ChainComplex};
use dgres_core::dgcat::{fixture, is_quasi_equivalence, DgCategory, DgCategoryBuilder, DgFunctor, Fixture, Verdict};
use dgres_core::gen::{polynomial_algebra, random_complexes_category};
use dgres_core::pushout::{free_adjoin, induced_functor, AdjunctionData, PushoutError};
use dgres_core::{Field, Matrix, PrimeField, Rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Objects `a`, `b` with scalar endomorphisms, `Hom(b, a) = 0` and the given
/// `Hom(a, b)`.
fn two_objects<F: Field>(k: &F, hab: ChainComplex<F>) -> Arc<DgCategory<F>> {
    let mut b = DgCategoryBuilder::new(k, &["a", "b"]);
    b.set_hom(0, 0, ChainComplex::concentrated(k, 0, 1));
    b.set_hom(1, 1, ChainComplex::concentrated(k, 0, 1));
    b.set_hom(0, 1, hab);
    b.set_hom(1, 0, ChainComplex::zero(k));
    b.set_unit_basis(0, 0).set_unit_basis(1, 0);
    Arc::new(b.build().unwrap())
}

fn random_cycle<F: Field>(cat: &DgCategory<F>, x: usize, y: usize, q: i32, rng: &mut ChaCha8Rng) -> Chain<F> {
    let k = cat.field();
    let mut c = vec![k.zero(); cat.hom(x, y).dim(q)];
    for v in cat.hom(x, y).differential(q).kernel() {
        dgres_core::linalg::vec_axpy(k, &mut c, &k.random(rng), &v);
    }
    Chain::new(q, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Every successful adjunction is a verified dg-category; refusals only
    /// happen when words can be cut off.
    #[test]
    fn adjunctions_are_dg_categories(seed in any::<u64>()) {
        let k = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_complexes_category(&k, &mut rng, 2);
        let (x, y) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let n = rng.gen_range(-1..=2);
        let g = if rng.gen_bool(0.3) {
            Chain::new(n - 1, vec![k.zero(); base.hom(x, y).dim(n - 1)])
        } else {
            random_cycle(&base, x, y, n - 1, &mut rng)
        };
        // word counts grow too fast for longer truncations on dense random data
        let data = AdjunctionData::new(base, x, y, n, g.clone(), 1).unwrap();
        match free_adjoin(&data) {
            Ok(t) => {
                prop_assert!(t.category.check_laws().is_ok());
                prop_assert_eq!(t.exact, data.is_exact());
            }
            Err(e) => {
                prop_assert!(!data.is_exact());
                prop_assert!(!g.is_zero(&k));
                let unsound = matches!(e, PushoutError::TruncationUnsound { .. });
                prop_assert!(unsound, "unexpected error {:?}", e);
            }
        }
    }
}

#[test]
fn split_hom_formula_without_reverse_homs() {
    let q = Rationals;
    for (fx, d) in [(Fixture::Sphere, 0), (Fixture::Sphere, 2), (Fixture::Disk, 1), (Fixture::Disk, -1)] {
        let base = Arc::new(fixture(&q, fx, d).unwrap());
        for n in [-1, 0, 1, 3] {
            let g = Chain::new(n - 1, vec![q.zero(); base.hom(0, 1).dim(n - 1)]);
            let t = free_adjoin(&AdjunctionData::new(base.clone(), 0, 1, n, g, 1).unwrap()).unwrap();
            assert!(t.exact);
            let words = tensor(base.hom(1, 1), base.hom(0, 0)).unwrap();
            for deg in -6..8 {
                assert_eq!(
                    t.category.hom(0, 1).dim(deg),
                    base.hom(0, 1).dim(deg) + words.dim(deg - n),
                    "fixture {fx:?}({d}), n = {n}, degree {deg}"
                );
            }
        }
    }
}

#[test]
fn tensor_algebra_word_counts() {
    let k = PrimeField::new(7).unwrap();
    for dim in 1..=3 {
        let base = Arc::new(polynomial_algebra(&k, dim));
        for nn in 1..=3 {
            let data = AdjunctionData::new(base.clone(), 0, 0, 0, Chain::new(-1, vec![]), nn).unwrap();
            let t = free_adjoin(&data).unwrap();
            let expected: usize = (1..=nn + 1).map(|m| dim.pow(m as u32)).sum();
            assert_eq!(t.category.hom(0, 0).dim(0), expected);
            assert_eq!(t.category.hom(0, 0).total_dim(), expected);
        }
    }
}

#[test]
fn induced_identity_is_identity() {
    let q = Rationals;
    let base = Arc::new(fixture(&q, Fixture::Disk, 1).unwrap());
    let data = AdjunctionData::new(base.clone(), 0, 1, 1, Chain::new(0, vec![q.one()]), 2).unwrap();
    let t = free_adjoin(&data).unwrap();
    let f = induced_functor(&DgFunctor::identity(base), &t, &t).unwrap();
    let id = DgFunctor::identity(t.category.clone());
    for x in 0..2 {
        for y in 0..2 {
            assert_eq!(f.hom_map(x, y), id.hom_map(x, y));
        }
    }
}

/// `Hom(a, b)`: `g` in degree 0 plus a contractible pair `p ↦ q` in degrees 2, 1.
fn padded_sphere<F: Field>(k: &F) -> Arc<DgCategory<F>> {
    let dims = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
    let diffs = BTreeMap::from([(2, Matrix::identity(k, 1))]);
    two_objects(k, make_complex(k, &dims, diffs).unwrap())
}

#[test]
fn induced_functor_of_a_quasi_equivalence() {
    let q = Rationals;
    let src = padded_sphere(&q);
    let tgt = Arc::new(fixture(&q, Fixture::Sphere, 1).unwrap());
    let mut comps = BTreeMap::new();
    comps.insert((0, 0), BTreeMap::from([(0, Matrix::identity(&q, 1))]));
    comps.insert((1, 1), BTreeMap::from([(0, Matrix::identity(&q, 1))]));
    comps.insert((0, 1), BTreeMap::from([(0, Matrix::identity(&q, 1))]));
    let f = DgFunctor::new(src.clone(), tgt.clone(), vec![0, 1], comps).unwrap();
    assert_eq!(is_quasi_equivalence(&f).verdict, Verdict::Yes);
    for nn in 1..=3 {
        let ds = AdjunctionData::new(src.clone(), 0, 1, 1, Chain::new(0, vec![q.one()]), nn).unwrap();
        let dt = AdjunctionData::new(tgt.clone(), 0, 1, 1, Chain::new(0, vec![q.one()]), nn).unwrap();
        let (s, t) = (free_adjoin(&ds).unwrap(), free_adjoin(&dt).unwrap());
        assert!(s.exact && t.exact);
        let g = induced_functor(&f, &s, &t).unwrap();
        assert_eq!(is_quasi_equivalence(&g).verdict, Verdict::Yes);
        assert!(homology(t.category.hom(0, 1)).is_acyclic());
    }
}

#[test]
fn induced_functor_of_one_object_quasi_isomorphism() {
    // A = k ⊕ (u ↦ v), a square-zero contractible ideal, mapped onto k
    let q = Rationals;
    let mut b = DgCategoryBuilder::new(&q, &["A"]);
    let dims = BTreeMap::from([(0, 2), (1, 1)]);
    let d1 = Matrix::from_i64(&q, 2, 1, &[0, 1]);
    b.set_hom(0, 0, make_complex(&q, &dims, BTreeMap::from([(1, d1)])).unwrap());
    b.set_unit_basis(0, 0);
    let a = Arc::new(b.build().unwrap());
    let unit = Arc::new(fixture(&q, Fixture::UnitK, 0).unwrap());
    let comps = BTreeMap::from([((0, 0), BTreeMap::from([(0, Matrix::from_i64(&q, 1, 2, &[1, 0]))]))]);
    let f = DgFunctor::new(a.clone(), unit.clone(), vec![0], comps).unwrap();
    assert_eq!(is_quasi_equivalence(&f).verdict, Verdict::Yes);
    for n in [0, 1, 2] {
        let ds = AdjunctionData::new(a.clone(), 0, 0, n, Chain::new(n - 1, vec![q.zero(); a.hom(0, 0).dim(n - 1)]), 2).unwrap();
        let dt = AdjunctionData::new(unit.clone(), 0, 0, n, Chain::new(n - 1, vec![q.zero(); unit.hom(0, 0).dim(n - 1)]), 2).unwrap();
        let (s, t) = (free_adjoin(&ds).unwrap(), free_adjoin(&dt).unwrap());
        assert!(!s.exact);
        let g = induced_functor(&f, &s, &t).unwrap();
        assert_eq!(is_quasi_equivalence(&g).verdict, Verdict::Yes);
    }
}

#[test]
fn killing_the_attaching_cycle_is_detected() {
    let q = Rationals;
    let src = Arc::new(fixture(&q, Fixture::Sphere, 1).unwrap());
    let tgt = two_objects(&q, ChainComplex::zero(&q));
    let comps = BTreeMap::from([
        ((0, 0), BTreeMap::from([(0, Matrix::identity(&q, 1))])),
        ((1, 1), BTreeMap::from([(0, Matrix::identity(&q, 1))])),
    ]);
    let f = DgFunctor::new(src.clone(), tgt.clone(), vec![0, 1], comps).unwrap();
    assert_eq!(is_quasi_equivalence(&f).verdict, Verdict::No);
    let ds = AdjunctionData::new(src, 0, 1, 1, Chain::new(0, vec![q.one()]), 1).unwrap();
    let dt = AdjunctionData::new(tgt, 0, 1, 1, Chain::new(0, vec![]), 1).unwrap();
    let (s, t) = (free_adjoin(&ds).unwrap(), free_adjoin(&dt).unwrap());
    let g = induced_functor(&f, &s, &t).unwrap();
    let report = is_quasi_equivalence(&g);
    assert_eq!(report.verdict, Verdict::No);
    assert!(report.fully_faithful.iter().any(|(pair, ok)| *pair == (0, 1) && !ok));
    // the data must be transported along the functor
    let wrong = AdjunctionData::new(t.data.base.clone(), 0, 1, 2, Chain::new(1, vec![]), 1).unwrap();
    let w = free_adjoin(&wrong).unwrap();
    assert!(matches!(induced_functor(&f, &s, &w), Err(PushoutError::IncompatibleData(_))));
}
