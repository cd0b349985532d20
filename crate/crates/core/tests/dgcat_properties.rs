use std::collections::BTreeMap;
use std::sync::Arc;

use dgres_core::complexes::Chain;
use dgres_core::dgcat::{
    fixture, h0_category, is_homotopy_invertible, is_quasi_equivalence, DgCatError, DgCategoryBuilder, DgFunctor,
    Fixture, Verdict,
};
use dgres_core::gen::{random_closed_automorphism, random_complexes_category, random_element};
use dgres_core::linalg::vec_axpy;
use dgres_core::{Field, Matrix, PrimeField, Rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn k() -> PrimeField {
    PrimeField::new(101).unwrap()
}

/// A random closed degree-0 element.
fn random_cycle(cat: &dgres_core::dgcat::DgCategory<PrimeField>, x: usize, y: usize, rng: &mut ChaCha8Rng) -> Chain<PrimeField> {
    let z = cat.hom(x, y).differential(0).kernel();
    let mut c = vec![cat.field().zero(); cat.hom(x, y).dim(0)];
    for v in &z {
        vec_axpy(cat.field(), &mut c, &cat.field().random(rng), v);
    }
    Chain::new(0, c)
}

fn perturb(cat: &dgres_core::dgcat::DgCategory<PrimeField>, x: usize, y: usize, a: &Chain<PrimeField>, rng: &mut ChaCha8Rng) -> Chain<PrimeField> {
    let h = random_element(cat, x, y, 1, rng);
    let mut out = a.clone();
    vec_axpy(cat.field(), &mut out.coords, &cat.field().one(), &cat.d(x, y, &h).coords);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn random_categories_satisfy_the_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = random_complexes_category(&k(), &mut rng, 3);
        prop_assert!(cat.check_laws().is_ok());
        prop_assert_eq!(&cat.to_builder().build().unwrap(), &*cat);
    }

    #[test]
    fn corrupted_products_are_rejected(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = random_complexes_category(&k(), &mut rng, 2);
        let entries: Vec<_> = cat
            .products()
            .iter()
            .flat_map(|(&key, m)| m.iter().map(move |(&gf, v)| (key, gf, v.clone())))
            .collect();
        let ((x, y, z), (g, f), v) = entries[rng.gen_range(0..entries.len())].clone();
        let mut b: DgCategoryBuilder<PrimeField> = cat.to_builder();
        let kk = k();
        let doubled = v.iter().map(|(i, c)| (*i, kk.add(c, c))).collect();
        b.set_product(x, y, z, g, f, doubled);
        let err = b.build().unwrap_err();
        let law = matches!(
            err,
            DgCatError::UnitViolation { .. } | DgCatError::AssociativityViolation { .. } | DgCatError::LeibnizViolation { .. }
        );
        prop_assert!(law, "unexpected error {:?}", err);
    }

    #[test]
    fn h0_composition_ignores_boundaries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = random_complexes_category(&k(), &mut rng, 3);
        let (x, y, z) = (rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3));
        let f = random_cycle(&cat, x, y, &mut rng);
        let g = random_cycle(&cat, y, z, &mut rng);
        let (f2, g2) = (perturb(&cat, x, y, &f, &mut rng), perturb(&cat, y, z, &g, &mut rng));
        let class = |c: &Chain<PrimeField>| cat.hom_homology(x, z).classify(c).unwrap();
        let gf = cat.compose(x, y, z, &g, &f);
        prop_assert_eq!(class(&gf), class(&cat.compose(x, y, z, &g2, &f2)));
        // the induced composition on classes agrees
        let h0 = h0_category(&cat);
        let cf = cat.hom_homology(x, y).classify(&f).unwrap();
        let cg = cat.hom_homology(y, z).classify(&g).unwrap();
        prop_assert_eq!(h0.compose(x, y, z, &cg, &cf), class(&gf));
        let u = cat.hom_homology(x, x).classify(&cat.unit(x)).unwrap();
        prop_assert_eq!(h0.unit(x), &u[..]);
    }

    #[test]
    fn invertibility_certificates_verify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = random_complexes_category(&k(), &mut rng, 2);
        let x = rng.gen_range(0..2);
        let u = perturb(&cat, x, x, &random_closed_automorphism(&cat, x, &mut rng), &mut rng);
        let inv = is_homotopy_invertible(&cat, x, x, &u).unwrap();
        let cert = inv.certificate().expect("automorphisms are invertible");
        prop_assert!(cert.verify(&cat));
        // a boundary is never invertible unless the endomorphisms are acyclic
        let b = perturb(&cat, x, x, &Chain::new(0, vec![k().zero(); cat.hom(x, x).dim(0)]), &mut rng);
        let acyclic = cat.hom_homology(x, x).rank(0) == 0;
        prop_assert_eq!(is_homotopy_invertible(&cat, x, x, &b).unwrap().is_invertible(), acyclic);
    }

    #[test]
    fn functors_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = random_complexes_category(&k(), &mut rng, 2);
        let id = DgFunctor::identity(cat.clone());
        let twice = id.then(&id).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                prop_assert_eq!(twice.hom_map(x, y), id.hom_map(x, y));
            }
        }
        prop_assert_eq!(is_quasi_equivalence(&twice).verdict, Verdict::Yes);
    }
}

#[test]
fn sphere_into_disk_composes_with_identities() {
    let q = Rationals;
    for n in [0, 1, 2] {
        let s = Arc::new(fixture(&q, Fixture::Sphere, n).unwrap());
        let d = Arc::new(fixture(&q, Fixture::Disk, n).unwrap());
        let mut comps = BTreeMap::new();
        for x in 0..2 {
            comps.insert((x, x), BTreeMap::from([(0, Matrix::identity(&q, 1))]));
        }
        comps.insert((0, 1), BTreeMap::from([(n - 1, Matrix::identity(&q, 1))]));
        let i = DgFunctor::new(s.clone(), d.clone(), vec![0, 1], comps).unwrap();
        let left = DgFunctor::identity(s).then(&i).unwrap();
        let right = i.then(&DgFunctor::identity(d)).unwrap();
        for (x, y) in [(0, 0), (0, 1), (1, 1)] {
            assert_eq!(left.hom_map(x, y), i.hom_map(x, y));
            assert_eq!(right.hom_map(x, y), i.hom_map(x, y));
        }
        assert_eq!(is_quasi_equivalence(&i).verdict, Verdict::No);
    }
}
