use std::collections::BTreeMap;

use dgres_core::complexes::{cone, direct_sum, homology, is_quasi_iso, shift, tensor, ChainComplex, ChainMap};
use dgres_core::gen::random_complex;
use dgres_core::{Field, Matrix, PrimeField, Rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field_axioms<F: Field>(k: &F, rng: &mut ChaCha8Rng) -> Result<(), TestCaseError> {
    let (a, b, c) = (k.random(rng), k.random(rng), k.random(rng));
    prop_assert!(k.is_zero(&k.add(&a, &k.neg(&a))));
    prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
    prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
    match k.inv(&a) {
        Some(i) => prop_assert!(k.is_one(&k.mul(&a, &i))),
        None => prop_assert!(k.is_zero(&a)),
    }
    prop_assert_eq!(k.parse(&k.format(&a)).unwrap(), a);
    Ok(())
}

/// `[reps | boundaries]` has full column rank in every degree.
fn representatives_are_independent_cycles<F: Field>(c: &ChainComplex<F>) -> Result<(), TestCaseError> {
    let h = homology(c);
    for q in c.degrees() {
        let reps = h.representatives.get(&q).cloned().unwrap_or_default();
        prop_assert_eq!(reps.len(), h.rank(q));
        for r in &reps {
            prop_assert!(c.differential(q).apply(r).iter().all(|x| c.field().is_zero(x)));
        }
        let bd = c.differential(q + 1);
        let mut cols = reps.clone();
        cols.extend((0..bd.cols()).map(|j| bd.column(j)));
        let m = Matrix::from_columns(c.field(), c.dim(q), &cols);
        prop_assert_eq!(m.rank(), reps.len() + bd.rank());
    }
    Ok(())
}

fn check_complex<F: Field>(k: &F, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    field_axioms(k, &mut rng)?;
    let lo = rng.gen_range(-2..=1);
    let a = random_complex(k, &mut rng, lo, 4, 3);
    let b = random_complex(k, &mut rng, 0, 3, 2);
    for q in a.degrees() {
        prop_assert!(a.differential(q).mul(&a.differential(q + 1)).is_zero());
    }
    representatives_are_independent_cycles(&a)?;
    let (ha, hb) = (homology(&a), homology(&b));
    // homology of sums, shifts and tensor products
    let sum = homology(&direct_sum(&a, &b).unwrap());
    let t = homology(&tensor(&a, &b).unwrap());
    let s = homology(&shift(&a, 3));
    for q in -4..8 {
        prop_assert_eq!(sum.rank(q), ha.rank(q) + hb.rank(q));
        prop_assert_eq!(s.rank(q + 3), ha.rank(q));
        let kunneth: usize = (-4..8).map(|p| ha.rank(p) * hb.rank(q - p)).sum();
        prop_assert_eq!(t.rank(q), kunneth);
    }
    let euler: i64 = ha.ranks.iter().map(|(q, r)| if q % 2 == 0 { *r as i64 } else { -(*r as i64) }).sum();
    prop_assert_eq!(euler, a.euler_characteristic());
    let id = ChainMap::identity(&a);
    prop_assert!(cone(&id).unwrap().is_acyclic());
    prop_assert!(is_quasi_iso(&id).unwrap());
    // the zero map is a quasi-iso exactly when the source and target are acyclic
    let z = ChainMap::zero(&a, &b);
    prop_assert_eq!(is_quasi_iso(&z).unwrap(), a.is_acyclic() && b.is_acyclic());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn complexes_over_prime_fields(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 101, 65_521])) {
        check_complex(&PrimeField::new(p).unwrap(), seed)?;
    }

    #[test]
    fn complexes_over_rationals(seed in any::<u64>()) {
        check_complex(&Rationals, seed)?;
    }

    #[test]
    fn degree_shifted_maps_commute_up_to_sign(seed in any::<u64>()) {
        // d_{q+1} shifted by one: components are the differentials themselves
        let k = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_complex(&k, &mut rng, 0, 4, 2);
        let comps: BTreeMap<i32, Matrix<PrimeField>> = a.degrees().map(|q| (q, a.differential(q))).collect();
        prop_assert!(ChainMap::new(a.clone(), a.clone(), -1, comps).is_ok());
    }
}
