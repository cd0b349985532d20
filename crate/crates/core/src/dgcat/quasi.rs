use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{is_homotopy_invertible, DgFunctor, InvertibilityCertificate, ObjId};
use crate::complexes::{is_quasi_iso, Chain};
use crate::field::Field;

/// Largest number of `H_0` classes enumerated exhaustively per object pair.
const EXHAUSTIVE_LIMIT: u64 = 4096;
const RANDOM_TRIALS: usize = 64;
const SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EssentialVerdict<F: Field> {
    /// `certificate` shows `F(source) ≃ target` in the target category.
    Witnessed {
        target: ObjId,
        source: ObjId,
        certificate: InvertibilityCertificate<F>,
    },
    NotFound { target: ObjId },
}

#[derive(Debug, Clone)]
pub struct QuasiEquivalenceReport<F: Field> {
    /// `((x, y), is_quasi_iso)` for every source pair
    pub fully_faithful: Vec<((ObjId, ObjId), bool)>,
    pub essential: Vec<EssentialVerdict<F>>,
    pub verdict: Verdict,
}

/// Checks quasi-full-faithfulness exactly and searches for essential
/// surjectivity certificates.
pub fn is_quasi_equivalence<F: Field>(functor: &DgFunctor<F>) -> QuasiEquivalenceReport<F> {
    let (s, t) = (functor.source(), functor.target());
    let n = s.object_count();
    let mut fully_faithful = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let ok = is_quasi_iso(functor.hom_map(x, y)).expect("degree-0 map");
            fully_faithful.push(((x, y), ok));
        }
    }
    let essential: Vec<_> = (0..t.object_count())
        .map(|e| {
            (0..n)
                .find_map(|src| {
                    search(functor, src, e).map(|certificate| EssentialVerdict::Witnessed {
                        target: e,
                        source: src,
                        certificate,
                    })
                })
                .unwrap_or(EssentialVerdict::NotFound { target: e })
        })
        .collect();
    let verdict = if fully_faithful.iter().any(|(_, ok)| !ok) {
        Verdict::No
    } else if essential.iter().all(|v| matches!(v, EssentialVerdict::Witnessed { .. })) {
        Verdict::Yes
    } else {
        Verdict::Inconclusive
    };
    QuasiEquivalenceReport {
        fully_faithful,
        essential,
        verdict,
    }
}

/// Looks for a homotopy equivalence `F(src) → e`.
fn search<F: Field>(functor: &DgFunctor<F>, src: ObjId, e: ObjId) -> Option<InvertibilityCertificate<F>> {
    let t = functor.target();
    let k = t.field();
    let a = functor.object(src);
    let try_one = |u: &Chain<F>| {
        is_homotopy_invertible(t, a, e, u)
            .ok()
            .and_then(|r| r.certificate().cloned())
    };
    if a == e {
        if let Some(c) = try_one(&t.unit(a)) {
            return Some(c);
        }
    }
    let reps: Vec<Vec<F::Elem>> = t.hom_homology(a, e).representatives.get(&0).cloned().unwrap_or_default();
    let dim = t.hom(a, e).dim(0);
    let combine = |coeffs: &[F::Elem]| {
        let mut v = vec![k.zero(); dim];
        for (c, r) in coeffs.iter().zip(&reps) {
            crate::linalg::vec_axpy(k, &mut v, c, r);
        }
        Chain::new(0, v)
    };
    if reps.is_empty() {
        return try_one(&Chain::new(0, vec![k.zero(); dim]));
    }
    for r in &reps {
        if let Some(c) = try_one(&Chain::new(0, r.clone())) {
            return Some(c);
        }
    }
    let total = k.order().and_then(|q| q.checked_pow(reps.len() as u32));
    match total {
        Some(total) if total <= EXHAUSTIVE_LIMIT => {
            let q = k.order().expect("finite field");
            (0..total).find_map(|mut idx| {
                let coeffs: Vec<_> = (0..reps.len())
                    .map(|_| {
                        let c = k.nth_element(idx % q);
                        idx /= q;
                        c
                    })
                    .collect();
                try_one(&combine(&coeffs))
            })
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ ((src as u64) << 32) ^ e as u64);
            (0..RANDOM_TRIALS).find_map(|_| {
                let coeffs: Vec<_> = reps.iter().map(|_| k.random(&mut rng)).collect();
                try_one(&combine(&coeffs))
            })
        }
    }
}
