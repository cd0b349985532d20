use std::collections::BTreeMap;

use super::{Chain, ChainComplex};
use crate::field::Field;
use crate::linalg::{vec_is_zero, Matrix};

/// Homology ranks with chosen cycle representatives.
///
/// Representatives in degree `q` extend a basis of the boundaries `B_q` to a
/// basis of the cycles `Z_q`; `classify` expresses any cycle in terms of them.
#[derive(Debug, Clone)]
pub struct HomologyReport<F: Field> {
    field: F,
    pub ranks: BTreeMap<i32, usize>,
    pub representatives: BTreeMap<i32, Vec<Vec<F::Elem>>>,
    solvers: BTreeMap<i32, ClassSolver<F>>,
}

#[derive(Debug, Clone)]
struct ClassSolver<F: Field> {
    /// Left inverse of `[reps | boundary basis]`.
    left_inverse: Matrix<F>,
    rank: usize,
    differential: Matrix<F>,
}

impl<F: Field> HomologyReport<F> {
    /// Ranks in degrees where homology is nonzero.
    pub fn nonzero_ranks(&self) -> BTreeMap<i32, usize> {
        self.ranks.iter().filter(|(_, &r)| r > 0).map(|(&q, &r)| (q, r)).collect()
    }

    pub fn rank(&self, q: i32) -> usize {
        self.ranks.get(&q).copied().unwrap_or(0)
    }

    pub fn is_acyclic(&self) -> bool {
        self.ranks.values().all(|&r| r == 0)
    }

    /// Coordinates of the class of `z` in the representative basis, or `None`
    /// when `z` is not a cycle.
    pub fn classify(&self, z: &Chain<F>) -> Option<Vec<F::Elem>> {
        let Some(s) = self.solvers.get(&z.degree) else {
            // degree outside the window: only the empty chain lives there
            return if z.coords.is_empty() { Some(Vec::new()) } else { None };
        };
        let f = s.differential.field();
        if !vec_is_zero(f, &s.differential.apply(&z.coords)) {
            return None;
        }
        let all = s.left_inverse.apply(&z.coords);
        Some(all[..s.rank].to_vec())
    }

    /// Whether `z` is a boundary (a cycle with zero class).
    pub fn is_boundary(&self, z: &Chain<F>) -> bool {
        match self.classify(z) {
            Some(c) => vec_is_zero(&self.field, &c),
            None => false,
        }
    }

    /// Representative chain for a class given in coordinates.
    pub fn representative(&self, degree: i32, class: &[F::Elem]) -> Chain<F> {
        let field = &self.field;
        let reps = &self.representatives[&degree];
        let dim = self.solvers[&degree].differential.cols();
        let mut v = vec![field.zero(); dim];
        for (c, r) in class.iter().zip(reps) {
            crate::linalg::vec_axpy(field, &mut v, c, r);
        }
        Chain::new(degree, v)
    }
}

/// Homology by exact Gaussian elimination, with representatives.
pub fn homology<F: Field>(c: &ChainComplex<F>) -> HomologyReport<F> {
    let f = c.field();
    let mut ranks = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    let mut solvers = BTreeMap::new();
    for q in c.degrees() {
        let dim = c.dim(q);
        let dq = c.differential(q);
        let dq1 = c.differential(q + 1);
        // boundary basis: pivot columns of d_{q+1}
        let boundary: Vec<Vec<F::Elem>> = if dq1.cols() > 0 && dim > 0 {
            let (_, piv) = dq1.rref();
            piv.iter().map(|&j| dq1.column(j)).collect()
        } else {
            Vec::new()
        };
        let cycles = if dim > 0 { dq.kernel() } else { Vec::new() };
        let mut basis = boundary.clone();
        let mut reps = Vec::new();
        for z in cycles {
            let mut trial = basis.clone();
            trial.push(z.clone());
            if Matrix::from_columns(f, dim, &trial).rank() == trial.len() {
                basis = trial;
                reps.push(z);
            }
        }
        let rank = reps.len();
        let mut cols = reps.clone();
        cols.extend(boundary);
        let left_inverse = if cols.is_empty() {
            Matrix::zeros(f, 0, dim)
        } else {
            Matrix::from_columns(f, dim, &cols)
                .left_inverse()
                .expect("cycle basis is independent")
        };
        ranks.insert(q, rank);
        representatives.insert(q, reps);
        solvers.insert(
            q,
            ClassSolver {
                left_inverse,
                rank,
                differential: dq,
            },
        );
    }
    HomologyReport {
        field: f.clone(),
        ranks,
        representatives,
        solvers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::make_complex;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_differential() {
        let q = Rationals;
        let c = make_complex(&q, &BTreeMap::from([(0, 3)]), BTreeMap::new()).unwrap();
        assert_eq!(homology(&c).nonzero_ranks(), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn truncated_exterior_complex() {
        // ⋀^{≥1}<e0, e1> with contraction by e0 + e1: e0∧e1 ↦ e1 - e0
        let q = Rationals;
        let c = make_complex(
            &q,
            &BTreeMap::from([(1, 2), (2, 1)]),
            BTreeMap::from([(2, Matrix::from_i64(&q, 2, 1, &[-1, 1]))]),
        )
        .unwrap();
        let h = homology(&c);
        assert_eq!(h.rank(1), 1);
        assert_eq!(h.rank(2), 0);
    }

    #[test]
    fn classify_detects_boundaries() {
        let f = PrimeField::new(7).unwrap();
        let c = make_complex(
            &f,
            &BTreeMap::from([(0, 2), (1, 1)]),
            BTreeMap::from([(1, Matrix::from_i64(&f, 2, 1, &[1, 1]))]),
        )
        .unwrap();
        let h = homology(&c);
        assert_eq!(h.rank(0), 1);
        assert!(h.is_boundary(&Chain::new(0, vec![3, 3])));
        assert!(!h.is_boundary(&Chain::new(0, vec![1, 0])));
        assert!(h.classify(&Chain::new(1, vec![1])).is_none());
    }

    proptest! {
        #[test]
        fn euler_characteristic_is_preserved(seed in 0u64..10_000) {
            let f = PrimeField::new(5).unwrap();
            let c = crate::gen::random_complex(&f, &mut ChaCha8Rng::seed_from_u64(seed), 0, 4, 3);
            let h = homology(&c);
            let chi: i64 = h.ranks.iter()
                .map(|(&q, &r)| if q % 2 == 0 { r as i64 } else { -(r as i64) })
                .sum();
            prop_assert_eq!(chi, c.euler_characteristic());
            for (q, reps) in &h.representatives {
                for r in reps {
                    prop_assert!(c.d(&Chain::new(*q, r.clone())).is_zero(c.field()));
                }
            }
        }
    }
}
