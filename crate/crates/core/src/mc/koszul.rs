use std::collections::BTreeMap;

use super::{all_simplices, MultiIndex};
use crate::complexes::{make_complex, ChainComplex};
use crate::field::Field;
use crate::linalg::Matrix;

/// `H ⊗ ⋀^{≥1}⟨e_0, …, e_n⟩` with the summand `H·e_I` placed like the
/// component of a cochain on the simplex `I`: `h·e_I` has degree `|h| − k`.
///
/// The differential is `d_H` plus the dual of contraction by `Σ e_i`,
/// `h·e_J ↦ (-1)^{|h|} Σ_{i ∉ J} (-1)^{pos(i)} h·e_{J ∪ i}`.
pub fn koszul_model<F: Field>(h: &ChainComplex<F>, n: usize) -> ChainComplex<F> {
    let k = h.field();
    let simplices = all_simplices(n, 0);
    // basis per total degree
    let mut basis: BTreeMap<i32, Vec<(MultiIndex, usize)>> = BTreeMap::new();
    for q in h.degrees() {
        for s in &simplices {
            let t = q - s.level() as i32;
            for idx in 0..h.dim(q) {
                basis.entry(t).or_default().push((s.clone(), idx));
            }
        }
    }
    for b in basis.values_mut() {
        b.sort();
    }
    let position: BTreeMap<i32, BTreeMap<(MultiIndex, usize), usize>> = basis
        .iter()
        .map(|(&t, b)| (t, b.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()))
        .collect();
    let dims: BTreeMap<i32, usize> = basis.iter().map(|(&t, b)| (t, b.len())).collect();
    let mut diffs = BTreeMap::new();
    for (&t, b) in &basis {
        let Some(below) = position.get(&(t - 1)) else {
            continue;
        };
        let mut m = Matrix::zeros(k, dims[&(t - 1)], b.len());
        for (col, (s, idx)) in b.iter().enumerate() {
            let q = t + s.level() as i32;
            let dh = h.differential(q);
            for r in 0..dh.rows() {
                let v = dh.get(r, *idx);
                if !k.is_zero(v) {
                    m.add_at(below[&(s.clone(), r)], col, v);
                }
            }
            let sign = k.sign(q as i64);
            for i in 0..=n {
                if s.entries().contains(&i) {
                    continue;
                }
                let mut e = s.entries().to_vec();
                let pos = e.partition_point(|&v| v < i);
                e.insert(pos, i);
                let row = below[&(MultiIndex::from_sorted(e), *idx)];
                m.add_at(row, col, &k.mul(&sign, &k.sign(pos as i64)));
            }
        }
        diffs.insert(t, m);
    }
    make_complex(k, &dims, diffs).expect("Koszul differential squares to zero")
}

/// `⋀^{≥1}⟨e_0, …, e_n⟩` graded by word length, with contraction by `Σ e_i`.
pub fn exterior_contraction_complex<F: Field>(field: &F, n: usize) -> ChainComplex<F> {
    let words: BTreeMap<usize, Vec<MultiIndex>> = (0..=n).map(|k| (k + 1, super::simplices(n, k))).collect();
    let index = |w: &MultiIndex| words[&w.entries().len()].iter().position(|v| v == w).expect("word");
    let dims: BTreeMap<i32, usize> = words.iter().map(|(&l, ws)| (l as i32, ws.len())).collect();
    let mut diffs = BTreeMap::new();
    for (&l, ws) in &words {
        if l < 2 {
            continue;
        }
        let mut m = Matrix::zeros(field, words[&(l - 1)].len(), ws.len());
        for (col, w) in ws.iter().enumerate() {
            for p in 0..l {
                m.add_at(index(&w.delete(p)), col, &field.sign(p as i64));
            }
        }
        diffs.insert(l as i32, m);
    }
    make_complex(field, &dims, diffs).expect("contraction squares to zero")
}
