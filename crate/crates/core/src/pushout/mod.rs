//! Freely adjoining a morphism `f: x → y` of degree `n` with `df = g` to a
//! finite dg-category, truncated by the number of `f`-letters.
//!
//! Homs of the new category are spanned by plain base morphisms and by words
//! `β·f·c_m·f·…·c_1·f·α` with `α ∈ Hom(C, x)`, `c_i ∈ Hom(y, x)` and
//! `β ∈ Hom(y, D)`. Words are stored in application order `[α, c_1, …, β]`.
//! The differential is the Leibniz extension over letters with `df = g`,
//! signed by the degrees of the letters applied before, and composition
//! concatenates words, composing the two letters that meet.
//!
//! Words with more than `N` letters `f` span a two-sided ideal; the truncated
//! category is the quotient by it. The quotient is a dg-category exactly when
//! the differential maps that ideal into itself.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::complexes::{make_complex, Chain, ChainComplex};
use crate::dgcat::{DgCatError, DgCategory, DgCategoryBuilder, DgFunctor, ObjId};
use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PushoutError {
    #[error("invalid adjunction data: {0}")]
    InvalidData(String),
    #[error("truncation at {truncation} letters is unsound: d({word}) in Hom({from}, {to}) leaves the ideal")]
    TruncationUnsound {
        truncation: usize,
        from: String,
        to: String,
        word: String,
    },
    #[error("incompatible adjunction data: {0}")]
    IncompatibleData(String),
    #[error(transparent)]
    Category(#[from] DgCatError),
}

/// Where the new morphism attaches and how far words are kept.
#[derive(Debug, Clone)]
pub struct AdjunctionData<F: Field> {
    pub base: Arc<DgCategory<F>>,
    pub x: ObjId,
    pub y: ObjId,
    pub n: i32,
    /// closed element of `Hom_{n-1}(x, y)`
    pub g_img: Chain<F>,
    pub truncation: usize,
}

impl<F: Field> AdjunctionData<F> {
    pub fn new(
        base: Arc<DgCategory<F>>,
        x: ObjId,
        y: ObjId,
        n: i32,
        g_img: Chain<F>,
        truncation: usize,
    ) -> Result<Self, PushoutError> {
        let bad = |m: String| Err(PushoutError::InvalidData(m));
        if x >= base.object_count() || y >= base.object_count() {
            return bad("unknown object".into());
        }
        if truncation == 0 {
            return bad("truncation must be at least 1".into());
        }
        if g_img.degree != n - 1 || g_img.coords.len() != base.hom(x, y).dim(n - 1) {
            return bad(format!("g must be an element of Hom_{}(x, y)", n - 1));
        }
        if !base.d(x, y, &g_img).is_zero(base.field()) {
            return bad("g is not closed".into());
        }
        Ok(Self {
            base,
            x,
            y,
            n,
            g_img,
            truncation,
        })
    }

    /// No word can carry more than one letter `f`.
    pub fn is_exact(&self) -> bool {
        self.base.hom(self.y, self.x).total_dim() == 0
    }
}

/// A basis word: letters (global basis indices of base homs) in application
/// order, separated by `f`. A single letter is a plain base morphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWord {
    pub letters: Vec<usize>,
}

impl BarWord {
    pub fn f_count(&self) -> usize {
        self.letters.len() - 1
    }
}

impl fmt::Display for BarWord {
    /// Left to right as a composite: `β·f·…·f·α`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.letters.iter().rev().join("·f·"))
    }
}

type Comb<F> = BTreeMap<Vec<usize>, <F as Field>::Elem>;

fn comb_add<F: Field>(k: &F, c: &mut Comb<F>, w: Vec<usize>, v: F::Elem) {
    let e = c.entry(w).or_insert_with(|| k.zero());
    *e = k.add(e, &v);
    if k.is_zero(e) {
        c.retain(|_, x| !k.is_zero(x));
    }
}

/// Word combinatorics over fixed adjunction data.
struct Words<'a, F: Field> {
    data: &'a AdjunctionData<F>,
}

impl<F: Field> Words<'_, F> {
    fn base(&self) -> &DgCategory<F> {
        &self.data.base
    }

    /// Hom of letter `i` in a word of `len` letters from `c` to `d`.
    fn letter_hom(&self, c: ObjId, d: ObjId, len: usize, i: usize) -> (ObjId, ObjId) {
        let src = if i == 0 { c } else { self.data.y };
        let tgt = if i + 1 == len { d } else { self.data.x };
        (src, tgt)
    }

    fn letter(&self, hom: (ObjId, ObjId), global: usize) -> Chain<F> {
        let h = self.base().hom(hom.0, hom.1);
        let (q, i) = h.locate(global);
        self.base().basis_chain(hom.0, hom.1, q, i)
    }

    fn letter_degree(&self, hom: (ObjId, ObjId), global: usize) -> i32 {
        self.base().hom(hom.0, hom.1).locate(global).0
    }

    fn degree(&self, c: ObjId, d: ObjId, w: &[usize]) -> i32 {
        let letters: i32 = w
            .iter()
            .enumerate()
            .map(|(i, &l)| self.letter_degree(self.letter_hom(c, d, w.len(), i), l))
            .sum();
        letters + (w.len() as i32 - 1) * self.data.n
    }

    /// All words from `c` to `d` with exactly `count` letters `f`.
    fn enumerate(&self, c: ObjId, d: ObjId, count: usize) -> Vec<Vec<usize>> {
        let len = count + 1;
        (0..len)
            .map(|i| {
                let (s, t) = self.letter_hom(c, d, len, i);
                0..self.base().hom(s, t).total_dim()
            })
            .multi_cartesian_product()
            .collect()
    }

    /// Expands a chain of a base hom into global indices.
    fn globals(&self, hom: (ObjId, ObjId), ch: &Chain<F>) -> Vec<(usize, F::Elem)> {
        let k = self.base().field();
        let off = self.base().hom(hom.0, hom.1).offset(ch.degree);
        ch.coords
            .iter()
            .enumerate()
            .filter(|(_, v)| !k.is_zero(v))
            .map(|(i, v)| (off + i, v.clone()))
            .collect()
    }

    /// Vertical and horizontal parts of the differential of a word.
    fn differential(&self, c: ObjId, d: ObjId, w: &[usize]) -> (Comb<F>, Comb<F>) {
        let k = self.base().field();
        let len = w.len();
        let (mut vert, mut horiz) = (Comb::<F>::new(), Comb::<F>::new());
        let mut before = 0i64;
        for i in 0..len {
            let hom = self.letter_hom(c, d, len, i);
            let l = self.letter(hom, w[i]);
            let s = k.sign(before);
            for (g, v) in self.globals(hom, &self.base().d(hom.0, hom.1, &l)) {
                let mut w2 = w.to_vec();
                w2[i] = g;
                comb_add(k, &mut vert, w2, k.mul(&s, &v));
            }
            before += l.degree as i64;
            if i + 1 == len {
                break;
            }
            // the f between letters i and i + 1 becomes g
            let s = k.sign(before);
            let next_hom = self.letter_hom(c, d, len, i + 1);
            let next = self.letter(next_hom, w[i + 1]);
            let (x, y) = (self.data.x, self.data.y);
            let gl = self.base().compose(hom.0, x, y, &self.data.g_img, &l);
            let merged = self.base().compose(hom.0, y, next_hom.1, &next, &gl);
            for (m, v) in self.globals((hom.0, next_hom.1), &merged) {
                let mut w2 = w[..i].to_vec();
                w2.push(m);
                w2.extend_from_slice(&w[i + 2..]);
                comb_add(k, &mut horiz, w2, k.mul(&s, &v));
            }
            before += self.data.n as i64;
        }
        (vert, horiz)
    }

    /// `w2 ∘ w1` for `w1: c → d`, `w2: d → e`, without truncation.
    fn compose(&self, c: ObjId, d: ObjId, e: ObjId, w2: &[usize], w1: &[usize]) -> Comb<F> {
        let (l1, l2) = (w1.len(), w2.len());
        let h1 = self.letter_hom(c, d, l1, l1 - 1);
        let h2 = self.letter_hom(d, e, l2, 0);
        let merged = self.base().compose(
            h1.0,
            d,
            h2.1,
            &self.letter(h2, w2[0]),
            &self.letter(h1, w1[l1 - 1]),
        );
        let mut out = Comb::<F>::new();
        for (m, v) in self.globals((h1.0, h2.1), &merged) {
            let mut w = w1[..l1 - 1].to_vec();
            w.push(m);
            w.extend_from_slice(&w2[1..]);
            out.insert(w, v);
        }
        out
    }
}

/// Basis of one truncated hom: words ordered by degree, then by
/// `(f`-count, letters`)`.
#[derive(Debug, Clone)]
struct HomWords {
    words: Vec<BarWord>,
    degrees: Vec<i32>,
    index: HashMap<Vec<usize>, usize>,
}

/// The result of [`free_adjoin`]: a validated dg-category with its word bases.
#[derive(Debug, Clone)]
pub struct TruncatedDgCategory<F: Field> {
    pub category: Arc<DgCategory<F>>,
    pub data: AdjunctionData<F>,
    /// no words were cut off
    pub exact: bool,
    homs: Vec<HomWords>,
}

impl<F: Field> TruncatedDgCategory<F> {
    pub fn truncation(&self) -> usize {
        self.data.truncation
    }

    /// Words of `Hom(c, d)` in basis (global index) order.
    pub fn words(&self, c: ObjId, d: ObjId) -> &[BarWord] {
        &self.homs[c * self.category.object_count() + d].words
    }

    pub fn word_index(&self, c: ObjId, d: ObjId, w: &BarWord) -> Option<usize> {
        self.homs[c * self.category.object_count() + d].index.get(&w.letters).copied()
    }

    /// Number of words with `m` letters `f` in each degree.
    pub fn word_counts(&self, c: ObjId, d: ObjId) -> BTreeMap<(usize, i32), usize> {
        let h = &self.homs[c * self.category.object_count() + d];
        h.words.iter().zip(&h.degrees).map(|(w, &q)| (w.f_count(), q)).counts().into_iter().collect()
    }
}

/// Builds the truncated pushout and verifies it exhaustively.
pub fn free_adjoin<F: Field>(data: &AdjunctionData<F>) -> Result<TruncatedDgCategory<F>, PushoutError> {
    let words = Words { data };
    let base = &data.base;
    let k = base.field();
    let objs = base.object_count();
    let exact = data.is_exact();
    let nn = data.truncation;
    if !exact {
        // d of a word just beyond the truncation must stay beyond it
        for (c, d) in (0..objs).cartesian_product(0..objs) {
            for w in words.enumerate(c, d, nn + 1) {
                let (_, horiz) = words.differential(c, d, &w);
                if !horiz.is_empty() {
                    return Err(PushoutError::TruncationUnsound {
                        truncation: nn,
                        from: base.objects()[c].clone(),
                        to: base.objects()[d].clone(),
                        word: BarWord { letters: w }.to_string(),
                    });
                }
            }
        }
    }
    let mut builder = DgCategoryBuilder::with_objects(k, base.objects().to_vec());
    let mut homs = Vec::with_capacity(objs * objs);
    for (c, d) in (0..objs).cartesian_product(0..objs) {
        let mut all: Vec<(i32, Vec<usize>)> = (0..=nn)
            .flat_map(|m| words.enumerate(c, d, m))
            .map(|w| (words.degree(c, d, &w), w))
            .collect();
        all.sort_by_key(|(q, _)| *q);
        let index: HashMap<Vec<usize>, usize> = all.iter().enumerate().map(|(i, (_, w))| (w.clone(), i)).collect();
        let degrees: Vec<i32> = all.iter().map(|(q, _)| *q).collect();
        let mut dims: BTreeMap<i32, usize> = degrees.iter().copied().counts().into_iter().collect();
        if let (Some(&lo), Some(&hi)) = (dims.keys().next(), dims.keys().next_back()) {
            for q in lo..=hi {
                dims.entry(q).or_insert(0);
            }
        }
        let offset = |q: i32| degrees.iter().take_while(|&&p| p < q).count();
        let mut diffs: BTreeMap<i32, Matrix<F>> = BTreeMap::new();
        for (col, (q, w)) in all.iter().enumerate() {
            let (vert, horiz) = words.differential(c, d, w);
            let m = diffs
                .entry(*q)
                .or_insert_with(|| Matrix::zeros(k, dims.get(&(q - 1)).copied().unwrap_or(0), dims[q]));
            for (w2, v) in vert.into_iter().chain(horiz) {
                let row = index[&w2] - offset(q - 1);
                m.add_at(row, col - offset(*q), &v);
            }
        }
        let complex = if all.is_empty() {
            ChainComplex::zero(k)
        } else {
            make_complex(k, &dims, diffs).map_err(DgCatError::from)?
        };
        builder.set_hom(c, d, complex);
        homs.push(HomWords {
            words: all.into_iter().map(|(_, w)| BarWord { letters: w }).collect(),
            degrees,
            index,
        });
    }
    for c in 0..objs {
        let h = &homs[c * objs + c];
        let mut coords = vec![k.zero(); h.degrees.iter().filter(|&&q| q == 0).count()];
        let off = h.degrees.iter().take_while(|&&q| q < 0).count();
        for (g, v) in words.globals((c, c), &base.unit(c)) {
            coords[h.index[&vec![g]] - off] = v;
        }
        builder.set_unit(c, coords);
    }
    for (c, d, e) in (0..objs).cartesian_product(0..objs).cartesian_product(0..objs).map(|((a, b), c)| (a, b, c)) {
        let (h1, h2) = (&homs[c * objs + d], &homs[d * objs + e]);
        let out = &homs[c * objs + e];
        for (j, w1) in h1.words.iter().enumerate() {
            for (i, w2) in h2.words.iter().enumerate() {
                if w1.f_count() + w2.f_count() > nn {
                    continue;
                }
                let prod = words.compose(c, d, e, &w2.letters, &w1.letters);
                let value: Vec<(usize, F::Elem)> = prod.into_iter().map(|(w, v)| (out.index[&w], v)).collect();
                if !value.is_empty() {
                    builder.set_product(c, d, e, i, j, value);
                }
            }
        }
    }
    let category = Arc::new(builder.build()?);
    Ok(TruncatedDgCategory {
        category,
        data: data.clone(),
        exact,
        homs,
    })
}

/// Applies `F` letter by letter. The target data must be the image of the
/// source data under `F`.
pub fn induced_functor<F: Field>(
    functor: &DgFunctor<F>,
    source: &TruncatedDgCategory<F>,
    target: &TruncatedDgCategory<F>,
) -> Result<DgFunctor<F>, PushoutError> {
    let (ds, dt) = (&source.data, &target.data);
    let bad = |m: &str| Err(PushoutError::IncompatibleData(m.into()));
    if *functor.source().as_ref() != *ds.base || *functor.target().as_ref() != *dt.base {
        return bad("functor does not connect the base categories");
    }
    if functor.object(ds.x) != dt.x || functor.object(ds.y) != dt.y {
        return bad("attaching objects are not mapped to each other");
    }
    if ds.n != dt.n || ds.truncation != dt.truncation {
        return bad("degrees or truncations differ");
    }
    if functor.apply(ds.x, ds.y, &ds.g_img) != dt.g_img {
        return bad("g is not mapped to the target's g");
    }
    let (sw, tw) = (Words { data: ds }, Words { data: dt });
    let k = ds.base.field();
    let objs = ds.base.object_count();
    let mut comps = BTreeMap::new();
    for (c, d) in (0..objs).cartesian_product(0..objs) {
        let (fc, fd) = (functor.object(c), functor.object(d));
        let src_hom = source.category.hom(c, d);
        let tgt_hom = target.category.hom(fc, fd);
        let mut mats: BTreeMap<i32, Matrix<F>> = BTreeMap::new();
        for (col, w) in source.words(c, d).iter().enumerate() {
            let len = w.letters.len();
            // image of each letter, as sparse global indices
            let images: Vec<Vec<(usize, F::Elem)>> = (0..len)
                .map(|i| {
                    let hom = sw.letter_hom(c, d, len, i);
                    let img = functor.apply(hom.0, hom.1, &sw.letter(hom, w.letters[i]));
                    let thom = (functor.object(hom.0), functor.object(hom.1));
                    tw.globals(thom, &img)
                })
                .collect();
            let (q, local) = src_hom.locate(col);
            let m = mats
                .entry(q)
                .or_insert_with(|| Matrix::zeros(k, tgt_hom.dim(q), src_hom.dim(q)));
            for choice in images.iter().map(|v| v.iter()).multi_cartesian_product() {
                let letters: Vec<usize> = choice.iter().map(|(g, _)| *g).collect();
                let coeff = choice.iter().fold(k.one(), |acc, (_, v)| k.mul(&acc, v));
                let row = target
                    .word_index(fc, fd, &BarWord { letters })
                    .expect("letterwise images stay within the truncation");
                m.add_at(row - tgt_hom.offset(q), local, &coeff);
            }
        }
        comps.insert((c, d), mats);
    }
    Ok(DgFunctor::new(
        source.category.clone(),
        target.category.clone(),
        functor.object_map().to_vec(),
        comps,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology;
    use crate::dgcat::{fixture, Fixture};
    use crate::field::Rationals;

    #[test]
    fn powers_of_a_free_generator() {
        let q = Rationals;
        let base = Arc::new(fixture(&q, Fixture::UnitK, 0).unwrap());
        let data = AdjunctionData::new(base, 0, 0, 1, Chain::new(0, vec![q.zero()]), 3).unwrap();
        let t = free_adjoin(&data).unwrap();
        assert!(!t.exact);
        let end = t.category.hom(0, 0);
        assert_eq!(end.dims(), BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1)]));
        assert!((0..=3).all(|q| end.differential(q).is_zero()));
        assert_eq!(t.words(0, 0)[2].to_string(), "0·f·0·f·0");
    }

    #[test]
    fn killing_the_sphere_generator() {
        let q = Rationals;
        let base = Arc::new(fixture(&q, Fixture::Sphere, 1).unwrap());
        let g = Chain::new(0, vec![q.one()]);
        let data = AdjunctionData::new(base, 0, 1, 1, g, 2).unwrap();
        let t = free_adjoin(&data).unwrap();
        assert!(t.exact);
        let h = t.category.hom(0, 1);
        assert_eq!(h.dims(), BTreeMap::from([(0, 1), (1, 1)]));
        assert!(homology(h).is_acyclic());
        assert_eq!(t.category.hom(1, 0).total_dim(), 0);
    }

    #[test]
    fn unsound_truncation_is_refused() {
        let q = Rationals;
        let base = Arc::new(fixture(&q, Fixture::UnitK, 0).unwrap());
        // f of degree 1 with df = 1 on a single object
        let data = AdjunctionData::new(base, 0, 0, 1, Chain::new(0, vec![q.one()]), 2).unwrap();
        assert!(matches!(free_adjoin(&data), Err(PushoutError::TruncationUnsound { truncation: 2, .. })));
    }

    #[test]
    fn data_is_checked() {
        let q = Rationals;
        let base = Arc::new(fixture(&q, Fixture::Disk, 1).unwrap());
        let f = Chain::new(1, vec![q.one()]);
        assert!(matches!(AdjunctionData::new(base.clone(), 0, 1, 2, f, 1), Err(PushoutError::InvalidData(_))));
        let g = Chain::new(0, vec![q.one()]);
        assert!(AdjunctionData::new(base.clone(), 0, 1, 1, g.clone(), 0).is_err());
        assert!(AdjunctionData::new(base, 0, 1, 1, g, 1).is_ok());
    }
}
