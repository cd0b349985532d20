//! Finite semisimplicial sets and local systems over them.
//!
//! A local system on `K` assigns an object to every vertex and, to every
//! nondegenerate `k`-cell `σ` with `k ≥ 1`, a component in
//! `Hom_{k-1}(E(v_0 σ), E(v_k σ))`. The calculus is the one of the simplicial
//! resolution with "delete the `j`-th vertex" replaced by the face `∂_j`, and
//! the splittings of `σ` given by its front faces (iterated last faces) and
//! back faces (iterated `∂_0`).

mod local;

use itertools::Itertools;
use thiserror::Error;

use crate::dgcat::DgCatError;

pub use local::{
    ls_compose, ls_delta, ls_hom_complex, ls_is_valid, ls_residual, restrict, Cell, KCochain, LocalSystem,
    LsHomComplex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CotensorError {
    #[error("semisimplicial identity for faces ({i}, {j}) fails on cell {cell} of dimension {dim}")]
    SemisimplicialIdentityViolation { dim: usize, cell: usize, i: usize, j: usize },
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("Maurer–Cartan equation fails on cell {cell} of dimension {dim}")]
    NotMaurerCartan { dim: usize, cell: usize },
    #[error("edge {0} is not homotopy invertible")]
    EdgeNotInvertible(usize),
    #[error("degree window [{given_lo}, {given_hi}] does not cover [{needed_lo}, {needed_hi}]")]
    WindowTooSmall {
        needed_lo: i32,
        needed_hi: i32,
        given_lo: i32,
        given_hi: i32,
    },
    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error("local systems live over different spaces or categories")]
    ObjectMismatch,
    #[error(transparent)]
    Category(#[from] DgCatError),
}

/// Nondegenerate cells per dimension with their face maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSSet {
    names: Vec<Vec<String>>,
    /// `faces[k][c][i]` is the cell `∂_i c` of dimension `k - 1`; empty for `k = 0`
    faces: Vec<Vec<Vec<usize>>>,
}

/// Checks face tables and the identities `∂_i ∂_j = ∂_{j-1} ∂_i` for `i < j`.
pub fn make_sset(names: Vec<Vec<String>>, faces: Vec<Vec<Vec<usize>>>) -> Result<FiniteSSet, CotensorError> {
    let mut names = names;
    let mut faces = faces;
    while names.last().is_some_and(|c| c.is_empty()) && names.len() > 1 {
        names.pop();
    }
    faces.resize(names.len(), Vec::new());
    faces.truncate(names.len());
    for (k, cells) in names.iter().enumerate() {
        if k == 0 {
            if faces[0].iter().any(|f| !f.is_empty()) {
                return Err(CotensorError::ShapeError("vertices have no faces".into()));
            }
            faces[0] = vec![Vec::new(); cells.len()];
            continue;
        }
        if faces[k].len() != cells.len() {
            return Err(CotensorError::ShapeError(format!(
                "{} face lists for {} cells in dimension {k}",
                faces[k].len(),
                cells.len()
            )));
        }
        for (c, f) in faces[k].iter().enumerate() {
            if f.len() != k + 1 {
                return Err(CotensorError::ShapeError(format!("cell {c} of dimension {k} needs {} faces", k + 1)));
            }
            if let Some(&bad) = f.iter().find(|&&x| x >= names[k - 1].len()) {
                return Err(CotensorError::ShapeError(format!("face {bad} of cell {c} in dimension {k} is unknown")));
            }
        }
    }
    let k = FiniteSSet { names, faces };
    for dim in 2..=k.dim() {
        for cell in 0..k.cell_count(dim) {
            for j in 1..=dim {
                for i in 0..j {
                    let lhs = k.face(dim - 1, k.face(dim, cell, j), i);
                    let rhs = k.face(dim - 1, k.face(dim, cell, i), j - 1);
                    if lhs != rhs {
                        return Err(CotensorError::SemisimplicialIdentityViolation { dim, cell, i, j });
                    }
                }
            }
        }
    }
    Ok(k)
}

fn tuple_name(v: &[usize]) -> String {
    format!("({})", v.iter().join(","))
}

impl FiniteSSet {
    /// `Δ^n`: one `k`-cell per `(k+1)`-subset of `[0..n]`, in lexicographic order.
    pub fn standard_simplex(n: usize) -> Self {
        Self::from_subsets(n, n)
    }

    /// `∂Δ^n`: all proper faces of `Δ^n`.
    pub fn boundary_simplex(n: usize) -> Self {
        assert!(n >= 1, "∂Δ^0 is empty");
        Self::from_subsets(n, n - 1)
    }

    fn from_subsets(n: usize, top: usize) -> Self {
        let subsets: Vec<Vec<Vec<usize>>> = (0..=top).map(|k| (0..=n).combinations(k + 1).collect()).collect();
        let names = subsets.iter().map(|cs| cs.iter().map(|c| tuple_name(c)).collect()).collect();
        let faces = subsets
            .iter()
            .enumerate()
            .map(|(k, cs)| {
                cs.iter()
                    .map(|c| {
                        if k == 0 {
                            return Vec::new();
                        }
                        (0..=k)
                            .map(|i| {
                                let mut f = c.clone();
                                f.remove(i);
                                subsets[k - 1].binary_search(&f).expect("faces of subsets are subsets")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        make_sset(names, faces).expect("subsets of an ordinal form a semisimplicial set")
    }

    /// One vertex and one edge with both faces at that vertex.
    pub fn circle() -> Self {
        make_sset(vec![vec!["v".into()], vec!["e".into()]], vec![vec![], vec![vec![0, 0]]]).expect("circle")
    }

    /// `m` points and nothing else.
    pub fn points(m: usize) -> Self {
        make_sset(vec![(0..m).map(|i| format!("p{i}")).collect()], vec![]).expect("points")
    }

    /// Highest dimension carrying a cell slot.
    pub fn dim(&self) -> usize {
        self.names.len() - 1
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.names.get(k).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn names(&self) -> &[Vec<String>] {
        &self.names
    }

    pub fn face_table(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn face(&self, k: usize, cell: usize, i: usize) -> usize {
        self.faces[k][cell][i]
    }

    /// Front `j`-face: the last face taken `k - j` times.
    pub fn front(&self, k: usize, cell: usize, j: usize) -> usize {
        (j..k).rev().fold(cell, |c, d| self.face(d + 1, c, d + 1))
    }

    /// Back `(k - j)`-face: `∂_0` taken `j` times.
    pub fn back(&self, k: usize, cell: usize, j: usize) -> usize {
        (0..j).fold(cell, |c, step| self.face(k - step, c, 0))
    }

    /// The `j`-th vertex of a `k`-cell.
    pub fn vertex(&self, k: usize, cell: usize, j: usize) -> usize {
        self.back(j, self.front(k, cell, j), j)
    }

    /// All cells as `(dimension, index)`, by dimension then index.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (0..=self.dim()).flat_map(|k| (0..self.cell_count(k)).map(move |c| (k, c))).collect()
    }

    /// Index of the cell of `Δ^n` spanned by `vertices`, for sets built by
    /// [`FiniteSSet::standard_simplex`] or [`FiniteSSet::boundary_simplex`].
    pub fn subset_cell(n: usize, vertices: &[usize]) -> usize {
        (0..=n)
            .combinations(vertices.len())
            .position(|c| c == vertices)
            .expect("vertices form a subset of [0..n]")
    }

    /// The subcomplex on the chosen cells, which must be closed under faces.
    pub fn subcomplex(&self, cells: &[Vec<usize>]) -> Result<Inclusion, CotensorError> {
        let mut chosen: Vec<Vec<usize>> = cells.to_vec();
        chosen.resize(self.dim() + 1, Vec::new());
        if cells.len() > self.dim() + 1 {
            return Err(CotensorError::NotASubcomplex("dimension exceeds the ambient space".into()));
        }
        for (k, cs) in chosen.iter_mut().enumerate() {
            cs.sort();
            cs.dedup();
            if let Some(&bad) = cs.iter().find(|&&c| c >= self.cell_count(k)) {
                return Err(CotensorError::NotASubcomplex(format!("no cell {bad} in dimension {k}")));
            }
        }
        let mut faces = vec![Vec::new(); chosen.len()];
        for k in 0..chosen.len() {
            for &c in &chosen[k] {
                if k == 0 {
                    faces[0].push(Vec::new());
                    continue;
                }
                let fs = self.faces[k][c]
                    .iter()
                    .map(|f| {
                        chosen[k - 1].binary_search(f).map_err(|_| {
                            CotensorError::NotASubcomplex(format!(
                                "face {f} of cell {c} in dimension {k} is missing"
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                faces[k].push(fs);
            }
        }
        let names = chosen
            .iter()
            .enumerate()
            .map(|(k, cs)| cs.iter().map(|&c| self.names[k][c].clone()).collect())
            .collect();
        let sub = make_sset(names, faces)?;
        let mut cell_map = chosen;
        cell_map.truncate(sub.dim() + 1);
        Ok(Inclusion {
            sub,
            ambient: self.clone(),
            cell_map,
        })
    }

    /// `∂Δ^n ⊆ Δ^n`.
    pub fn boundary_inclusion(n: usize) -> Inclusion {
        let d = Self::standard_simplex(n);
        let cells: Vec<Vec<usize>> = (0..n).map(|k| (0..d.cell_count(k)).collect()).collect();
        d.subcomplex(&cells).expect("the boundary is a subcomplex")
    }
}

/// An inclusion `L ⊆ K` of semisimplicial sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    sub: FiniteSSet,
    ambient: FiniteSSet,
    /// `cell_map[k][c]` is the image in `K` of the `k`-cell `c` of `L`
    cell_map: Vec<Vec<usize>>,
}

impl Inclusion {
    /// Validates injectivity and compatibility with faces.
    pub fn new(sub: FiniteSSet, ambient: FiniteSSet, cell_map: Vec<Vec<usize>>) -> Result<Self, CotensorError> {
        if cell_map.len() != sub.dim() + 1 || sub.dim() > ambient.dim() {
            return Err(CotensorError::NotASubcomplex("dimension mismatch".into()));
        }
        for (k, m) in cell_map.iter().enumerate() {
            if m.len() != sub.cell_count(k) || m.iter().any(|&c| c >= ambient.cell_count(k)) || !m.iter().all_unique() {
                return Err(CotensorError::NotASubcomplex(format!("cell map in dimension {k} is not injective")));
            }
            for (c, &img) in m.iter().enumerate() {
                for i in 0..=k {
                    if k > 0 && cell_map[k - 1][sub.face(k, c, i)] != ambient.face(k, img, i) {
                        return Err(CotensorError::NotASubcomplex(format!(
                            "face {i} of cell {c} in dimension {k} is not preserved"
                        )));
                    }
                }
            }
        }
        Ok(Self { sub, ambient, cell_map })
    }

    pub fn sub(&self) -> &FiniteSSet {
        &self.sub
    }

    pub fn ambient(&self) -> &FiniteSSet {
        &self.ambient
    }

    pub fn image(&self, k: usize, cell: usize) -> usize {
        self.cell_map[k][cell]
    }

    /// `M ⊆ L ⊆ K` from `M ⊆ L` (`self`) and `L ⊆ K`.
    pub fn then(&self, outer: &Inclusion) -> Result<Inclusion, CotensorError> {
        if self.ambient != outer.sub {
            return Err(CotensorError::NotASubcomplex("inclusions do not compose".into()));
        }
        let cell_map = self
            .cell_map
            .iter()
            .enumerate()
            .map(|(k, m)| m.iter().map(|&c| outer.image(k, c)).collect())
            .collect();
        Inclusion::new(self.sub.clone(), outer.ambient.clone(), cell_map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts() {
        assert_eq!(FiniteSSet::standard_simplex(2).counts(), vec![3, 3, 1]);
        assert_eq!(FiniteSSet::standard_simplex(3).counts(), vec![4, 6, 4, 1]);
        assert_eq!(FiniteSSet::boundary_simplex(2).counts(), vec![3, 3]);
        let c = FiniteSSet::circle();
        assert_eq!(c.counts(), vec![1, 1]);
        assert_eq!(c.face(1, 0, 0), c.face(1, 0, 1));
    }

    #[test]
    fn vertices_and_splittings_of_a_simplex() {
        let d = FiniteSSet::standard_simplex(3);
        let top = 0;
        assert_eq!((0..4).map(|j| d.vertex(3, top, j)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(d.front(3, top, 1), FiniteSSet::subset_cell(3, &[0, 1]));
        assert_eq!(d.back(3, top, 1), FiniteSSet::subset_cell(3, &[1, 2, 3]));
        let e = FiniteSSet::subset_cell(3, &[1, 3]);
        assert_eq!((d.vertex(1, e, 0), d.vertex(1, e, 1)), (1, 3));
    }

    #[test]
    fn identity_violation_is_reported() {
        // a 2-cell whose faces disagree on a shared vertex
        let names = vec![
            vec!["a".into(), "b".into(), "c".into()],
            vec!["ab".into(), "bc".into(), "ac".into()],
            vec!["abc".into()],
        ];
        let faces = vec![vec![], vec![vec![1, 0], vec![2, 1], vec![2, 0]], vec![vec![1, 0, 2]]];
        let err = make_sset(names, faces).unwrap_err();
        assert!(matches!(err, CotensorError::SemisimplicialIdentityViolation { dim: 2, .. }));
    }

    #[test]
    fn subcomplexes() {
        let inc = FiniteSSet::boundary_inclusion(2);
        assert_eq!(inc.sub(), &FiniteSSet::boundary_simplex(2));
        let d = FiniteSSet::standard_simplex(2);
        assert!(matches!(d.subcomplex(&[vec![0], vec![0]]), Err(CotensorError::NotASubcomplex(_))));
        let v = d.subcomplex(&[vec![0]]).unwrap();
        let w = inc.sub().subcomplex(&[vec![0]]).unwrap().then(&inc).unwrap();
        assert_eq!(v, w);
    }
}
