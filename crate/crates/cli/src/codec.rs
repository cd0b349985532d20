//! Typed payloads and their conversion to and from library values.
//!
//! Scalars are strings in the field's canonical form. Objects and cells are
//! referred to by name; basis elements of a hom complex by their position in
//! the degree-ordered basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use dgres_core::complexes::{make_complex, Chain, ChainComplex};
use dgres_core::cotensor::{make_sset, Cell, FiniteSSet, KCochain};
use dgres_core::dgcat::{DgCategory, DgCategoryBuilder, DgFunctor, ObjId};
use dgres_core::mc::{MultiIndex, SimplicialCochain};
use dgres_core::{Field, Matrix};
use serde::{Deserialize, Serialize};

use crate::format::FormatError;

/// Either the document is malformed, or it is well formed but describes
/// something the library rejects.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{message}")]
    Rejected { kind: String, message: String },
}

/// Wraps a library error, keeping its variant name.
pub fn rejected<E: std::fmt::Debug + std::fmt::Display>(e: E) -> DecodeError {
    let debug = format!("{e:?}");
    let kind = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    DecodeError::Rejected { kind, message: e.to_string() }
}

pub type Scalars = Vec<String>;
/// Dense matrix, one list per row.
pub type MatrixDoc = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub homs: Vec<HomDoc>,
    pub units: BTreeMap<String, Scalars>,
    pub products: Vec<ProductDoc>,
}

/// A hom complex; `differentials[q]` maps degree `q` to degree `q - 1`.
/// Missing homs and differentials are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub source: String,
    pub target: String,
    pub dims: BTreeMap<i32, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differentials: BTreeMap<i32, MatrixDoc>,
}

/// `g ∘ f` for `f ∈ Hom(source, middle)`, `g ∈ Hom(middle, target)`, as a
/// sparse vector of `Hom(source, target)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub source: String,
    pub middle: String,
    pub target: String,
    pub g: usize,
    pub f: usize,
    pub value: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McDoc {
    pub category: CategoryDoc,
    pub n: usize,
    pub objects: Vec<String>,
    /// keyed by simplex, e.g. `"(0,1)"`
    pub components: BTreeMap<String, Scalars>,
}

/// `faces[k - 1][c]` names the faces `∂_0 c, …, ∂_k c` of the `c`-th `k`-cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSetDoc {
    pub cells: Vec<Vec<String>>,
    pub faces: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellValueDoc {
    pub dim: usize,
    pub cell: String,
    pub value: Scalars,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSystemDoc {
    pub category: CategoryDoc,
    pub space: SSetDoc,
    /// object on each vertex, in vertex order
    pub objects: Vec<String>,
    pub components: Vec<CellValueDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub source: String,
    pub target: String,
    pub components: BTreeMap<i32, MatrixDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub source: CategoryDoc,
    pub target: CategoryDoc,
    pub objects: BTreeMap<String, String>,
    pub maps: Vec<MapDoc>,
}

/// Attach `f: source → target` of degree `n` with `df = g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjunctionDoc {
    pub category: CategoryDoc,
    pub source: String,
    pub target: String,
    pub n: i32,
    pub g: Scalars,
    pub truncation: usize,
}

fn scalars<F: Field>(k: &F, v: &[F::Elem]) -> Scalars {
    v.iter().map(|x| k.format(x)).collect()
}

fn parse_scalars<F: Field>(k: &F, v: &[String], path: &str) -> Result<Vec<F::Elem>, FormatError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| k.parse(s).map_err(|e| FormatError::invalid(format!("{path}[{i}]"), e.to_string())))
        .collect()
}

fn matrix_doc<F: Field>(m: &Matrix<F>) -> MatrixDoc {
    (0..m.rows()).map(|r| scalars(m.field(), m.row(r))).collect()
}

fn parse_matrix<F: Field>(k: &F, m: &MatrixDoc, rows: usize, cols: usize, path: &str) -> Result<Matrix<F>, FormatError> {
    if m.len() != rows {
        return Err(FormatError::invalid(path, format!("{} rows, expected {rows}", m.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (r, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(FormatError::invalid(format!("{path}[{r}]"), format!("{} entries, expected {cols}", row.len())));
        }
        data.extend(parse_scalars(k, row, &format!("{path}[{r}]"))?);
    }
    Ok(Matrix::from_rows(k, rows, cols, data))
}

fn object(names: &[String], name: &str, path: &str) -> Result<ObjId, FormatError> {
    names
        .iter()
        .position(|o| o == name)
        .ok_or_else(|| FormatError::invalid(path, format!("unknown object {name:?}")))
}

pub fn encode_category<F: Field>(cat: &DgCategory<F>) -> CategoryDoc {
    let k = cat.field();
    let names = cat.objects();
    let n = cat.object_count();
    let mut homs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let h = cat.hom(x, y);
            if h.total_dim() == 0 {
                continue;
            }
            let differentials = h
                .degrees()
                .filter_map(|q| h.differential_ref(q).filter(|d| !d.is_zero()).map(|d| (q, matrix_doc(d))))
                .collect();
            homs.push(HomDoc { source: names[x].clone(), target: names[y].clone(), dims: h.dims(), differentials });
        }
    }
    let units = (0..n).map(|x| (names[x].clone(), scalars(k, &cat.unit(x).coords))).collect();
    let mut entries: Vec<_> = cat
        .products()
        .iter()
        .flat_map(|(&(x, y, z), table)| table.iter().map(move |(&(g, f), v)| ((x, y, z, g, f), v)))
        .filter(|(_, v)| !v.is_empty())
        .collect();
    entries.sort_by_key(|(key, _)| *key);
    let products = entries
        .into_iter()
        .map(|((x, y, z, g, f), v)| ProductDoc {
            source: names[x].clone(),
            middle: names[y].clone(),
            target: names[z].clone(),
            g,
            f,
            value: v.iter().map(|(i, c)| (*i, k.format(c))).collect(),
        })
        .collect();
    CategoryDoc { objects: names.to_vec(), homs, units, products }
}

/// Builder for the category in `doc`; the laws are checked by `build`.
pub fn decode_category<F: Field>(k: &F, doc: &CategoryDoc, path: &str) -> Result<DgCategoryBuilder<F>, DecodeError> {
    let names = &doc.objects;
    for (i, o) in names.iter().enumerate() {
        if names[..i].contains(o) {
            return Err(FormatError::invalid(format!("{path}.objects[{i}]"), format!("duplicate object {o:?}")).into());
        }
    }
    let mut b = DgCategoryBuilder::with_objects(k, names.clone());
    let mut homs: BTreeMap<(ObjId, ObjId), ChainComplex<F>> = BTreeMap::new();
    for (i, h) in doc.homs.iter().enumerate() {
        let p = format!("{path}.homs[{i}]");
        let x = object(names, &h.source, &format!("{p}.source"))?;
        let y = object(names, &h.target, &format!("{p}.target"))?;
        if homs.contains_key(&(x, y)) {
            return Err(FormatError::invalid(p, "hom listed twice").into());
        }
        let dim = |q: i32| h.dims.get(&q).copied().unwrap_or(0);
        let mut diffs = BTreeMap::new();
        for (&q, m) in &h.differentials {
            diffs.insert(q, parse_matrix(k, m, dim(q - 1), dim(q), &format!("{p}.differentials.{q}"))?);
        }
        let c = make_complex(k, &h.dims, diffs).map_err(rejected)?;
        homs.insert((x, y), c);
    }
    for ((x, y), c) in homs {
        b.set_hom(x, y, c);
    }
    for (name, u) in &doc.units {
        let p = format!("{path}.units.{name}");
        let x = object(names, name, &p)?;
        let expected = b.hom(x, x).map_or(0, |h| h.dim(0));
        if u.len() != expected {
            return Err(FormatError::invalid(p, format!("{} coordinates, expected {expected}", u.len())).into());
        }
        b.set_unit(x, parse_scalars(k, u, &p)?);
    }
    for (i, pr) in doc.products.iter().enumerate() {
        let p = format!("{path}.products[{i}]");
        let x = object(names, &pr.source, &format!("{p}.source"))?;
        let y = object(names, &pr.middle, &format!("{p}.middle"))?;
        let z = object(names, &pr.target, &format!("{p}.target"))?;
        let total = |a, c| b.hom(a, c).map_or(0, |h: &ChainComplex<F>| h.total_dim());
        if pr.g >= total(y, z) || pr.f >= total(x, y) {
            return Err(FormatError::invalid(p, "basis position out of range").into());
        }
        let mut value = Vec::new();
        for (&j, s) in &pr.value {
            if j >= total(x, z) {
                return Err(FormatError::invalid(format!("{p}.value.{j}"), "basis position out of range").into());
            }
            value.push((j, k.parse(s).map_err(|e| FormatError::invalid(format!("{p}.value.{j}"), e.to_string()))?));
        }
        b.set_product(x, y, z, pr.g, pr.f, value);
    }
    Ok(b)
}

fn parse_simplex(s: &str, path: &str) -> Result<MultiIndex, FormatError> {
    let bad = || FormatError::invalid(path, format!("malformed simplex {s:?}"));
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let entries = inner
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    MultiIndex::new(entries).map_err(|e| FormatError::invalid(path, e.to_string()))
}

pub fn encode_mc<F: Field>(cat: &DgCategory<F>, eta: &SimplicialCochain<F>) -> McDoc {
    let k = cat.field();
    McDoc {
        category: encode_category(cat),
        n: eta.n(),
        objects: eta.source().iter().map(|&o| cat.objects()[o].clone()).collect(),
        components: eta.components().iter().map(|(i, v)| (i.to_string(), scalars(k, v))).collect(),
    }
}

/// The category and the (unvalidated) cochain of an MC document.
pub fn decode_mc<F: Field>(k: &F, doc: &McDoc) -> Result<(DgCategoryBuilder<F>, McParts<F>), DecodeError> {
    let b = decode_category(k, &doc.category, "payload.category")?;
    let names = &doc.category.objects;
    let objects = doc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| object(names, o, &format!("payload.objects[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut components = BTreeMap::new();
    for (key, v) in &doc.components {
        let p = format!("payload.components.{key}");
        components.insert(parse_simplex(key, &p)?, parse_scalars(k, v, &p)?);
    }
    Ok((b, McParts { n: doc.n, objects, components }))
}

pub struct McParts<F: Field> {
    pub n: usize,
    pub objects: Vec<ObjId>,
    pub components: BTreeMap<MultiIndex, Vec<F::Elem>>,
}

impl<F: Field> McParts<F> {
    pub fn cochain(self, cat: &DgCategory<F>) -> Result<SimplicialCochain<F>, FormatError> {
        SimplicialCochain::new(cat, self.n, -1, self.objects.clone(), self.objects, self.components)
            .map_err(|e| FormatError::invalid("payload.components", e.to_string()))
    }
}

pub fn encode_sset(k: &FiniteSSet) -> SSetDoc {
    let names = k.names();
    let faces = (1..names.len())
        .map(|dim| {
            k.face_table()[dim]
                .iter()
                .map(|fs| fs.iter().map(|&c| names[dim - 1][c].clone()).collect())
                .collect()
        })
        .collect();
    SSetDoc { cells: names.to_vec(), faces }
}

fn cell(names: &[Vec<String>], dim: usize, name: &str, path: &str) -> Result<usize, FormatError> {
    let cells = names.get(dim).ok_or_else(|| FormatError::invalid(path, format!("no cells of dimension {dim}")))?;
    cells
        .iter()
        .position(|c| c == name)
        .ok_or_else(|| FormatError::invalid(path, format!("unknown {dim}-cell {name:?}")))
}

/// Resolves face names; the face identities are checked by `make_sset`.
pub fn decode_sset(doc: &SSetDoc, path: &str) -> Result<FiniteSSet, DecodeError> {
    for (dim, cells) in doc.cells.iter().enumerate() {
        for (i, c) in cells.iter().enumerate() {
            if cells[..i].contains(c) {
                return Err(FormatError::invalid(format!("{path}.cells[{dim}][{i}]"), format!("duplicate cell {c:?}")).into());
            }
        }
    }
    if doc.faces.len() + 1 != doc.cells.len().max(1) {
        return Err(FormatError::invalid(format!("{path}.faces"), "one face table per positive dimension").into());
    }
    let mut faces = vec![Vec::new()];
    for (i, table) in doc.faces.iter().enumerate() {
        let dim = i + 1;
        let mut out = Vec::with_capacity(table.len());
        for (c, fs) in table.iter().enumerate() {
            let p = format!("{path}.faces[{i}][{c}]");
            out.push(fs.iter().map(|f| cell(&doc.cells, dim - 1, f, &p)).collect::<Result<Vec<_>, _>>()?);
        }
        faces.push(out);
    }
    make_sset(doc.cells.clone(), faces).map_err(rejected)
}

pub fn encode_local_system<F: Field>(cat: &DgCategory<F>, space: &FiniteSSet, eta: &KCochain<F>) -> LocalSystemDoc {
    let k = cat.field();
    LocalSystemDoc {
        category: encode_category(cat),
        space: encode_sset(space),
        objects: eta.source().iter().map(|&o| cat.objects()[o].clone()).collect(),
        components: eta
            .components()
            .iter()
            .map(|(&(dim, c), v)| CellValueDoc { dim, cell: space.names()[dim][c].clone(), value: scalars(k, v) })
            .collect(),
    }
}

pub struct LocalParts<F: Field> {
    pub space: Arc<FiniteSSet>,
    pub objects: Vec<ObjId>,
    pub components: BTreeMap<Cell, Vec<F::Elem>>,
}

pub fn decode_local_system<F: Field>(
    k: &F,
    doc: &LocalSystemDoc,
) -> Result<(DgCategoryBuilder<F>, LocalParts<F>), DecodeError> {
    let b = decode_category(k, &doc.category, "payload.category")?;
    let space = decode_sset(&doc.space, "payload.space")?;
    let names = &doc.category.objects;
    if doc.objects.len() != space.cell_count(0) {
        return Err(FormatError::invalid("payload.objects", format!("expected {} objects", space.cell_count(0))).into());
    }
    let objects = doc
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| object(names, o, &format!("payload.objects[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut components = BTreeMap::new();
    for (i, cv) in doc.components.iter().enumerate() {
        let p = format!("payload.components[{i}]");
        if cv.dim == 0 {
            return Err(FormatError::invalid(p, "vertices carry no component").into());
        }
        let c = cell(space.names(), cv.dim, &cv.cell, &p)?;
        components.insert((cv.dim, c), parse_scalars(k, &cv.value, &format!("{p}.value"))?);
    }
    Ok((b, LocalParts { space: Arc::new(space), objects, components }))
}

pub fn encode_functor<F: Field>(f: &DgFunctor<F>) -> FunctorDoc {
    let (s, t) = (f.source(), f.target());
    let n = s.object_count();
    let mut maps = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let m = f.hom_map(x, y);
            let components: BTreeMap<_, _> = m
                .source()
                .degrees()
                .map(|q| (q, m.component(q)))
                .filter(|(_, c)| !c.is_zero())
                .map(|(q, c)| (q, matrix_doc(&c)))
                .collect();
            if !components.is_empty() {
                maps.push(MapDoc { source: s.objects()[x].clone(), target: s.objects()[y].clone(), components });
            }
        }
    }
    FunctorDoc {
        source: encode_category(s),
        target: encode_category(t),
        objects: (0..n).map(|x| (s.objects()[x].clone(), t.objects()[f.object(x)].clone())).collect(),
        maps,
    }
}

pub struct FunctorParts<F: Field> {
    pub object_map: Vec<ObjId>,
    pub components: BTreeMap<(ObjId, ObjId), BTreeMap<i32, Matrix<F>>>,
}

/// Needs the validated categories to know the matrix shapes.
pub fn decode_functor_maps<F: Field>(
    doc: &FunctorDoc,
    source: &Arc<DgCategory<F>>,
    target: &Arc<DgCategory<F>>,
) -> Result<FunctorParts<F>, FormatError> {
    let k = source.field();
    let (sn, tn) = (&doc.source.objects, &doc.target.objects);
    let mut object_map = Vec::with_capacity(sn.len());
    for o in sn {
        let img = doc
            .objects
            .get(o)
            .ok_or_else(|| FormatError::invalid("payload.objects", format!("no image for {o:?}")))?;
        object_map.push(object(tn, img, &format!("payload.objects.{o}"))?);
    }
    if let Some(extra) = doc.objects.keys().find(|o| !sn.contains(o)) {
        return Err(FormatError::invalid("payload.objects", format!("unknown object {extra:?}")));
    }
    let mut components = BTreeMap::new();
    for (i, m) in doc.maps.iter().enumerate() {
        let p = format!("payload.maps[{i}]");
        let x = object(sn, &m.source, &format!("{p}.source"))?;
        let y = object(sn, &m.target, &format!("{p}.target"))?;
        let (hs, ht) = (source.hom(x, y), target.hom(object_map[x], object_map[y]));
        let mut comps = BTreeMap::new();
        for (&q, mat) in &m.components {
            comps.insert(q, parse_matrix(k, mat, ht.dim(q), hs.dim(q), &format!("{p}.components.{q}"))?);
        }
        if components.insert((x, y), comps).is_some() {
            return Err(FormatError::invalid(p, "map listed twice"));
        }
    }
    Ok(FunctorParts { object_map, components })
}

pub fn encode_adjunction<F: Field>(cat: &DgCategory<F>, x: ObjId, y: ObjId, n: i32, g: &Chain<F>, truncation: usize) -> AdjunctionDoc {
    AdjunctionDoc {
        category: encode_category(cat),
        source: cat.objects()[x].clone(),
        target: cat.objects()[y].clone(),
        n,
        g: scalars(cat.field(), &g.coords),
        truncation,
    }
}

pub struct AdjunctionParts<F: Field> {
    pub x: ObjId,
    pub y: ObjId,
    pub g: Chain<F>,
}

pub fn decode_adjunction<F: Field>(
    k: &F,
    doc: &AdjunctionDoc,
) -> Result<(DgCategoryBuilder<F>, AdjunctionParts<F>), DecodeError> {
    let b = decode_category(k, &doc.category, "payload.category")?;
    let names = &doc.category.objects;
    let x = object(names, &doc.source, "payload.source")?;
    let y = object(names, &doc.target, "payload.target")?;
    let g = Chain::new(doc.n - 1, parse_scalars(k, &doc.g, "payload.g")?);
    Ok((b, AdjunctionParts { x, y, g }))
}
