#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use dgres_cli::codec;
use dgres_cli::{print, Document, Kind};
use dgres_core::complexes::Chain;
use dgres_core::cotensor::FiniteSSet;
use dgres_core::dgcat::{fixture, DgCategory, DgCategoryBuilder, DgFunctor, Fixture};
use dgres_core::gen::{random_complexes_category, random_mc_strict_edges};
use dgres_core::mc::{strictify, McError, MultiIndex, SimplicialCochain};
use dgres_core::{Field, Matrix, PrimeField, Rationals};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
}

pub fn dgres(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_dgres")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
    }
}

/// Compares with the stored file, or rewrites it when `DGRES_BLESS` is set.
pub fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("DGRES_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "golden file {name} differs");
}

fn doc<P: serde::Serialize>(field: &str, kind: Kind, payload: &P) -> String {
    print(&Document::from_payload(field, kind, payload))
}

pub fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// `unit_k` at level 2 with both edges the identity and no 2-simplex: the
/// equation fails on `(0,1,2)`.
pub fn broken_triangle() -> String {
    let q = Rationals;
    let cat = fixture(&q, Fixture::UnitK, 0).unwrap();
    let comps = BTreeMap::from([(MultiIndex::edge(0, 1), vec![q.one()]), (MultiIndex::edge(1, 2), vec![q.one()])]);
    let eta = SimplicialCochain::new(&cat, 2, -1, vec![0; 3], vec![0; 3], comps).unwrap();
    doc("q", Kind::McObject, &codec::encode_mc(&cat, &eta))
}

pub fn sphere_identity() -> String {
    let q = Rationals;
    let cat = Arc::new(fixture(&q, Fixture::Sphere, 1).unwrap());
    doc("q", Kind::Functor, &codec::encode_functor(&DgFunctor::identity(cat)))
}

/// The sphere mapped onto two objects without morphisms between them.
pub fn sphere_collapse() -> String {
    let q = Rationals;
    let src = Arc::new(fixture(&q, Fixture::Sphere, 1).unwrap());
    let mut b = DgCategoryBuilder::new(&q, &["a", "b"]);
    b.set_hom(0, 0, dgres_core::complexes::ChainComplex::concentrated(&q, 0, 1));
    b.set_hom(1, 1, dgres_core::complexes::ChainComplex::concentrated(&q, 0, 1));
    b.set_unit_basis(0, 0).set_unit_basis(1, 0);
    let tgt = Arc::new(b.build().unwrap());
    let comps = BTreeMap::from([
        ((0, 0), BTreeMap::from([(0, Matrix::identity(&q, 1))])),
        ((1, 1), BTreeMap::from([(0, Matrix::identity(&q, 1))])),
    ]);
    let f = DgFunctor::new(src, tgt, vec![0, 1], comps).unwrap();
    doc("q", Kind::Functor, &codec::encode_functor(&f))
}

pub fn circle(lambda: i64) -> String {
    let q = Rationals;
    let cat = fixture(&q, Fixture::UnitK, 0).unwrap();
    let space = FiniteSSet::circle();
    let mut eta = dgres_core::cotensor::KCochain::zero(-1, vec![0], vec![0]);
    eta.set(&q, (1, 0), vec![q.from_i64(lambda)]);
    doc("q", Kind::LocalSystem, &codec::encode_local_system(&cat, &space, &eta))
}

pub fn adjunction<F: Field>(k: &F, which: Fixture, d: i32, n: i32, g: Vec<i64>, truncation: usize) -> String {
    let cat = fixture(k, which, d).unwrap();
    let (x, y) = (0, cat.object_count() - 1);
    let g = Chain::new(n - 1, g.into_iter().map(|v| k.from_i64(v)).collect());
    doc(&k.spec(), Kind::AdjunctionData, &codec::encode_adjunction(&cat, x, y, n, &g, truncation))
}

/// `End = k ⊕ (u ↦ e)` with `e` idempotent and acting as a unit on `u`;
/// `1 − e` is homotopic to the identity but not invertible.
fn idempotent_category() -> Arc<DgCategory<Rationals>> {
    let q = Rationals;
    let mut b = DgCategoryBuilder::new(&q, &["*"]);
    let dims = BTreeMap::from([(0, 2), (1, 1)]);
    let d1 = Matrix::from_i64(&q, 2, 1, &[0, 1]);
    b.set_hom(0, 0, dgres_core::complexes::make_complex(&q, &dims, BTreeMap::from([(1, d1)])).unwrap());
    b.set_unit_basis(0, 0);
    b.set_product(0, 0, 0, 1, 1, vec![(1, q.one())]);
    b.set_product(0, 0, 0, 1, 2, vec![(2, q.one())]);
    b.set_product(0, 0, 0, 2, 1, vec![(2, q.one())]);
    Arc::new(b.build().unwrap())
}

/// An MC object whose edge is invertible only up to homotopy, and a
/// non-strict one with strictly invertible edges.
pub fn mc_objects() -> (String, String) {
    let q = Rationals;
    let cat = idempotent_category();
    let edge = BTreeMap::from([(MultiIndex::edge(0, 1), vec![q.one(), q.from_i64(-1)])]);
    let eta = SimplicialCochain::new(&cat, 1, -1, vec![0; 2], vec![0; 2], edge).unwrap();
    let x = dgres_core::mc::MCObject::new(cat.clone(), eta).unwrap();
    assert!(matches!(strictify(&x), Err(McError::RequiresStrictInverses(0, 1))));
    let refused = doc("q", Kind::McObject, &codec::encode_mc(&cat, x.eta()));

    let k = PrimeField::new(101).unwrap();
    let (cat, x) = (0..64)
        .map(|seed| {
            let cat = random_complexes_category(&k, &mut ChaCha8Rng::seed_from_u64(seed), 2);
            let x = random_mc_strict_edges(&cat, 0, 2, &mut ChaCha8Rng::seed_from_u64(seed));
            (cat, x)
        })
        .find(|(_, x)| !x.is_strict())
        .expect("some seed gives a higher component");
    assert!(strictify(&x).is_ok());
    (refused, doc("fp:101", Kind::McObject, &codec::encode_mc(&cat, x.eta())))
}
