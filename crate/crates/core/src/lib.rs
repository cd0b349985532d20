//! Exact computations with finite dg-categories: chain complexes and homology,
//! Maurer–Cartan simplicial resolutions, cotensors by finite simplicial sets,
//! and pushouts that freely attach a morphism with prescribed boundary.
//!
//! Everything is exact over a prime field or the rationals; every structure
//! is validated when it is built.

pub mod complexes;
pub mod cotensor;
pub mod dgcat;
pub mod field;
pub mod gen;
pub mod mc;
pub mod pushout;
pub mod linalg;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use linalg::Matrix;
