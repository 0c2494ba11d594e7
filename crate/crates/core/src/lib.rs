//! Exact computations with Sullivan minimal models.
//!
//! The crate covers the free graded-commutative algebra ΛV, Sullivan
//! models and their maps, degree-bounded cohomology and the dual Hurewicz
//! map, DG homotopies through the cylinder Λ(t, dt), and a set of checks and
//! constructions for cyclic maps: necessary-condition batteries, Gottlieb
//! ranks from derivations, explicit nullhomotopies and classification of
//! cyclic maps into truncated-polynomial and degree-two pure targets.
//!
//! All arithmetic is exact over ℚ.

pub mod catalog;
pub mod cohomology;
pub mod cyclic;
pub mod error;
pub mod grading;
pub mod homotopy;
pub mod maps;
pub mod model;
pub mod ratlin;
pub mod report;
pub mod text;

pub use error::{Error, Result};
pub use grading::{GenId, Generator, GradedAlgebra, Monomial, Polynomial};
pub use maps::ModelMap;
pub use model::Model;

/// Exact rationals.
pub type Q = num_rational::BigRational;

/// `n / d` as an exact rational. Panics when `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
