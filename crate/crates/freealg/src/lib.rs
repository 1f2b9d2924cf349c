//! Exact computation in the free associative algebra of rank two.
//!
//! The crate provides sparse noncommutative polynomial arithmetic over the
//! rationals and over prime fields, degree and weighted-degree machinery
//! with an inequality harness, a tame-automorphism decomposition with
//! failure certificates, a retraction toolkit, truncated Mal'tsev-Neumann
//! series over the free group with root solvers, and a bimodule monomial
//! classifier with a bounded commutator-equation solver.
//!
//! The coefficient field is a runtime object (see [`field::Field`]); the
//! core types are generic over it, with concrete aliases below for the two
//! fields the command-line tool exposes.

pub mod bimodule;
pub mod endo;
pub mod error;
pub mod estimate;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod series;
pub mod word;

pub use error::AlgError;
pub use field::{parse_field_selector, Field, FieldSel, PrimeField, Rationals};
pub use num_rational::BigRational;
pub use poly::{Degree, HomogeneousForm, Polynomial};
pub use word::Word;

/// Polynomial over the rationals.
pub type QPoly = Polynomial<Rationals>;
/// Polynomial over a prime field.
pub type FpPoly = Polynomial<PrimeField>;
/// Endomorphism over the rationals.
pub type QEndo = endo::Endomorphism<Rationals>;
/// Endomorphism over a prime field.
pub type FpEndo = endo::Endomorphism<PrimeField>;
/// Truncated series over the rationals.
pub type QSeries = series::TruncatedSeries<Rationals>;
/// Truncated series over a prime field.
pub type FpSeries = series::TruncatedSeries<PrimeField>;
