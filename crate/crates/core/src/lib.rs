//! Exact invariant-theory toolkit for finite matrix groups.
//!
//! Builds a finite matrix group from generators together with a representation,
//! computes generating families of the invariant ring and of the module of
//! covariant polynomials, and decomposes covariant polynomials, sampled
//! Schwartz-class functions, and point-supported covariant distributions into
//! invariant-coefficient combinations of those generators.
//!
//! All algebraic pipelines run over arbitrary-precision rationals; the
//! compactification pipeline ([`compactify`]) is the one float-backed module.

pub mod compactify;
pub mod decompose;
pub mod dist;
pub mod error;
pub mod generators;
pub mod group;
pub mod matrix;
pub mod molien;
pub mod poly;
pub mod reynolds;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use group::FiniteGroupRep;
pub use matrix::DenseMatrix;
pub use poly::{Monomial, ScalarPolynomial, VectorPolynomial};
pub use scalar::Rat;
