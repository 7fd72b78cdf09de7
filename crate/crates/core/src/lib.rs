//! Exact and floating-point analysis of metric Lie algebras: Levi-Civita and
//! Weyl connections, holonomy, de Rham splittings, reducibility witnesses and
//! decomposability of Lie LCP structures, plus the integer tools used to build
//! lattices in almost abelian groups.

pub mod algebra;
pub mod analysis;
pub mod format;
pub mod gallery;
pub mod lattice;
pub mod lcp;
pub mod metric;

pub use algebra::{Matrix, Rational, Scalar, ScalarMode, Subspace, TolerancePolicy};
