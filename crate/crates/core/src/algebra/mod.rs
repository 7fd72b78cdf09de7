//! Scalar backends and the dense linear algebra every analysis is built on.

mod closure;
mod eigen;
mod matrix;
mod scalar;
mod subspace;

pub use closure::{as_matrices, span_closure, span_closure_bounded};
pub use eigen::{g_symmetric_eigensplit, symmetric_eigensplit, EigenCluster};
pub use matrix::{add_vec, axpy, dot, inner, max_abs_vec, scale_vec, sub_vec, unit_vector, Matrix};
pub use scalar::{
    promote, rationalize, Rational, Scalar, ScalarMode, ScalarParseError, TolerancePolicy,
};
pub use subspace::{rank_and_nullspace, rank_of, rref, SpanBuilder, Subspace};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("empty matrix")]
    Empty,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular at the active tolerance")]
    Singular,
    #[error("matrix is not self-adjoint for the given inner product")]
    NotSymmetric,
    #[error("inner product is not positive definite")]
    NotPositiveDefinite,
    #[error("eigenvalue {value} is not rational; promote to float mode")]
    IrrationalSpectrum { value: f64 },
    #[error(
        "eigenvalue gap {gap:e} is within a factor 10 of the cluster tolerance {cluster_tol:e}; \
         tighten or loosen the tolerance"
    )]
    ClusterAmbiguity { gap: f64, cluster_tol: f64 },
    #[error("tolerances must be finite and positive (rank_tol={rank_tol}, eigen_cluster_tol={eigen_cluster_tol})")]
    InvalidTolerance { rank_tol: f64, eigen_cluster_tol: f64 },
}
