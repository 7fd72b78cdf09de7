//! Metric Lie algebras and the Riemannian invariants of their left-invariant metrics.

mod connection;
mod de_rham;
mod holonomy;
mod lie_algebra;
mod reducing;

pub use connection::{curvature, levi_civita, ConnectionKind, Curvature, InvariantConnection};
pub use de_rham::{de_rham_splitting, de_rham_splitting_with_seed, verify_factor_subalgebras, DeRhamSplitting, FactorFlags, DEFAULT_SEED};
pub use holonomy::{
    commutant_of_operators, holonomy_algebra, holonomy_from_connection, restrict_operator, symmetric_commutant,
    OperatorAlgebra, OperatorAlgebraKind,
};
pub use lie_algebra::{is_unimodular, validate_algebra, MetricLieAlgebra, ValidationReport, Violation};
pub use reducing::{check_reducing_pair, reducibility_witness, reducibility_witness_from_splitting, ConditionReport, SplitPair};

use crate::algebra::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid metric Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("no eigensplit into {expected} factors after {attempts} random commutant elements; adjust the tolerance")]
    Ambiguous { expected: usize, attempts: usize },
    #[error("holonomy-invariant subspace is not invariant under the connection: {0}")]
    HolonomyInconsistency(String),
    #[error("internal consistency failure: {0}")]
    TheoremViolation(String),
}
