//! Lie LCP structures: Weyl connections, validation and decomposability.

mod decompose;
mod validate;
mod weyl;

pub use decompose::{
    classify_structure, lcp_decomposable, principal_factor, Classification, DecomposabilityReport, DecomposeOptions,
    PrincipalFactorFacts, Verdict, WeakReducibility,
};
pub use validate::{lee_form_from_splitting, validate_lcp, CheckOutcome, LcpChecks, LcpReport};
pub use weyl::{is_closed, weyl_connection};

use crate::algebra::{LinalgError, Scalar, Subspace};
use crate::metric::MetricError;

/// Flat ideal `𝔲`, Lee covector `θ` and an optional complementary
/// subalgebra `𝔥` (used only by the trace formula check).
#[derive(Clone, Debug, PartialEq)]
pub struct LcpData<S: Scalar> {
    pub flat_ideal: Subspace<S>,
    pub lee_covector: Vec<S>,
    pub complement: Option<Subspace<S>>,
}

impl<S: Scalar> LcpData<S> {
    pub fn new(flat_ideal: Subspace<S>, lee_covector: Vec<S>) -> Self {
        LcpData {
            flat_ideal,
            lee_covector,
            complement: None,
        }
    }

    pub fn with_complement(mut self, h: Subspace<S>) -> Self {
        self.complement = Some(h);
        self
    }

    /// `q = dim 𝔲`.
    pub fn q(&self) -> usize {
        self.flat_ideal.dim()
    }

    pub fn to_f64(&self) -> LcpData<f64> {
        LcpData {
            flat_ideal: self.flat_ideal.to_f64(),
            lee_covector: self.lee_covector.iter().map(S::to_f64).collect(),
            complement: self.complement.as_ref().map(Subspace::to_f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LcpError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("complement is not a subalgebra")]
    NotSubalgebra,
    #[error("complement and flat ideal do not span the algebra as a direct sum")]
    NotComplementary,
    #[error("the trace formula for the Lee form needs a unimodular algebra")]
    NotUnimodular,
    #[error("not a valid LCP input (failed checks: {0})")]
    InvalidLcp(String),
    #[error("inconsistent with the structure theory: {0}")]
    TheoremViolation(String),
}
