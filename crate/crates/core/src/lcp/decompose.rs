use serde::Serialize;

use crate::algebra::{max_abs_vec, Scalar, Subspace, TolerancePolicy};
use crate::metric::{check_reducing_pair, de_rham_splitting_with_seed, DeRhamSplitting, MetricLieAlgebra, DEFAULT_SEED};

use super::validate::{validate_lcp, LcpReport};
use super::{LcpData, LcpError};

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    pub seed: u64,
    /// Run the splitting even if the LCP checks fail.
    pub force: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            seed: DEFAULT_SEED,
            force: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecomposabilityReport<S: Scalar> {
    pub decomposable: bool,
    pub witness: Option<(Subspace<S>, Subspace<S>)>,
    pub splitting: DeRhamSplitting<S>,
    /// Factors onto which `𝔲 + ℝθ♯` projects nontrivially.
    pub touched_factors: Vec<usize>,
    pub principal_factor_index: Option<usize>,
    pub q: usize,
    pub dim_bound_satisfied: Option<bool>,
    pub validation: LcpReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalFactorFacts {
    pub index: usize,
    pub dim: usize,
    pub q: usize,
    /// `dim ≥ q + 2`.
    pub bound_satisfied: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Indecomposable,
    Decomposable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WeakReducibility {
    #[serde(rename = "not applicable")]
    NotApplicable,
    #[serde(rename = "undetermined (requires lattice analysis)")]
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct Classification<S: Scalar> {
    pub verdict: Verdict,
    pub report: DecomposabilityReport<S>,
    pub principal: Option<PrincipalFactorFacts>,
    pub weak_reducibility: WeakReducibility,
}

pub fn lcp_decomposable<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    data: &LcpData<S>,
    tol: &TolerancePolicy,
    opts: DecomposeOptions,
) -> Result<DecomposabilityReport<S>, LcpError> {
    let validation = validate_lcp(g, data, tol)?;
    if !validation.overall && !opts.force {
        return Err(LcpError::InvalidLcp(validation.failed().join(", ")));
    }
    let gram = g.gram();
    let splitting = de_rham_splitting_with_seed(g, tol, opts.seed)?;
    let mut probes: Vec<Vec<S>> = data.flat_ideal.basis().to_vec();
    probes.push(g.sharp(&data.lee_covector, tol));

    let mut touched = Vec::new();
    for (i, f) in splitting.factors.iter().enumerate() {
        let p = f.g_projector(gram, tol)?;
        let hit = probes.iter().any(|v| {
            let image = p.mul_vec(v);
            let scale = max_abs_vec(v) * p.max_abs().max(1.0);
            image.iter().any(|c| !c.negligible(scale, tol))
        });
        if hit {
            touched.push(i);
        }
    }
    let decomposable = !touched.is_empty() && touched.len() < splitting.factors.len();
    let witness = if decomposable {
        let mut g1 = Subspace::zero(g.dim());
        for &i in &touched {
            g1 = g1.sum(&splitting.factors[i], tol);
        }
        let g2 = g1.g_orthogonal_complement(gram, tol);
        let check = check_reducing_pair(g, &g1, &g2, tol);
        if !check.reducing {
            return Err(LcpError::TheoremViolation(format!(
                "witness fails the reducibility criterion: {}",
                check.first_failure.unwrap_or_default()
            )));
        }
        if !probes.iter().all(|v| g1.contains(v, tol)) {
            return Err(LcpError::TheoremViolation("witness does not contain the flat ideal and the Lee vector".into()));
        }
        Some((g1, g2))
    } else {
        None
    };
    let principal_factor_index = match touched.as_slice() {
        [i] => Some(*i),
        _ => None,
    };
    let q = data.q();
    let dim_bound_satisfied = principal_factor_index.map(|i| splitting.factors[i].dim() >= q + 2);
    Ok(DecomposabilityReport {
        decomposable,
        witness,
        splitting,
        touched_factors: touched,
        principal_factor_index,
        q,
        dim_bound_satisfied,
        validation,
    })
}

/// The de Rham factor carrying `𝔲 + ℝθ♯`; it must be unique and non-flat.
pub fn principal_factor<S: Scalar>(
    report: &DecomposabilityReport<S>,
    data: &LcpData<S>,
) -> Result<PrincipalFactorFacts, LcpError> {
    let index = match report.touched_factors.as_slice() {
        [i] => *i,
        other => {
            return Err(LcpError::TheoremViolation(format!(
                "flat ideal and Lee vector project onto {} de Rham factors",
                other.len()
            )))
        }
    };
    if report.splitting.factor_flags[index].flat {
        return Err(LcpError::TheoremViolation("principal factor is flat".into()));
    }
    let dim = report.splitting.factors[index].dim();
    let q = data.q();
    Ok(PrincipalFactorFacts {
        index,
        dim,
        q,
        bound_satisfied: dim >= q + 2,
    })
}

pub fn classify_structure<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    data: &LcpData<S>,
    tol: &TolerancePolicy,
    opts: DecomposeOptions,
) -> Result<Classification<S>, LcpError> {
    let report = lcp_decomposable(g, data, tol, opts)?;
    let principal = if report.validation.overall {
        Some(principal_factor(&report, data)?)
    } else {
        None
    };
    let (verdict, weak_reducibility) = if report.decomposable {
        (Verdict::Decomposable, WeakReducibility::Undetermined)
    } else {
        (Verdict::Indecomposable, WeakReducibility::NotApplicable)
    };
    Ok(Classification {
        verdict,
        report,
        principal,
        weak_reducibility,
    })
}
