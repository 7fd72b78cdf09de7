//! The full pipeline over a parsed document: validation, holonomy, de Rham
//! splitting, reducibility witness, LCP checks, decomposability and the
//! lattice block, collected into one serializable report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{LinalgError, Scalar, ScalarMode, Subspace, TolerancePolicy};
use crate::format::{AnyDocument, Document};
use crate::gallery::ExpectedVerdict;
use crate::lattice::{
    char_poly, discreteness_probe, is_irreducible_over_z, is_unimodular_matrix, unit_root_profile, verify_conjugacy,
    LatticeData, PolynomialZ, ProbeOutcome, UnitRootProfile, DEFAULT_PROBE_TOL,
};
use crate::lcp::{classify_structure, validate_lcp, DecomposeOptions, LcpError, LcpReport, PrincipalFactorFacts, Verdict, WeakReducibility};
use crate::metric::{
    check_reducing_pair, de_rham_splitting_with_seed, is_unimodular, reducibility_witness_from_splitting, validate_algebra,
    ConditionReport, MetricError, ValidationReport, DEFAULT_SEED,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    pub tol: TolerancePolicy,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            tol: TolerancePolicy::default(),
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    /// Rank or eigenvalue decisions sit too close to the tolerance.
    #[error("numerically ambiguous: {message}")]
    Ambiguous { message: String, suggestion: String },
    /// The input is well-formed JSON but cannot be analysed as given.
    #[error("invalid input: {0}")]
    Input(String),
    /// A result contradicts the structure theory; in float mode this points to
    /// a tolerance problem, in exact mode to a bug.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

/// Vectors written with [`Scalar::to_literal`].
pub type VectorList = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeRhamSummary {
    pub factor_dims: Vec<usize>,
    pub flat_index: Option<usize>,
    pub flat_dim: usize,
    pub irreducible: Vec<bool>,
    pub subalgebra_verified: Vec<bool>,
    /// Canonical (reduced echelon) basis of each factor.
    pub factors: Vec<VectorList>,
    pub eigensplit_attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSummary {
    pub g1: VectorList,
    pub g2: VectorList,
    pub check: ConditionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionSummary {
    pub verdict: Verdict,
    pub decomposable: bool,
    pub touched_factors: Vec<usize>,
    pub principal_factor: Option<PrincipalFactorFacts>,
    pub q: usize,
    pub dim_bound_satisfied: Option<bool>,
    pub weak_reducibility: WeakReducibility,
    pub witness: Option<(VectorList, VectorList)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeSummary {
    pub char_poly: PolynomialZ,
    pub unimodular_matrix: bool,
    /// `None` when the degree is beyond the factor search.
    pub irreducible: Option<bool>,
    pub root_profile: Option<UnitRootProfile>,
    pub t0: Option<f64>,
    pub conjugacy_verified: Option<bool>,
    pub probe: Option<ProbeOutcome>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedCheck {
    pub matches: bool,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub dim: usize,
    pub input_mode: ScalarMode,
    pub mode: ScalarMode,
    pub promoted_to_float: bool,
    pub validation: ValidationReport,
    pub unimodular: Option<bool>,
    pub holonomy_dim: Option<usize>,
    pub de_rham: Option<DeRhamSummary>,
    pub reducing_witness: Option<WitnessSummary>,
    pub lcp_report: Option<LcpReport>,
    pub decomposability: Option<DecompositionSummary>,
    pub lattice: Option<LatticeSummary>,
    pub expected: Option<ExpectedCheck>,
    /// Notes carried over from the input file.
    pub annotations: Vec<String>,
    pub notes: Vec<String>,
    pub tool_versions: BTreeMap<String, String>,
    pub tolerance_policy: TolerancePolicy,
    pub random_seed: u64,
}

impl AnalysisReport {
    /// Every domain check passed: a valid algebra, valid LCP data when given,
    /// and agreement with the expected verdict when one is recorded.
    pub fn passed(&self) -> bool {
        self.validation.is_valid()
            && self.lcp_report.as_ref().is_none_or(|r| r.overall)
            && self.expected.as_ref().is_none_or(|e| e.matches)
    }
}

fn literals<S: Scalar>(s: &Subspace<S>) -> VectorList {
    s.basis()
        .iter()
        .map(|v| v.iter().map(S::to_literal).collect())
        .collect()
}

fn is_ambiguity(e: &LinalgError) -> bool {
    matches!(e, LinalgError::ClusterAmbiguity { .. })
}

fn is_irrational(e: &LinalgError) -> bool {
    matches!(e, LinalgError::IrrationalSpectrum { .. })
}

fn linalg_of(e: &LcpError) -> Option<&LinalgError> {
    match e {
        LcpError::Linalg(l) | LcpError::Metric(MetricError::Linalg(l)) => Some(l),
        _ => None,
    }
}

const SUGGESTION: &str = "rerun with a different --tol (or LCPLAB_TOL) or --seed";

fn classify_metric(e: MetricError, mode: ScalarMode) -> AnalysisError {
    classify(LcpError::Metric(e), mode)
}

fn classify(e: LcpError, mode: ScalarMode) -> AnalysisError {
    let suggestion = SUGGESTION.to_string();
    if let Some(l) = linalg_of(&e) {
        if is_ambiguity(l) {
            return AnalysisError::Ambiguous {
                message: l.to_string(),
                suggestion,
            };
        }
    }
    match e {
        LcpError::Metric(MetricError::Ambiguous { .. }) => AnalysisError::Ambiguous {
            message: e.to_string(),
            suggestion,
        },
        LcpError::Metric(MetricError::TheoremViolation(_) | MetricError::HolonomyInconsistency(_))
        | LcpError::TheoremViolation(_)
            if mode == ScalarMode::Float =>
        {
            AnalysisError::Ambiguous {
                message: e.to_string(),
                suggestion,
            }
        }
        LcpError::Metric(MetricError::TheoremViolation(_) | MetricError::HolonomyInconsistency(_))
        | LcpError::TheoremViolation(_) => AnalysisError::Inconsistent(e.to_string()),
        other => AnalysisError::Input(other.to_string()),
    }
}

/// Run the pipeline. Exact input whose splitting needs irrational
/// eigenvalues is rerun in float mode and flagged `promoted_to_float`.
pub fn analyze(doc: &AnyDocument, opts: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    match doc {
        AnyDocument::Float(d) => analyze_document(d, opts, ScalarMode::Float).map_err(Stop::into_error),
        AnyDocument::Exact(d) => match analyze_document(d, opts, ScalarMode::Exact) {
            Err(Stop::Promote) => {
                let float = Document {
                    name: d.name.clone(),
                    description: d.description.clone(),
                    algebra: d.algebra.to_f64(),
                    lcp: d.lcp.as_ref().map(|l| l.to_f64()),
                    lattice: d.lattice.clone(),
                    expected: d.expected.clone(),
                    notes: d.notes.clone(),
                };
                let mut report = analyze_document(&float, opts, ScalarMode::Exact).map_err(Stop::into_error)?;
                report.promoted_to_float = true;
                report
                    .notes
                    .push("exact eigensplitting met an irrational eigenvalue; analysed in float mode".into());
                Ok(report)
            }
            other => other.map_err(Stop::into_error),
        },
    }
}

enum Stop {
    /// Exact arithmetic cannot continue; rerun in float mode.
    Promote,
    Fail(AnalysisError),
}

impl Stop {
    fn into_error(self) -> AnalysisError {
        match self {
            Stop::Fail(e) => e,
            Stop::Promote => AnalysisError::Inconsistent("float mode asked for promotion".into()),
        }
    }
}

fn analyze_document<S: Scalar>(
    d: &Document<S>,
    opts: &AnalysisOptions,
    input_mode: ScalarMode,
) -> Result<AnalysisReport, Stop> {
    let tol = &opts.tol;
    let g = &d.algebra;
    let mut report = AnalysisReport {
        name: d.name.clone(),
        dim: g.dim(),
        input_mode,
        mode: S::MODE,
        promoted_to_float: false,
        validation: validate_algebra(g, tol),
        unimodular: None,
        holonomy_dim: None,
        de_rham: None,
        reducing_witness: None,
        lcp_report: None,
        decomposability: None,
        lattice: d.lattice.as_ref().map(lattice_summary),
        expected: None,
        annotations: d.notes.clone(),
        notes: Vec::new(),
        tool_versions: BTreeMap::from([("lcplab".to_string(), VERSION.to_string())]),
        tolerance_policy: *tol,
        random_seed: opts.seed,
    };
    if !report.validation.is_valid() {
        report.notes.push("algebra is invalid; later stages skipped".into());
        return Ok(report);
    }
    report.unimodular = Some(is_unimodular(g, tol));

    let irrational = |e: &MetricError| matches!(e, MetricError::Linalg(l) if is_irrational(l));
    let split = match de_rham_splitting_with_seed(g, tol, opts.seed) {
        Ok(s) => s,
        Err(e) if irrational(&e) && S::MODE == ScalarMode::Exact => return Err(Stop::Promote),
        Err(e) => return Err(Stop::Fail(classify_metric(e, S::MODE))),
    };
    report.holonomy_dim = Some(split.holonomy.dim());
    report.de_rham = Some(DeRhamSummary {
        factor_dims: split.factor_dims(),
        flat_index: split.flat_factor,
        flat_dim: split.flat_dim(),
        irreducible: split.factor_flags.iter().map(|f| f.irreducible).collect(),
        subalgebra_verified: split.subalgebra_verified.clone(),
        factors: split.factors.iter().map(|f| literals(&f.canonical())).collect(),
        eigensplit_attempts: split.attempts,
    });
    let witness = match reducibility_witness_from_splitting(g, &split, tol) {
        Ok(w) => w,
        Err(e) if irrational(&e) && S::MODE == ScalarMode::Exact => return Err(Stop::Promote),
        Err(e) => return Err(Stop::Fail(classify_metric(e, S::MODE))),
    };
    report.reducing_witness = witness.map(|(a, b)| WitnessSummary {
        check: check_reducing_pair(g, &a, &b, tol),
        g1: literals(&a.canonical()),
        g2: literals(&b.canonical()),
    });

    if let Some(data) = &d.lcp {
        let lcp_report = validate_lcp(g, data, tol).map_err(|e| Stop::Fail(classify(e, S::MODE)))?;
        let valid = lcp_report.overall;
        report.lcp_report = Some(lcp_report);
        if valid {
            let opts = DecomposeOptions {
                seed: opts.seed,
                force: false,
            };
            let c = match classify_structure(g, data, tol, opts) {
                Ok(c) => c,
                Err(e) if linalg_of(&e).is_some_and(is_irrational) && S::MODE == ScalarMode::Exact => {
                    return Err(Stop::Promote)
                }
                Err(e) => return Err(Stop::Fail(classify(e, S::MODE))),
            };
            report.decomposability = Some(DecompositionSummary {
                verdict: c.verdict,
                decomposable: c.report.decomposable,
                touched_factors: c.report.touched_factors.clone(),
                principal_factor: c.principal,
                q: c.report.q,
                dim_bound_satisfied: c.report.dim_bound_satisfied,
                weak_reducibility: c.weak_reducibility,
                witness: c
                    .report
                    .witness
                    .as_ref()
                    .map(|(a, b)| (literals(&a.canonical()), literals(&b.canonical()))),
            });
        } else {
            report.notes.push("LCP data failed validation; decomposability skipped".into());
        }
    }

    if let Some(expected) = &d.expected {
        report.expected = Some(compare_expected(expected, &report));
    }
    Ok(report)
}

fn compare_expected(ex: &ExpectedVerdict, r: &AnalysisReport) -> ExpectedCheck {
    let mut mismatches = Vec::new();
    let mut cmp = |what: &str, want: String, got: String| {
        if want != got {
            mismatches.push(format!("{what}: expected {want}, got {got}"));
        }
    };
    let dec = r.decomposability.as_ref();
    cmp(
        "decomposable",
        ex.decomposable.to_string(),
        dec.map_or("n/a".into(), |d| d.decomposable.to_string()),
    );
    if let Some(h) = ex.holonomy_dim {
        cmp("holonomy_dim", h.to_string(), format!("{:?}", r.holonomy_dim.unwrap_or(0)));
    }
    let dr = r.de_rham.as_ref();
    if let Some(dims) = &ex.factor_dims {
        cmp(
            "factor_dims",
            format!("{dims:?}"),
            format!("{:?}", dr.map(|s| s.factor_dims.clone()).unwrap_or_default()),
        );
    }
    if let Some(f) = ex.flat_dim {
        cmp("flat_dim", f.to_string(), dr.map_or("n/a".into(), |s| s.flat_dim.to_string()));
    }
    if let Some(p) = ex.principal_dim {
        cmp(
            "principal_dim",
            p.to_string(),
            dec.and_then(|d| d.principal_factor).map_or("n/a".into(), |f| f.dim.to_string()),
        );
    }
    cmp("q", ex.q.to_string(), dec.map_or("n/a".into(), |d| d.q.to_string()));
    ExpectedCheck {
        matches: mismatches.is_empty(),
        mismatches,
    }
}

fn lattice_summary(l: &LatticeData) -> LatticeSummary {
    let a = &l.integer_matrix;
    let p = char_poly(a);
    let mut notes = Vec::new();
    let irreducible = match is_irreducible_over_z(&p) {
        Ok(b) => Some(b),
        Err(e) => {
            notes.push(format!("irreducibility: {e}"));
            None
        }
    };
    let root_profile = match unit_root_profile(&p, 1e-9) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("root profile: {e}"));
            None
        }
    };
    let conjugacy_verified = match (&l.conjugator, l.t0) {
        (Some(c), Some(t0)) => match crate::lattice::solve_conjugacy(a) {
            Ok(sol) => match verify_conjugacy(a, &sol.a0, t0, c, 1e-8) {
                Ok(ok) => Some(ok),
                Err(e) => {
                    notes.push(format!("conjugacy: {e}"));
                    Some(false)
                }
            },
            Err(e) => {
                notes.push(format!("conjugacy: {e}"));
                Some(false)
            }
        },
        _ => None,
    };
    let probe = (!l.translation_parts.is_empty())
        .then(|| discreteness_probe(&l.translation_parts, DEFAULT_PROBE_TOL, 10_000));
    LatticeSummary {
        char_poly: p,
        unimodular_matrix: is_unimodular_matrix(a),
        irreducible,
        root_profile,
        t0: l.t0,
        conjugacy_verified,
        probe,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::gallery;

    #[test]
    fn gallery_entries_reproduce_their_expectations() {
        for entry in gallery() {
            let name = entry.name().to_string();
            let doc: AnyDocument = entry.into();
            let r = analyze(&doc, &AnalysisOptions::default()).unwrap();
            let check = r.expected.clone().unwrap();
            assert!(check.matches, "{name}: {:?}", check.mismatches);
            assert!(r.passed(), "{name}");
            assert!(!r.promoted_to_float, "{name}");
        }
    }

    #[test]
    fn invalid_algebra_stops_after_validation() {
        let mut g = crate::metric::MetricLieAlgebra::<crate::Rational>::abelian(3);
        let one = crate::Rational::from_i64(1);
        let zero = crate::Rational::from_i64(0);
        g.set_bracket(0, 1, &[zero.clone(), zero.clone(), one.clone()]);
        g.set_bracket(1, 2, &[zero.clone(), one, zero]);
        let doc = AnyDocument::Exact(Document {
            name: None,
            description: None,
            algebra: g,
            lcp: None,
            lattice: None,
            expected: None,
            notes: Vec::new(),
        });
        let r = analyze(&doc, &AnalysisOptions::default()).unwrap();
        assert!(!r.passed());
        assert!(r.holonomy_dim.is_none());
    }
}
