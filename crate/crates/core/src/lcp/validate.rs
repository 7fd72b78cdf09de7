use serde::Serialize;

use crate::algebra::{max_abs_vec, Matrix, Scalar, Subspace, TolerancePolicy};
use crate::metric::{curvature, is_unimodular, MetricLieAlgebra};

use super::weyl::{is_closed, weyl_connection};
use super::{LcpData, LcpError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
}

impl CheckOutcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcpChecks {
    pub proper: bool,
    pub adapted: bool,
    pub closed: bool,
    pub nonzero: bool,
    pub u_is_ideal: bool,
    pub u_weyl_parallel: bool,
    pub u_weyl_flat: bool,
    pub weyl_nonflat: bool,
    pub unimodular: bool,
    pub lee_formula_consistent: CheckOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcpReport {
    pub checks: LcpChecks,
    pub overall: bool,
    pub notes: Vec<String>,
}

impl LcpReport {
    /// Names of the failed checks, in declaration order.
    pub fn failed(&self) -> Vec<&'static str> {
        let c = &self.checks;
        let flags = [
            ("proper", c.proper),
            ("adapted", c.adapted),
            ("closed", c.closed),
            ("nonzero", c.nonzero),
            ("u_is_ideal", c.u_is_ideal),
            ("u_weyl_parallel", c.u_weyl_parallel),
            ("u_weyl_flat", c.u_weyl_flat),
            ("weyl_nonflat", c.weyl_nonflat),
            ("unimodular", c.unimodular),
            ("lee_formula_consistent", c.lee_formula_consistent != CheckOutcome::Fail),
        ];
        flags.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect()
    }
}

pub fn validate_lcp<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    data: &LcpData<S>,
    tol: &TolerancePolicy,
) -> Result<LcpReport, LcpError> {
    let n = g.dim();
    let u = &data.flat_ideal;
    let theta = &data.lee_covector;
    if u.ambient_dim() != n || theta.len() != n {
        return Err(LcpError::Shape(format!("LCP data does not live on a {n}-dimensional algebra")));
    }
    let mut notes = Vec::new();
    let theta_scale = max_abs_vec(theta).max(f64::MIN_POSITIVE);

    let proper = !u.is_zero() && u.dim() < n;
    let adapted = u
        .basis()
        .iter()
        .all(|v| crate::algebra::dot(theta, v).negligible(theta_scale * max_abs_vec(v), tol));
    let closed = is_closed(g, theta, tol);
    let nonzero = theta.iter().any(|c| !c.negligible(1.0, tol));
    let u_is_ideal = g.is_ideal(u, tol);

    let d = weyl_connection(g, theta, tol)?;
    let ops = d.operators();
    let u_weyl_parallel = ops.iter().all(|op| u.is_invariant_under(op, tol));
    let r = curvature(&d, g);
    let rscale = r.scale();
    let u_weyl_flat = r
        .independent_pairs()
        .all(|(_, m)| u.basis().iter().all(|v| Matrix::from_columns(n, &[m.mul_vec(v)]).is_zero_matrix(rscale * max_abs_vec(v), tol)));
    let weyl_nonflat = !r.is_flat(tol);
    let unimodular = is_unimodular(g, tol);

    let lee_formula_consistent = match &data.complement {
        None => CheckOutcome::Skipped,
        Some(h) => match lee_form_from_splitting(g, u, h, tol) {
            Ok(formula) => {
                let scale = theta_scale.max(max_abs_vec(&formula)).max(1.0);
                let same = formula
                    .iter()
                    .zip(theta)
                    .all(|(a, b)| (a.clone() - b.clone()).negligible(scale, tol));
                if !same {
                    notes.push(format!(
                        "trace formula gives Lee covector [{}]",
                        formula.iter().map(S::to_literal).collect::<Vec<_>>().join(", ")
                    ));
                }
                CheckOutcome::from_bool(same)
            }
            Err(e) => {
                notes.push(format!("trace formula not applicable: {e}"));
                CheckOutcome::Fail
            }
        },
    };

    let checks = LcpChecks {
        proper,
        adapted,
        closed,
        nonzero,
        u_is_ideal,
        u_weyl_parallel,
        u_weyl_flat,
        weyl_nonflat,
        unimodular,
        lee_formula_consistent,
    };
    let mut report = LcpReport {
        checks,
        overall: false,
        notes,
    };
    report.overall = report.failed().is_empty();
    Ok(report)
}

/// Lee covector predicted by the trace formula for `𝔤 = 𝔲 ⊕ 𝔥`:
/// `θ(x) = −tr(π_𝔥 ∘ ad_x|_𝔥) / dim 𝔲` on `𝔥`, zero on `𝔲`, where `π_𝔥`
/// is the projection along `𝔲`.
pub fn lee_form_from_splitting<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    u: &Subspace<S>,
    h: &Subspace<S>,
    tol: &TolerancePolicy,
) -> Result<Vec<S>, LcpError> {
    let n = g.dim();
    if u.ambient_dim() != n || h.ambient_dim() != n {
        return Err(LcpError::Shape("subspaces live in a different dimension".into()));
    }
    if u.is_zero() || u.dim() + h.dim() != n || !u.sum(h, tol).is_full() {
        return Err(LcpError::NotComplementary);
    }
    if !g.is_subalgebra(h, tol) {
        return Err(LcpError::NotSubalgebra);
    }
    if !is_unimodular(g, tol) {
        return Err(LcpError::NotUnimodular);
    }
    let q = u.dim();
    let mut cols: Vec<Vec<S>> = u.basis().to_vec();
    cols.extend(h.basis().iter().cloned());
    let m = Matrix::from_columns(n, &cols);
    let images: Vec<Vec<S>> = h
        .basis()
        .iter()
        .flat_map(|x| h.basis().iter().map(move |y| (x, y)))
        .map(|(x, y)| g.bracket(x, y))
        .collect();
    let coords = m.solve(&Matrix::from_columns(n, &images), tol)?;
    let hd = h.dim();
    let inv_q = S::from_ratio(-1, q as i64);
    let mut values = vec![S::zero(); n];
    for a in 0..hd {
        let mut tr = S::zero();
        for b in 0..hd {
            tr = tr + coords[(q + b, a * hd + b)].clone();
        }
        values[q + a] = inv_q.clone() * tr;
    }
    // θ(m_c) = values[c]  ⟺  Mᵀθ = values
    let theta = m
        .transpose()
        .solve(&Matrix::from_columns(n, &[values]), tol)?
        .column(0);
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn sol3() -> MetricLieAlgebra<Rational> {
        let names = ["X", "Y", "T"].map(String::from).to_vec();
        let mut g = MetricLieAlgebra::with_names(names, Matrix::identity(3));
        g.set_bracket(2, 0, &[q(1), q(0), q(0)]);
        g.set_bracket(2, 1, &[q(0), q(-1), q(0)]);
        g
    }

    #[test]
    fn sol3_standard_data_passes() {
        let tol = TolerancePolicy::default();
        let data = LcpData::new(Subspace::coordinate(3, &[0]), vec![q(0), q(0), q(1)])
            .with_complement(Subspace::coordinate(3, &[1, 2]));
        let r = validate_lcp(&sol3(), &data, &tol).unwrap();
        assert!(r.overall, "{:?}", r.failed());
        assert_eq!(r.checks.lee_formula_consistent, CheckOutcome::Pass);
    }

    #[test]
    fn wrong_flat_axis_is_not_weyl_flat() {
        let tol = TolerancePolicy::default();
        let data = LcpData::new(Subspace::coordinate(3, &[1]), vec![q(0), q(0), q(1)]);
        let r = validate_lcp(&sol3(), &data, &tol).unwrap();
        assert!(!r.checks.u_weyl_flat);
        assert!(!r.overall);
        assert_eq!(r.checks.lee_formula_consistent, CheckOutcome::Skipped);
    }

    #[test]
    fn abelian_data_is_rejected() {
        let tol = TolerancePolicy::default();
        let g = MetricLieAlgebra::<Rational>::abelian(3);
        let data = LcpData::new(Subspace::coordinate(3, &[0]), vec![q(0), q(1), q(0)]);
        let r = validate_lcp(&g, &data, &tol).unwrap();
        assert!(!r.overall);
        // e1 is not D-parallel: D_{e1} e1 = −e2
        assert!(!r.checks.u_weyl_parallel);
        assert!(r.checks.proper && r.checks.adapted && r.checks.closed && r.checks.unimodular);
    }

    #[test]
    fn trace_formula() {
        let tol = TolerancePolicy::default();
        let theta = lee_form_from_splitting(&sol3(), &Subspace::coordinate(3, &[0]), &Subspace::coordinate(3, &[1, 2]), &tol)
            .unwrap();
        assert_eq!(theta, vec![q(0), q(0), q(1)]);
        let ab = MetricLieAlgebra::<Rational>::abelian(3);
        let theta = lee_form_from_splitting(&ab, &Subspace::coordinate(3, &[0]), &Subspace::coordinate(3, &[1, 2]), &tol)
            .unwrap();
        assert_eq!(theta, vec![q(0); 3]);
    }

    #[test]
    fn trace_formula_refusals() {
        let tol = TolerancePolicy::default();
        let g = sol3();
        let u = Subspace::coordinate(3, &[2]);
        let h = Subspace::coordinate(3, &[0, 1]);
        assert!(lee_form_from_splitting(&g, &u, &Subspace::coordinate(3, &[0]), &tol).is_err());
        // [e0, e1] = e1 is not unimodular
        let mut aff = MetricLieAlgebra::<Rational>::abelian(3);
        aff.set_bracket(0, 1, &[q(0), q(1), q(0)]);
        assert_eq!(lee_form_from_splitting(&aff, &u, &h, &tol), Err(LcpError::NotUnimodular));
        // [X+Y, T] = Y − X
        let bad_h = Subspace::from_basis_unchecked(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let u2 = Subspace::coordinate(3, &[0]);
        assert_eq!(lee_form_from_splitting(&g, &u2, &bad_h, &tol), Err(LcpError::NotSubalgebra));
    }
}
