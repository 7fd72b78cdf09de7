use serde::Serialize;

use crate::algebra::{add_vec, max_abs_vec, Matrix, Scalar, Subspace, TolerancePolicy};

use super::connection::levi_civita;
use super::de_rham::{de_rham_splitting, DeRhamSplitting};
use super::holonomy::commutant_of_operators;
use super::{MetricError, MetricLieAlgebra};

/// Outcome of testing an orthogonal splitting `𝔤 = 𝔤₁ ⊕ 𝔤₂` against the
/// Lie-algebraic reducibility criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// Both parts nonzero, G-orthogonal and spanning.
    pub orthogonal_complement: bool,
    pub s1_subalgebra: bool,
    pub s2_subalgebra: bool,
    /// `⟨[x₁,x₂],x₂⟩ = ⟨[x₁,x₂],x₁⟩ = 0`.
    pub quadratic_condition: bool,
    /// `⟨[x₁,x₂],y₂⟩ + ⟨[x₁,y₂],x₂⟩ = 0` and `⟨[x₁,x₂],y₁⟩ + ⟨[y₁,x₂],x₁⟩ = 0`.
    pub polarized_condition: bool,
    pub routes_agree: bool,
    pub reducing: bool,
    pub first_failure: Option<String>,
}

/// `(𝔤₁, 𝔤₂)` with `𝔤 = 𝔤₁ ⊕ 𝔤₂` orthogonal.
pub type SplitPair<S> = (Subspace<S>, Subspace<S>);

struct Forms<'a, S: Scalar> {
    g: &'a MetricLieAlgebra<S>,
    tol: &'a TolerancePolicy,
}

impl<S: Scalar> Forms<'_, S> {
    /// `⟨[a,b],c⟩`
    fn value(&self, a: &[S], b: &[S], c: &[S]) -> S {
        self.g.inner(&self.g.bracket(a, b), c)
    }

    fn vanishes(&self, v: &S, vecs: &[&[S]]) -> bool {
        let scale = vecs.iter().fold(self.g.form_scale(), |acc, x| acc * max_abs_vec(x).max(f64::MIN_POSITIVE));
        v.negligible(scale.max(f64::MIN_POSITIVE), self.tol)
    }
}

fn with_pair_sums<S: Scalar>(basis: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut out = basis.to_vec();
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            out.push(add_vec(&basis[a], &basis[b]));
        }
    }
    out
}

pub fn check_reducing_pair<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    s1: &Subspace<S>,
    s2: &Subspace<S>,
    tol: &TolerancePolicy,
) -> ConditionReport {
    let n = g.dim();
    let names = |v: &[S]| -> String {
        let parts: Vec<String> = v
            .iter()
            .zip(g.basis_names())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| {
                if *c == S::one() {
                    name.clone()
                } else {
                    format!("{}*{}", c.to_literal(), name)
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    };
    let mut first_failure: Option<String> = None;
    let mut note = |msg: String| {
        if first_failure.is_none() {
            first_failure = Some(msg);
        }
    };

    let orthogonal_complement = !s1.is_zero()
        && !s2.is_zero()
        && s1.dim() + s2.dim() == n
        && s1.is_g_orthogonal_to(s2, g.gram(), tol)
        && s1.sum(s2, tol).is_full();
    if !orthogonal_complement {
        note("the parts are not a non-trivial orthogonal decomposition".into());
    }
    let s1_subalgebra = g.is_subalgebra(s1, tol);
    if !s1_subalgebra {
        note("first part is not a subalgebra".into());
    }
    let s2_subalgebra = g.is_subalgebra(s2, tol);
    if !s2_subalgebra {
        note("second part is not a subalgebra".into());
    }

    let forms = Forms { g, tol };
    let b1 = s1.basis();
    let b2 = s2.basis();

    // quadratic in one slot, linear in the other: basis vectors and pairwise
    // sums in the quadratic slot determine the form
    let mut quadratic_condition = true;
    'outer2: for x1 in b1 {
        for x2 in with_pair_sums(b2) {
            let v = forms.value(x1, &x2, &x2);
            if !forms.vanishes(&v, &[x1, &x2, &x2]) {
                note(format!("<[{}, {}], {}> = {}", names(x1), names(&x2), names(&x2), v.to_literal()));
                quadratic_condition = false;
                break 'outer2;
            }
        }
    }
    if quadratic_condition {
        'outer1: for x2 in b2 {
            for x1 in with_pair_sums(b1) {
                let v = forms.value(&x1, x2, &x1);
                if !forms.vanishes(&v, &[&x1, x2, &x1]) {
                    note(format!("<[{}, {}], {}> = {}", names(&x1), names(x2), names(&x1), v.to_literal()));
                    quadratic_condition = false;
                    break 'outer1;
                }
            }
        }
    }

    let mut polarized_condition = true;
    'pol: for x1 in b1 {
        for x2 in b2 {
            for y2 in b2 {
                let v = forms.value(x1, x2, y2) + forms.value(x1, y2, x2);
                if !forms.vanishes(&v, &[x1, x2, y2]) {
                    polarized_condition = false;
                    break 'pol;
                }
            }
            for y1 in b1 {
                let v = forms.value(x1, x2, y1) + forms.value(y1, x2, x1);
                if !forms.vanishes(&v, &[x1, x2, y1]) {
                    polarized_condition = false;
                    break 'pol;
                }
            }
        }
    }

    let routes_agree = quadratic_condition == polarized_condition;
    ConditionReport {
        orthogonal_complement,
        s1_subalgebra,
        s2_subalgebra,
        quadratic_condition,
        polarized_condition,
        routes_agree,
        reducing: orthogonal_complement && s1_subalgebra && s2_subalgebra && quadratic_condition && polarized_condition,
        first_failure,
    }
}

/// Orthogonal pair of subalgebras certifying reducible holonomy, or `None`
/// when the holonomy is irreducible (or `n = 1`).
pub fn reducibility_witness<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
) -> Result<Option<SplitPair<S>>, MetricError> {
    let split = de_rham_splitting(g, tol)?;
    reducibility_witness_from_splitting(g, &split, tol)
}

/// Same as [`reducibility_witness`], reusing a splitting already computed for `g`.
pub fn reducibility_witness_from_splitting<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    split: &DeRhamSplitting<S>,
    tol: &TolerancePolicy,
) -> Result<Option<SplitPair<S>>, MetricError> {
    let n = g.dim();
    let gram = g.gram();
    let pair = if split.factors.len() >= 2 {
        let first = split
            .factor_flags
            .iter()
            .position(|f| !f.flat)
            .expect("at most one flat factor");
        let first_space = split.factors[first].clone();
        let rest = first_space.g_orthogonal_complement(gram, tol);
        Some((first_space, rest))
    } else if split.flat_factor.is_some() && n >= 2 {
        Some(split_flat(g, tol)?)
    } else {
        None
    };
    if let Some((a, b)) = &pair {
        let report = check_reducing_pair(g, a, b, tol);
        if !report.reducing {
            return Err(MetricError::TheoremViolation(format!(
                "holonomy splitting fails the reducibility criterion: {}",
                report.first_failure.unwrap_or_default()
            )));
        }
    }
    Ok(pair)
}

/// Connection-invariant orthogonal splitting of a flat algebra.
fn split_flat<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
) -> Result<(Subspace<S>, Subspace<S>), MetricError> {
    let n = g.dim();
    let gram = g.gram();
    let nabla = levi_civita(g, tol)?.operators();
    let id = Matrix::identity(n);
    let comm = commutant_of_operators(&nabla, gram, tol)?;
    for p in &comm.basis {
        let split = crate::algebra::g_symmetric_eigensplit(p, gram, tol);
        let clusters = match split {
            Ok(c) => c,
            Err(_) => continue,
        };
        if clusters.len() >= 2 {
            let first = clusters[0].space.clone();
            let rest = first.g_orthogonal_complement(gram, tol);
            return Ok((first, rest));
        }
        debug_assert!(p.approx_eq(&id.scale(&clusters[0].value), 1.0, tol));
    }
    Err(MetricError::TheoremViolation(
        "flat algebra without a connection-invariant splitting".into(),
    ))
}
