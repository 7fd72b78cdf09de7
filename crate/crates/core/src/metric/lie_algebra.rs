use serde::Serialize;

use crate::algebra::{axpy, inner, max_abs_vec, Matrix, Scalar, ScalarMode, Subspace, TolerancePolicy};

/// Lie algebra with structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`
/// and a positive definite Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricLieAlgebra<S: Scalar> {
    dim: usize,
    brackets: Vec<S>,
    gram: Matrix<S>,
    basis_names: Vec<String>,
}

impl<S: Scalar> MetricLieAlgebra<S> {
    /// Abelian algebra `e1..en` with an orthonormal basis.
    pub fn abelian(dim: usize) -> Self {
        let names = (1..=dim).map(|i| format!("e{i}")).collect();
        Self::with_names(names, Matrix::identity(dim))
    }

    /// Abelian algebra with the given Gram matrix; add brackets afterwards.
    pub fn with_names(basis_names: Vec<String>, gram: Matrix<S>) -> Self {
        let dim = basis_names.len();
        assert_eq!((gram.rows(), gram.cols()), (dim, dim), "Gram matrix must be dim x dim");
        MetricLieAlgebra {
            dim,
            brackets: vec![S::zero(); dim * dim * dim],
            gram,
            basis_names,
        }
    }

    /// Build from a raw structure-constant array; no invariants are checked
    /// (see [`validate_algebra`]).
    pub fn from_parts(
        basis_names: Vec<String>,
        brackets: Vec<S>,
        gram: Matrix<S>,
    ) -> Result<Self, String> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err("dimension must be positive".into());
        }
        if brackets.len() != dim * dim * dim {
            return Err(format!("expected {} structure constants, got {}", dim * dim * dim, brackets.len()));
        }
        if gram.rows() != dim || gram.cols() != dim {
            return Err(format!("metric must be {dim}x{dim}"));
        }
        Ok(MetricLieAlgebra {
            dim,
            brackets,
            gram,
            basis_names,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }
    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }
    pub fn structure_constants(&self) -> &[S] {
        &self.brackets
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.brackets[self.idx(i, j, k)]
    }

    /// Set a single constant without touching its antisymmetric partner.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, v: S) {
        let idx = self.idx(i, j, k);
        self.brackets[idx] = v;
    }

    /// Set `[e_i, e_j] = value` and `[e_j, e_i] = −value`.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: &[S]) {
        assert_eq!(value.len(), self.dim);
        for (k, v) in value.iter().enumerate() {
            self.set_raw(i, j, k, v.clone());
            self.set_raw(j, i, k, -v.clone());
        }
    }

    /// Coefficients of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[S] {
        let start = self.idx(i, j, 0);
        &self.brackets[start..start + self.dim]
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let coef = xi.clone() * yj.clone();
                axpy(&coef, self.bracket_basis(i, j), &mut out);
            }
        }
        out
    }

    /// Matrix of `ad_{e_i}`: column `j` holds `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m[(k, j)] = self.c(i, j, k).clone();
            }
        }
        m
    }

    pub fn ad_of(&self, x: &[S]) -> Matrix<S> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.ad(i).scale(xi));
            }
        }
        m
    }

    pub fn inner(&self, x: &[S], y: &[S]) -> S {
        inner(&self.gram, x, y)
    }

    /// Metric dual `θ♯` of a covector: `⟨θ♯, x⟩ = θ(x)`.
    pub fn sharp(&self, covector: &[S], tol: &TolerancePolicy) -> Vec<S> {
        let rhs = Matrix::from_columns(self.dim, &[covector.to_vec()]);
        self.gram
            .solve(&rhs, tol)
            .expect("positive definite Gram")
            .column(0)
    }

    /// Covector `x♭ = ⟨x, ·⟩`.
    pub fn flat(&self, x: &[S]) -> Vec<S> {
        self.gram.vec_mul(x)
    }

    pub fn with_gram(&self, gram: Matrix<S>) -> Self {
        assert_eq!((gram.rows(), gram.cols()), (self.dim, self.dim));
        MetricLieAlgebra {
            gram,
            ..self.clone()
        }
    }

    pub fn with_basis_names(&self, basis_names: Vec<String>) -> Self {
        assert_eq!(basis_names.len(), self.dim);
        MetricLieAlgebra {
            basis_names,
            ..self.clone()
        }
    }

    pub fn scaled_metric(&self, factor: &S) -> Self {
        self.with_gram(self.gram.scale(factor))
    }

    pub fn bracket_scale(&self) -> f64 {
        max_abs_vec(&self.brackets)
    }

    /// Scale used for float zero tests of expressions `⟨[x, y], z⟩`.
    pub(crate) fn form_scale(&self) -> f64 {
        (self.bracket_scale().max(1.0) * self.gram.max_abs() * self.dim as f64).max(f64::MIN_POSITIVE)
    }

    /// `[V, V] ⊆ V`.
    pub fn is_subalgebra(&self, v: &Subspace<S>, tol: &TolerancePolicy) -> bool {
        let b = v.basis();
        (0..b.len()).all(|a| (a + 1..b.len()).all(|c| v.contains(&self.bracket(&b[a], &b[c]), tol)))
    }

    /// `[𝔤, V] ⊆ V`.
    pub fn is_ideal(&self, v: &Subspace<S>, tol: &TolerancePolicy) -> bool {
        (0..self.dim).all(|i| v.is_invariant_under(&self.ad(i), tol))
    }

    pub fn to_f64(&self) -> MetricLieAlgebra<f64> {
        MetricLieAlgebra {
            dim: self.dim,
            brackets: self.brackets.iter().map(S::to_f64).collect(),
            gram: self.gram.to_f64(),
            basis_names: self.basis_names.clone(),
        }
    }
}

/// One violated structural constraint (0-based indices).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `c[i][j][k] + c[j][i][k] ≠ 0` (or `c[i][i][k] ≠ 0`).
    Antisymmetry { i: usize, j: usize, k: usize },
    /// The `component` coordinate of the cyclic Jacobi sum on `(i, j, k)`.
    Jacobi { i: usize, j: usize, k: usize, component: usize },
    MetricAsymmetric { i: usize, j: usize },
    /// Leading principal minor of this order (exact) or an eigenvalue (float)
    /// is not positive.
    MetricNotPositive { order: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check antisymmetry, the Jacobi identity and positivity of the metric.
pub fn validate_algebra<S: Scalar>(g: &MetricLieAlgebra<S>, tol: &TolerancePolicy) -> ValidationReport {
    let n = g.dim();
    let mut violations = Vec::new();
    let cscale = g.bracket_scale().max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                let defect = if i == j {
                    g.c(i, i, k).clone()
                } else {
                    g.c(i, j, k).clone() + g.c(j, i, k).clone()
                };
                if !defect.negligible(cscale, tol) {
                    violations.push(Violation::Antisymmetry { i, j, k });
                }
            }
        }
    }
    let jscale = (cscale * cscale * n as f64).max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let ei = crate::algebra::unit_vector::<S>(n, i);
                let ej = crate::algebra::unit_vector::<S>(n, j);
                let ek = crate::algebra::unit_vector::<S>(n, k);
                let t1 = g.bracket(&g.bracket(&ei, &ej), &ek);
                let t2 = g.bracket(&g.bracket(&ej, &ek), &ei);
                let t3 = g.bracket(&g.bracket(&ek, &ei), &ej);
                for l in 0..n {
                    let s = t1[l].clone() + t2[l].clone() + t3[l].clone();
                    if !s.negligible(jscale, tol) {
                        violations.push(Violation::Jacobi { i, j, k, component: l });
                    }
                }
            }
        }
    }
    violations.extend(metric_violations(g.gram(), tol));
    ValidationReport { violations }
}

fn metric_violations<S: Scalar>(gram: &Matrix<S>, tol: &TolerancePolicy) -> Vec<Violation> {
    let n = gram.rows();
    let scale = gram.max_abs().max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let d = gram[(i, j)].clone() - gram[(j, i)].clone();
            if !d.negligible(scale, tol) {
                out.push(Violation::MetricAsymmetric { i, j });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    match S::MODE {
        ScalarMode::Exact => {
            // pivots of symmetric elimination without pivoting are ratios of
            // consecutive leading minors
            let mut a = gram.clone();
            for k in 0..n {
                let p = a[(k, k)].clone();
                if p.is_zero() || p.to_f64() < 0.0 {
                    out.push(Violation::MetricNotPositive { order: k + 1 });
                    break;
                }
                for r in k + 1..n {
                    if a[(r, k)].is_zero() {
                        continue;
                    }
                    let f = a[(r, k)].clone() / p.clone();
                    for c in k..n {
                        let v = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                        a[(r, c)] = v;
                    }
                }
            }
        }
        ScalarMode::Float => {
            let m = nalgebra::DMatrix::from_row_slice(n, n, gram.to_f64().as_slice());
            let eig = m.symmetric_eigenvalues();
            let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            if min <= tol.rank_tol {
                out.push(Violation::MetricNotPositive { order: n });
            }
        }
    }
    out
}

/// `tr ad_{e_i} = 0` for every basis vector.
pub fn is_unimodular<S: Scalar>(g: &MetricLieAlgebra<S>, tol: &TolerancePolicy) -> bool {
    let scale = (g.bracket_scale() * g.dim() as f64).max(f64::MIN_POSITIVE);
    (0..g.dim()).all(|i| g.ad(i).trace().negligible(scale, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn sol() -> MetricLieAlgebra<Rational> {
        // X, Y, T with [T, X] = X, [T, Y] = −Y
        let mut g = MetricLieAlgebra::abelian(3);
        g.set_bracket(2, 0, &[q(1), q(0), q(0)]);
        g.set_bracket(2, 1, &[q(0), q(-1), q(0)]);
        g
    }

    #[test]
    fn abelian_is_valid_and_unimodular() {
        let tol = TolerancePolicy::default();
        let g = MetricLieAlgebra::<Rational>::abelian(3);
        assert!(validate_algebra(&g, &tol).is_valid());
        assert!(is_unimodular(&g, &tol));
    }

    #[test]
    fn missing_antisymmetric_partner_is_reported() {
        let tol = TolerancePolicy::default();
        let mut g = MetricLieAlgebra::<Rational>::abelian(3);
        g.set_raw(0, 1, 2, q(1));
        let report = validate_algebra(&g, &tol);
        assert_eq!(report.violations, vec![Violation::Antisymmetry { i: 1, j: 0, k: 2 }]);
    }

    #[test]
    fn jacobi_failure_is_reported() {
        let tol = TolerancePolicy::default();
        // [e1,e2]=e3, [e1,e3]=e2, [e2,e3]=0 is ad_{e1} acting on span{e2,e3}:
        // the cyclic sum is [e3,e3] + [0,e1] + [-e2,e2] = 0
        let mut g = MetricLieAlgebra::<Rational>::abelian(3);
        g.set_bracket(0, 1, &[q(0), q(0), q(1)]);
        g.set_bracket(0, 2, &[q(0), q(1), q(0)]);
        assert!(validate_algebra(&g, &tol).is_valid());

        // [e1,e2]=e3, [e2,e3]=e2: cyclic sum is [e3,e3] + [e2,e1] + 0 = -e3
        let mut h = MetricLieAlgebra::<Rational>::abelian(3);
        h.set_bracket(0, 1, &[q(0), q(0), q(1)]);
        h.set_bracket(1, 2, &[q(0), q(1), q(0)]);
        let report = validate_algebra(&h, &tol);
        assert_eq!(
            report.violations,
            vec![Violation::Jacobi { i: 0, j: 1, k: 2, component: 2 }]
        );
    }

    #[test]
    fn indefinite_metric_is_reported() {
        let tol = TolerancePolicy::default();
        let g = MetricLieAlgebra::<Rational>::with_names(
            vec!["a".into(), "b".into()],
            Matrix::from_i64_rows(&[&[1, 2], &[2, 1]]),
        );
        assert_eq!(
            validate_algebra(&g, &tol).violations,
            vec![Violation::MetricNotPositive { order: 2 }]
        );
        let gf = g.to_f64();
        assert!(!validate_algebra(&gf, &tol).is_valid());
    }

    #[test]
    fn unimodularity_by_trace() {
        let tol = TolerancePolicy::default();
        assert!(is_unimodular(&sol(), &tol));
        let mut aff = MetricLieAlgebra::<Rational>::abelian(2);
        aff.set_bracket(0, 1, &[q(0), q(1)]);
        assert!(!is_unimodular(&aff, &tol));
    }

    #[test]
    fn subalgebras_and_ideals() {
        let tol = TolerancePolicy::default();
        let g = sol();
        let xy = Subspace::coordinate(3, &[0, 1]);
        let xt = Subspace::coordinate(3, &[0, 2]);
        assert!(g.is_ideal(&xy, &tol));
        assert!(g.is_subalgebra(&xt, &tol));
        assert!(!g.is_ideal(&xt, &tol));
    }
}
