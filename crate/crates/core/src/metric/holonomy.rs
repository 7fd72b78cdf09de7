use serde::Serialize;

use crate::algebra::{rank_and_nullspace, Matrix, Scalar, SpanBuilder, Subspace, TolerancePolicy};

use super::connection::{curvature, levi_civita, InvariantConnection};
use super::{MetricError, MetricLieAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorAlgebraKind {
    CurvatureSpan,
    Holonomy,
    Commutant,
}

/// Linearly independent family of `n x n` matrices.
#[derive(Clone, Debug)]
pub struct OperatorAlgebra<S: Scalar> {
    pub ambient_dim: usize,
    pub basis: Vec<Matrix<S>>,
    pub kind: OperatorAlgebraKind,
}

impl<S: Scalar> OperatorAlgebra<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, m: &Matrix<S>, tol: &TolerancePolicy) -> bool {
        let mut b = SpanBuilder::new(self.ambient_dim * self.ambient_dim, *tol);
        for a in &self.basis {
            b.insert(a.as_slice().to_vec());
        }
        b.contains(m.as_slice())
    }

    /// `∩ ker A` over the basis.
    pub fn common_kernel(&self, tol: &TolerancePolicy) -> Subspace<S> {
        let n = self.ambient_dim;
        if self.basis.is_empty() {
            return Subspace::full(n);
        }
        let mut rows = Vec::with_capacity(self.basis.len() * n);
        for a in &self.basis {
            rows.extend(a.to_rows());
        }
        let stacked = Matrix::from_rows(&rows).expect("rectangular");
        rank_and_nullspace(&stacked, tol).expect("nonempty").1
    }
}

/// Holonomy algebra of the Levi-Civita connection.
pub fn holonomy_algebra<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
) -> Result<OperatorAlgebra<S>, MetricError> {
    let conn = levi_civita(g, tol)?;
    Ok(holonomy_from_connection(&conn, g, tol, g.dim() * (g.dim() - 1) / 2))
}

/// Smallest span containing every `R(e_i, e_j)`, closed under `A ↦ [∇_k, A]`
/// and under commutators. Stops early once the span reaches `max_dim`.
pub fn holonomy_from_connection<S: Scalar>(
    conn: &InvariantConnection<S>,
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
    max_dim: usize,
) -> OperatorAlgebra<S> {
    let n = g.dim();
    let nabla = conn.operators();
    let curv = curvature(conn, g);
    let mut span = SpanBuilder::new(n * n, *tol);
    let mut basis: Vec<Matrix<S>> = Vec::new();
    let mut queue = Vec::new();
    for (_, r) in curv.independent_pairs() {
        if span.rank() >= max_dim {
            break;
        }
        if span.insert(r.as_slice().to_vec()) {
            queue.push(r.clone());
        }
    }
    let mut next = 0;
    while next < queue.len() && span.rank() < max_dim {
        let a = queue[next].clone();
        next += 1;
        let mut images: Vec<Matrix<S>> = nabla.iter().map(|d| d.commutator(&a)).collect();
        images.extend(basis.iter().map(|b| b.commutator(&a)));
        basis.push(a);
        for m in images {
            if span.insert(m.as_slice().to_vec()) {
                queue.push(m);
                if span.rank() >= max_dim {
                    break;
                }
            }
        }
    }
    let basis = crate::algebra::as_matrices(n, n, span.into_subspace().basis());
    OperatorAlgebra {
        ambient_dim: n,
        basis,
        kind: OperatorAlgebraKind::Holonomy,
    }
}

/// G-symmetric operators commuting with the holonomy algebra.
pub fn symmetric_commutant<S: Scalar>(
    hol: &OperatorAlgebra<S>,
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
) -> Result<OperatorAlgebra<S>, MetricError> {
    commutant_of_operators(&hol.basis, g.gram(), tol)
}

/// Basis of `{P : GP = PᵀG, PA = AP for every A in ops}`.
///
/// Candidates are parametrized as `P = G⁻¹S` with `S` symmetric, and the
/// space is cut down one operator at a time.
pub fn commutant_of_operators<S: Scalar>(
    ops: &[Matrix<S>],
    gram: &Matrix<S>,
    tol: &TolerancePolicy,
) -> Result<OperatorAlgebra<S>, MetricError> {
    let n = gram.rows();
    let g_inv = gram.inverse(tol)?;
    let mut current: Vec<Matrix<S>> = Vec::with_capacity(n * (n + 1) / 2);
    for a in 0..n {
        for b in a..n {
            let mut s = Matrix::zeros(n, n);
            s[(a, b)] = S::one();
            s[(b, a)] = S::one();
            current.push(g_inv.mul(&s));
        }
    }
    for op in ops {
        if current.len() <= 1 {
            break;
        }
        let images: Vec<Matrix<S>> = current.iter().map(|p| p.commutator(op)).collect();
        let scale = op.max_abs() * current.iter().map(Matrix::max_abs).fold(0.0, f64::max) * n as f64;
        // an all-roundoff constraint would otherwise pass the relative SVD cut
        if images.iter().all(|m| m.is_zero_matrix(scale, tol)) {
            continue;
        }
        let cols: Vec<Vec<S>> = images.iter().map(|m| m.as_slice().to_vec()).collect();
        let constraint = Matrix::from_columns(n * n, &cols);
        let (_, null) = rank_and_nullspace(&constraint, tol)?;
        current = null
            .basis()
            .iter()
            .map(|coeffs| {
                let mut p = Matrix::zeros(n, n);
                for (c, m) in coeffs.iter().zip(&current) {
                    if !c.is_zero() {
                        p = p.add(&m.scale(c));
                    }
                }
                p
            })
            .collect();
    }
    Ok(OperatorAlgebra {
        ambient_dim: n,
        basis: current,
        kind: OperatorAlgebraKind::Commutant,
    })
}

/// Matrix of `op` restricted to the invariant subspace spanned by the
/// columns of `basis`, in those coordinates: `(BᵀGB)⁻¹ BᵀG·op·B`.
pub fn restrict_operator<S: Scalar>(
    op: &Matrix<S>,
    basis: &Matrix<S>,
    gram: &Matrix<S>,
    tol: &TolerancePolicy,
) -> Result<Matrix<S>, MetricError> {
    let btg = basis.transpose().mul(gram);
    let small = btg.mul(basis);
    Ok(small.solve(&btg.mul(&op.mul(basis)), tol)?)
}
