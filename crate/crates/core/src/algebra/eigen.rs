use nalgebra::DMatrix;

use super::matrix::Matrix;
use super::scalar::{rationalize, Scalar, ScalarMode};
use super::subspace::{rank_and_nullspace, Subspace};
use super::{LinalgError, TolerancePolicy};

/// One eigenvalue with its eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster<S> {
    pub value: S,
    pub space: Subspace<S>,
}

/// Eigen-decomposition of a symmetric matrix, clustering eigenvalues closer
/// than `eigen_cluster_tol` (relative to the spectral radius, floored at 1).
pub fn symmetric_eigensplit<S: Scalar>(
    m: &Matrix<S>,
    tol: &TolerancePolicy,
) -> Result<Vec<EigenCluster<S>>, LinalgError> {
    g_symmetric_eigensplit(m, &Matrix::identity(m.rows()), tol)
}

/// Eigen-decomposition of `m`, self-adjoint for the inner product `gram`
/// (`G·M = Mᵀ·G`). Eigenspaces come back G-orthogonal, sorted by eigenvalue.
///
/// Exact mode clusters in floating point, snaps each cluster to a nearby
/// rational and confirms it by an exact kernel computation; if any
/// eigenvalue is irrational the call fails with
/// [`LinalgError::IrrationalSpectrum`] so the caller can promote to floats.
pub fn g_symmetric_eigensplit<S: Scalar>(
    m: &Matrix<S>,
    gram: &Matrix<S>,
    tol: &TolerancePolicy,
) -> Result<Vec<EigenCluster<S>>, LinalgError> {
    let n = m.rows();
    if !m.is_square() || gram.rows() != n || !gram.is_square() {
        return Err(LinalgError::Shape("eigensplit needs square operands".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let asym = gram.mul(m).sub(&m.transpose().mul(gram));
    let scale = (gram.max_abs() * m.max_abs() * n as f64).max(f64::MIN_POSITIVE);
    if !asym.is_zero_matrix(scale, tol) {
        return Err(LinalgError::NotSymmetric);
    }
    let clusters = float_clusters(&m.to_f64(), &gram.to_f64(), tol)?;
    match S::MODE {
        ScalarMode::Float => Ok(clusters
            .into_iter()
            .map(|(value, vecs)| EigenCluster {
                value: S::from_f64(value),
                space: Subspace::from_basis_unchecked(
                    n,
                    vecs.into_iter()
                        .map(|v| v.into_iter().map(S::from_f64).collect())
                        .collect(),
                ),
            })
            .collect()),
        ScalarMode::Exact => {
            let mut out = Vec::with_capacity(clusters.len());
            for (value, vecs) in clusters {
                let exact = rationalize(value, 1_000_000)
                    .ok_or(LinalgError::IrrationalSpectrum { value })?;
                let c = S::parse_literal(&exact.to_string()).expect("rational literal");
                let shifted = m.sub(&Matrix::identity(n).scale(&c));
                let (_, space) = rank_and_nullspace(&shifted, tol)?;
                if space.dim() != vecs.len() {
                    return Err(LinalgError::IrrationalSpectrum { value });
                }
                out.push(EigenCluster { value: c, space });
            }
            Ok(out)
        }
    }
}

type FloatClusters = Vec<(f64, Vec<Vec<f64>>)>;

fn float_clusters(
    m: &Matrix<f64>,
    gram: &Matrix<f64>,
    tol: &TolerancePolicy,
) -> Result<FloatClusters, LinalgError> {
    let n = m.rows();
    let g = DMatrix::from_row_slice(n, n, gram.as_slice());
    let p = DMatrix::from_row_slice(n, n, m.as_slice());
    let chol = g.cholesky().ok_or(LinalgError::NotPositiveDefinite)?;
    let l = chol.l();
    let l_inv_t = l
        .clone()
        .try_inverse()
        .ok_or(LinalgError::Singular)?
        .transpose();
    let s = l.transpose() * &p * &l_inv_t;
    let sym = (&s + s.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let radius = eig.eigenvalues.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let cluster_tol = tol.eigen_cluster_tol * radius;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let v = eig.eigenvalues[i];
        match groups.last_mut() {
            Some(g) if (v - eig.eigenvalues[*g.last().unwrap()]).abs() <= cluster_tol => g.push(i),
            _ => {
                if let Some(g) = groups.last() {
                    let gap = (v - eig.eigenvalues[*g.last().unwrap()]).abs();
                    if gap <= 10.0 * cluster_tol {
                        return Err(LinalgError::ClusterAmbiguity { gap, cluster_tol });
                    }
                }
                groups.push(vec![i]);
            }
        }
    }
    Ok(groups
        .into_iter()
        .map(|g| {
            let value = g.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / g.len() as f64;
            let vecs = g
                .iter()
                .map(|&i| {
                    let w = eig.eigenvectors.column(i);
                    let v = &l_inv_t * w;
                    v.iter().cloned().collect()
                })
                .collect();
            (value, vecs)
        })
        .collect())
}
