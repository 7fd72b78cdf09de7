use crate::algebra::{Matrix, Scalar, TolerancePolicy};
use crate::metric::MetricLieAlgebra;

use super::GalleryError;

/// `𝔲 ⋊_rep 𝔥` with `𝔲 = ℝ^{u_dim}` abelian. The basis is `u1..`, then the
/// basis of `𝔥`; `[x, u] = rep(x)·u` for `x ∈ 𝔥`.
pub fn semidirect<S: Scalar>(
    rep: &[Matrix<S>],
    h: &MetricLieAlgebra<S>,
    u_dim: usize,
    gram_total: Matrix<S>,
) -> Result<MetricLieAlgebra<S>, GalleryError> {
    let hd = h.dim();
    let n = u_dim + hd;
    if rep.len() != hd {
        return Err(GalleryError::Shape(format!("{} representation matrices for a {hd}-dimensional algebra", rep.len())));
    }
    if rep.iter().any(|m| m.rows() != u_dim || m.cols() != u_dim) {
        return Err(GalleryError::Shape(format!("representation matrices must be {u_dim}x{u_dim}")));
    }
    if gram_total.rows() != n || gram_total.cols() != n {
        return Err(GalleryError::Shape(format!("Gram matrix must be {n}x{n}")));
    }
    let tol = TolerancePolicy::default();
    for a in 0..hd {
        for b in a + 1..hd {
            let mut lhs = Matrix::zeros(u_dim, u_dim);
            for (k, c) in h.bracket_basis(a, b).iter().enumerate() {
                if !c.is_zero() {
                    lhs = lhs.add(&rep[k].scale(c));
                }
            }
            let rhs = rep[a].commutator(&rep[b]);
            let scale = (rep[a].max_abs() * rep[b].max_abs()).max(lhs.max_abs()).max(1.0);
            if !lhs.approx_eq(&rhs, scale, &tol) {
                return Err(GalleryError::NotHomomorphism {
                    a: h.basis_names()[a].clone(),
                    b: h.basis_names()[b].clone(),
                });
            }
        }
    }
    let mut names: Vec<String> = (1..=u_dim).map(|i| format!("u{i}")).collect();
    names.extend(h.basis_names().iter().cloned());
    let mut g = MetricLieAlgebra::with_names(names, gram_total);
    for a in 0..hd {
        for b in a + 1..hd {
            let mut v = vec![S::zero(); n];
            for (k, c) in h.bracket_basis(a, b).iter().enumerate() {
                v[u_dim + k] = c.clone();
            }
            g.set_bracket(u_dim + a, u_dim + b, &v);
        }
        for i in 0..u_dim {
            let mut v = vec![S::zero(); n];
            for (k, slot) in v.iter_mut().enumerate().take(u_dim) {
                *slot = rep[a][(k, i)].clone();
            }
            g.set_bracket(u_dim + a, i, &v);
        }
    }
    Ok(g)
}

/// Orthogonal direct sum: `a`'s basis first, then `b`'s.
pub fn direct_sum<S: Scalar>(a: &MetricLieAlgebra<S>, b: &MetricLieAlgebra<S>) -> MetricLieAlgebra<S> {
    let (m, k) = (a.dim(), b.dim());
    let n = m + k;
    let mut names = a.basis_names().to_vec();
    names.extend(b.basis_names().iter().cloned());
    let mut g = MetricLieAlgebra::with_names(names, a.gram().block_diag(b.gram()));
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![S::zero(); n];
            if j < m {
                v[..m].clone_from_slice(a.bracket_basis(i, j));
            } else if i >= m {
                v[m..].clone_from_slice(b.bracket_basis(i - m, j - m));
            } else {
                continue;
            }
            g.set_bracket(i, j, &v);
        }
    }
    g
}

/// `ℝ^{n-1} ⋊_A ℝ` with orthonormal basis `names`, the last one acting by `A`.
pub fn almost_abelian<S: Scalar>(a: &Matrix<S>, names: Vec<String>) -> Result<MetricLieAlgebra<S>, GalleryError> {
    let k = a.rows();
    if names.len() != k + 1 {
        return Err(GalleryError::Shape("need one name per basis vector".into()));
    }
    let t = MetricLieAlgebra::with_names(vec![names[k].clone()], Matrix::identity(1));
    let g = semidirect(std::slice::from_ref(a), &t, k, Matrix::identity(k + 1))?;
    Ok(g.with_basis_names(names))
}
