use crate::algebra::{Scalar, TolerancePolicy};
use crate::metric::{levi_civita, ConnectionKind, InvariantConnection, MetricLieAlgebra};

use super::LcpError;

/// `D_x y = ∇_x y + θ(x) y + θ(y) x − ⟨x, y⟩ θ♯`.
pub fn weyl_connection<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    theta: &[S],
    tol: &TolerancePolicy,
) -> Result<InvariantConnection<S>, LcpError> {
    let n = g.dim();
    if theta.len() != n {
        return Err(LcpError::Shape(format!("Lee covector has {} entries, expected {n}", theta.len())));
    }
    let lc = levi_civita(g, tol)?;
    let sharp = g.sharp(theta, tol);
    let gram = g.gram();
    let mut coeffs = lc.coeffs().to_vec();
    for i in 0..n {
        for j in 0..n {
            let base = (i * n + j) * n;
            coeffs[base + j] = coeffs[base + j].clone() + theta[i].clone();
            coeffs[base + i] = coeffs[base + i].clone() + theta[j].clone();
            let gij = &gram[(i, j)];
            if !gij.is_zero() {
                for (k, s) in sharp.iter().enumerate() {
                    coeffs[base + k] = coeffs[base + k].clone() - gij.clone() * s.clone();
                }
            }
        }
    }
    Ok(InvariantConnection::from_coeffs(n, coeffs, ConnectionKind::Weyl))
}

/// A left-invariant 1-form is closed iff it kills `[𝔤, 𝔤]`.
pub fn is_closed<S: Scalar>(g: &MetricLieAlgebra<S>, theta: &[S], tol: &TolerancePolicy) -> bool {
    let n = g.dim();
    let scale = (crate::algebra::max_abs_vec(theta) * g.bracket_scale() * n as f64).max(f64::MIN_POSITIVE);
    (0..n).all(|i| {
        (i + 1..n).all(|j| crate::algebra::dot(theta, g.bracket_basis(i, j)).negligible(scale, tol))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{unit_vector, Matrix, Rational};
    use crate::metric::curvature;

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
    fn zero_lee_form_gives_levi_civita() {
        let tol = TolerancePolicy::default();
        let g = sol3();
        let d = weyl_connection(&g, &vec![q(0); 3], &tol).unwrap();
        assert_eq!(d.coeffs(), levi_civita(&g, &tol).unwrap().coeffs());
        assert_eq!(d.kind(), ConnectionKind::Weyl);
    }

    #[test]
    fn abelian_plane() {
        let tol = TolerancePolicy::default();
        let g = MetricLieAlgebra::<Rational>::abelian(2);
        let d = weyl_connection(&g, &[q(1), q(0)], &tol).unwrap();
        let e1 = unit_vector::<Rational>(2, 0);
        let e2 = unit_vector::<Rational>(2, 1);
        assert_eq!(d.covariant(&e1, &e1), e1);
        assert_eq!(d.covariant(&e2, &e2), vec![q(-1), q(0)]);
        assert_eq!(d.covariant(&e1, &e2), e2);
        assert_eq!(d.covariant(&e2, &e1), e2);
    }

    #[test]
    fn sol3_weyl_curvature_kills_x() {
        let tol = TolerancePolicy::default();
        let g = sol3();
        let d = weyl_connection(&g, &[q(0), q(0), q(1)], &tol).unwrap();
        let r = curvature(&d, &g);
        let x = unit_vector::<Rational>(3, 0);
        for i in 0..3 {
            for j in 0..3 {
                assert!(r.get(i, j).mul_vec(&x).iter().all(|c| *c == q(0)));
            }
        }
        assert!(!r.is_flat(&tol));
        assert!(d.is_torsion_free(&g, &tol));
    }

    #[test]
    fn closedness() {
        let tol = TolerancePolicy::default();
        let g = sol3();
        assert!(is_closed(&g, &[q(0), q(0), q(1)], &tol));
        assert!(!is_closed(&g, &[q(1), q(0), q(0)], &tol));
        assert!(is_closed(&MetricLieAlgebra::<Rational>::abelian(3), &[q(3), q(1), q(2)], &tol));
    }
}
