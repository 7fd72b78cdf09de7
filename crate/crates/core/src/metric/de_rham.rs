use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{g_symmetric_eigensplit, rank_of, LinalgError, Matrix, Scalar, Subspace, TolerancePolicy};

use super::connection::levi_civita;
use super::holonomy::{commutant_of_operators, holonomy_from_connection, restrict_operator, OperatorAlgebra};
use super::{MetricError, MetricLieAlgebra};

pub const DEFAULT_SEED: u64 = 0x5eed_1c9a;
const MAX_ATTEMPTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorFlags {
    pub flat: bool,
    pub irreducible: bool,
}

/// Orthogonal decomposition into the maximal flat factor and irreducible
/// holonomy-invariant factors.
#[derive(Clone, Debug)]
pub struct DeRhamSplitting<S: Scalar> {
    pub factors: Vec<Subspace<S>>,
    pub flat_factor: Option<usize>,
    pub factor_flags: Vec<FactorFlags>,
    pub subalgebra_verified: Vec<bool>,
    pub holonomy: OperatorAlgebra<S>,
    /// Seed of the generator used to pick commutant elements.
    pub seed: u64,
    /// Number of random commutant elements tried.
    pub attempts: usize,
}

impl<S: Scalar> DeRhamSplitting<S> {
    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(Subspace::dim).collect()
    }

    pub fn non_flat_count(&self) -> usize {
        self.factor_flags.iter().filter(|f| !f.flat).count()
    }

    pub fn flat_dim(&self) -> usize {
        self.flat_factor.map_or(0, |i| self.factors[i].dim())
    }

    /// Index of the factor containing `v`, if any.
    pub fn factor_containing(&self, v: &[S], tol: &TolerancePolicy) -> Option<usize> {
        self.factors.iter().position(|f| f.contains(v, tol))
    }
}

pub fn de_rham_splitting<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
) -> Result<DeRhamSplitting<S>, MetricError> {
    de_rham_splitting_with_seed(g, tol, DEFAULT_SEED)
}

pub fn de_rham_splitting_with_seed<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    tol: &TolerancePolicy,
    seed: u64,
) -> Result<DeRhamSplitting<S>, MetricError> {
    let n = g.dim();
    let gram = g.gram();
    let conn = levi_civita(g, tol)?;
    let nabla = conn.operators();
    let hol = holonomy_from_connection(&conn, g, tol, n * (n - 1) / 2);

    let flat = hol.common_kernel(tol);
    let rest = flat.g_orthogonal_complement(gram, tol);
    let mut non_flat = Vec::new();
    let mut attempts = 0;
    if !rest.is_zero() {
        let b_w = Matrix::from_columns(n, rest.basis());
        let gram_w = b_w.transpose().mul(gram).mul(&b_w);
        let comm = commutant_of_operators(&hol.basis, gram, tol)?;
        let restricted = comm
            .basis
            .iter()
            .map(|p| restrict_operator(p, &b_w, gram, tol))
            .collect::<Result<Vec<_>, _>>()?;
        // a commutant element living on the flat factor restricts to roundoff
        let scale = comm.basis.iter().fold(0.0f64, |acc, p| acc.max(p.max_abs())) * n as f64;
        let restricted: Vec<_> = restricted.into_iter().filter(|m| !m.is_zero_matrix(scale, tol)).collect();
        let independent = independent_subset(&restricted, tol);
        let expected = independent.len();
        if expected == 1 {
            non_flat.push(rest.clone());
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                if attempts == MAX_ATTEMPTS {
                    return Err(MetricError::Ambiguous { expected, attempts });
                }
                attempts += 1;
                let mut combo = Matrix::zeros(rest.dim(), rest.dim());
                for m in &independent {
                    let c: i64 = rng.gen_range(-5..=5);
                    if c != 0 {
                        combo = combo.add(&m.scale(&S::from_i64(c)));
                    }
                }
                let clusters = match g_symmetric_eigensplit(&combo, &gram_w, tol) {
                    Ok(c) => c,
                    Err(LinalgError::ClusterAmbiguity { .. }) => continue,
                    Err(e) => return Err(e.into()),
                };
                if clusters.len() != expected {
                    continue;
                }
                non_flat = clusters
                    .into_iter()
                    .map(|c| {
                        let vecs = c.space.basis().iter().map(|w| b_w.mul_vec(w)).collect::<Vec<_>>();
                        Subspace::from_spanning(n, vecs, tol)
                    })
                    .collect();
                break;
            }
        }
    }

    for (i, f) in non_flat.iter().enumerate() {
        if hol.basis.iter().any(|a| !f.is_invariant_under(a, tol)) {
            return Err(MetricError::TheoremViolation(format!(
                "factor {i} (dim {}) is not holonomy-invariant",
                f.dim()
            )));
        }
        if let Some(k) = nabla.iter().position(|d| !f.is_invariant_under(d, tol)) {
            return Err(MetricError::HolonomyInconsistency(format!(
                "factor of dim {} is moved by the connection in direction {}",
                f.dim(),
                g.basis_names()[k]
            )));
        }
    }

    let mut factors: Vec<(bool, Subspace<S>)> = Vec::new();
    if !flat.is_zero() {
        factors.push((true, flat));
    }
    factors.extend(non_flat.into_iter().map(|f| (false, f)));
    let supports: Vec<Vec<usize>> = factors.iter().map(|(_, f)| f.support(gram, tol)).collect();
    let mut order: Vec<usize> = (0..factors.len()).collect();
    order.sort_by(|&a, &b| {
        factors[b]
            .0
            .cmp(&factors[a].0)
            .then(factors[b].1.dim().cmp(&factors[a].1.dim()))
            .then(supports[a].cmp(&supports[b]))
    });
    let mut sorted = Vec::with_capacity(factors.len());
    let mut flags = Vec::with_capacity(factors.len());
    for i in order {
        let (is_flat, f) = factors[i].clone();
        let irreducible = if is_flat {
            f.dim() == 1
        } else {
            restricted_commutant_dim(&hol, &f, gram, tol)? == 1
        };
        flags.push(FactorFlags {
            flat: is_flat,
            irreducible,
        });
        sorted.push(f);
    }
    if let Some(i) = flags.iter().position(|f| !f.flat && !f.irreducible) {
        return Err(MetricError::TheoremViolation(format!(
            "non-flat factor {i} still has a nontrivial symmetric commutant"
        )));
    }

    let mut out = DeRhamSplitting {
        flat_factor: flags.iter().position(|f| f.flat),
        factors: sorted,
        factor_flags: flags,
        subalgebra_verified: Vec::new(),
        holonomy: hol,
        seed,
        attempts,
    };
    out.subalgebra_verified = verify_factor_subalgebras(g, &out, tol);
    if let Some(i) = out.subalgebra_verified.iter().position(|ok| !ok) {
        return Err(MetricError::TheoremViolation(format!(
            "de Rham factor {i} is not a Lie subalgebra"
        )));
    }
    Ok(out)
}

/// `[D_i, D_i] ⊆ D_i` for every factor.
pub fn verify_factor_subalgebras<S: Scalar>(
    g: &MetricLieAlgebra<S>,
    s: &DeRhamSplitting<S>,
    tol: &TolerancePolicy,
) -> Vec<bool> {
    s.factors.iter().map(|f| g.is_subalgebra(f, tol)).collect()
}

fn independent_subset<S: Scalar>(ms: &[Matrix<S>], tol: &TolerancePolicy) -> Vec<Matrix<S>> {
    let Some(first) = ms.first() else {
        return Vec::new();
    };
    let mut b = crate::algebra::SpanBuilder::new(first.rows() * first.cols(), *tol);
    ms.iter()
        .filter(|m| b.insert(m.as_slice().to_vec()))
        .cloned()
        .collect()
}

fn restricted_commutant_dim<S: Scalar>(
    hol: &OperatorAlgebra<S>,
    f: &Subspace<S>,
    gram: &Matrix<S>,
    tol: &TolerancePolicy,
) -> Result<usize, MetricError> {
    let n = gram.rows();
    let b = Matrix::from_columns(n, f.basis());
    let ops = hol
        .basis
        .iter()
        .map(|a| restrict_operator(a, &b, gram, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let gram_f = b.transpose().mul(gram).mul(&b);
    let comm = commutant_of_operators(&ops, &gram_f, tol)?;
    let flat: Vec<Vec<S>> = comm.basis.iter().map(|m| m.as_slice().to_vec()).collect();
    Ok(rank_of(f.dim() * f.dim(), &flat, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    /// `[T,X] = X`, `[T,Y] = −Y` on the orthonormal basis X, Y, T.
    fn sol3() -> MetricLieAlgebra<Rational> {
        let names = ["X", "Y", "T"].map(String::from).to_vec();
        let mut g = MetricLieAlgebra::with_names(names, Matrix::identity(3));
        g.set_bracket(2, 0, &[q(1), q(0), q(0)]);
        g.set_bracket(2, 1, &[q(0), q(-1), q(0)]);
        g
    }

    fn sol3_plus_line() -> MetricLieAlgebra<Rational> {
        let names = ["X", "Y", "T", "S"].map(String::from).to_vec();
        let mut g = MetricLieAlgebra::with_names(names, Matrix::identity(4));
        g.set_bracket(2, 0, &[q(1), q(0), q(0), q(0)]);
        g.set_bracket(2, 1, &[q(0), q(-1), q(0), q(0)]);
        g
    }

    #[test]
    fn abelian_is_one_flat_factor() {
        let tol = TolerancePolicy::default();
        let s = de_rham_splitting(&MetricLieAlgebra::<Rational>::abelian(3), &tol).unwrap();
        assert_eq!(s.factor_dims(), vec![3]);
        assert_eq!(s.flat_factor, Some(0));
        assert_eq!(s.subalgebra_verified, vec![true]);
    }

    #[test]
    fn sol3_is_irreducible() {
        let tol = TolerancePolicy::default();
        let s = de_rham_splitting(&sol3(), &tol).unwrap();
        assert_eq!(s.factor_dims(), vec![3]);
        assert_eq!(s.flat_factor, None);
        assert!(s.factor_flags[0].irreducible);
        assert_eq!(s.holonomy.dim(), 3);
    }

    #[test]
    fn product_with_a_line_splits_off_the_line() {
        let tol = TolerancePolicy::default();
        let s = de_rham_splitting(&sol3_plus_line(), &tol).unwrap();
        assert_eq!(s.factor_dims(), vec![1, 3]);
        assert_eq!(s.flat_factor, Some(0));
        assert!(s.factors[0].same_span(&Subspace::coordinate(4, &[3]), &tol));
        assert_eq!(s.subalgebra_verified, vec![true, true]);
    }

    #[test]
    fn two_curved_factors_are_separated() {
        let tol = TolerancePolicy::default();
        // sol3 ⊕ sol3
        let names = (0..6).map(|i| format!("e{i}")).collect();
        let mut g = MetricLieAlgebra::with_names(names, Matrix::identity(6));
        for off in [0, 3] {
            let mut v = vec![q(0); 6];
            v[off] = q(1);
            g.set_bracket(off + 2, off, &v);
            let mut w = vec![q(0); 6];
            w[off + 1] = q(-1);
            g.set_bracket(off + 2, off + 1, &w);
        }
        let s = de_rham_splitting(&g, &tol).unwrap();
        assert_eq!(s.factor_dims(), vec![3, 3]);
        assert!(s.factors[0].same_span(&Subspace::coordinate(6, &[0, 1, 2]), &tol));
        assert!(s.attempts >= 1);
        let f = de_rham_splitting(&g.to_f64(), &tol).unwrap();
        assert_eq!(f.factor_dims(), vec![3, 3]);
    }

    #[test]
    fn one_dimensional_algebra_is_flat() {
        let tol = TolerancePolicy::default();
        let s = de_rham_splitting(&MetricLieAlgebra::<f64>::abelian(1), &tol).unwrap();
        assert_eq!(s.factor_dims(), vec![1]);
        assert!(s.factor_flags[0].flat && s.factor_flags[0].irreducible);
    }
}
