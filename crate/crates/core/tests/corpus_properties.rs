//! Structural properties over a seeded corpus of random metric Lie algebras.

use lcplab_core::algebra::{inner, rank_of, LinalgError, Matrix};
use lcplab_core::gallery::random_corpus;
use lcplab_core::lcp::weyl_connection;
use lcplab_core::metric::{
    check_reducing_pair, de_rham_splitting, holonomy_algebra, levi_civita, reducibility_witness, symmetric_commutant,
    MetricError, MetricLieAlgebra,
};
use lcplab_core::{Rational, Scalar, Subspace, TolerancePolicy};

const SEED: u64 = 20_240_917;

fn corpus() -> Vec<MetricLieAlgebra<Rational>> {
    random_corpus(SEED, 200, 5)
}

fn irrational(e: &MetricError) -> bool {
    matches!(e, MetricError::Linalg(LinalgError::IrrationalSpectrum { .. }))
}

/// `[V, V] ⊆ V`, checked by rank: adding the brackets must not grow the span.
fn closed_under_bracket<S: Scalar>(g: &MetricLieAlgebra<S>, v: &Subspace<S>, tol: &TolerancePolicy) -> bool {
    let mut vectors = v.basis().to_vec();
    for a in v.basis() {
        for b in v.basis() {
            vectors.push(g.bracket(a, b));
        }
    }
    rank_of(g.dim(), &vectors, tol) == v.dim()
}

#[test]
fn witness_exists_iff_commutant_has_dimension_two() {
    let tol = TolerancePolicy::default();
    let mut float_fallbacks = 0;
    for (idx, g) in corpus().iter().enumerate() {
        let hol = holonomy_algebra(g, &tol).unwrap();
        let comm = symmetric_commutant(&hol, g, &tol).unwrap().dim();
        let (has_witness, report_ok) = match reducibility_witness(g, &tol) {
            Ok(w) => (w.is_some(), w.map_or(true, |(a, b)| check_reducing_pair(g, &a, &b, &tol).reducing)),
            Err(e) if irrational(&e) => {
                float_fallbacks += 1;
                let gf = g.to_f64();
                let w = reducibility_witness(&gf, &tol).unwrap();
                (w.is_some(), w.map_or(true, |(a, b)| check_reducing_pair(&gf, &a, &b, &tol).reducing))
            }
            Err(e) => panic!("algebra {idx}: {e}"),
        };
        assert_eq!(has_witness, comm >= 2, "algebra {idx}: commutant dim {comm}");
        assert!(report_ok, "algebra {idx}: witness is not a reducing pair");
    }
    assert!(float_fallbacks < 20, "{float_fallbacks} algebras needed float mode");
}

#[test]
fn de_rham_factors_are_subalgebras() {
    let tol = TolerancePolicy::default();
    for (idx, g) in corpus().iter().enumerate() {
        let factors: Vec<bool> = match de_rham_splitting(g, &tol) {
            Ok(s) => s.factors.iter().map(|f| closed_under_bracket(g, f, &tol)).collect(),
            Err(e) if irrational(&e) => {
                let gf = g.to_f64();
                let s = de_rham_splitting(&gf, &tol).unwrap();
                s.factors.iter().map(|f| closed_under_bracket(&gf, f, &tol)).collect()
            }
            Err(e) => panic!("algebra {idx}: {e}"),
        };
        assert!(factors.iter().all(|&ok| ok), "algebra {idx}: {factors:?}");
    }
}

#[test]
fn levi_civita_is_torsion_free_and_metric_exactly() {
    let tol = TolerancePolicy::default();
    for (idx, g) in corpus().iter().enumerate() {
        let n = g.dim();
        let conn = levi_civita(g, &tol).unwrap();
        let e = |i: usize| {
            let mut v = vec![Rational::from_i64(0); n];
            v[i] = Rational::from_i64(1);
            v
        };
        for i in 0..n {
            for j in 0..n {
                let t = conn.covariant(&e(i), &e(j));
                let s = conn.covariant(&e(j), &e(i));
                let torsion: Vec<Rational> = (0..n)
                    .map(|k| t[k].clone() - s[k].clone() - g.c(i, j, k).clone())
                    .collect();
                assert!(torsion.iter().all(Scalar::is_zero), "algebra {idx}: torsion at ({i},{j})");
                for k in 0..n {
                    let lhs = inner(g.gram(), &conn.covariant(&e(i), &e(j)), &e(k))
                        + inner(g.gram(), &e(j), &conn.covariant(&e(i), &e(k)));
                    assert!(lhs.is_zero(), "algebra {idx}: metric defect at ({i},{j},{k})");
                }
            }
        }
    }
}

#[test]
fn weyl_connection_scales_the_metric_by_the_lee_form() {
    use rand::{Rng, SeedableRng};
    let tol = TolerancePolicy::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED);
    for (idx, g) in corpus().iter().enumerate() {
        let n = g.dim();
        let theta: Vec<Rational> = (0..n).map(|_| Rational::from_i64(rng.gen_range(-3..=3))).collect();
        let d = weyl_connection(g, &theta, &tol).unwrap();
        let e = |i: usize| Matrix::<Rational>::identity(n).column(i);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = inner(g.gram(), &d.covariant(&e(x), &e(y)), &e(z))
                        + inner(g.gram(), &d.covariant(&e(x), &e(z)), &e(y));
                    let rhs = Rational::from_i64(2) * theta[x].clone() * g.gram()[(y, z)].clone();
                    assert_eq!(lhs, rhs, "algebra {idx} at ({x},{y},{z})");
                }
            }
        }
    }
}
