use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Matrix, Rational, Scalar, TolerancePolicy};
use crate::metric::{validate_algebra, MetricLieAlgebra};

use super::{almost_abelian, direct_sum, semidirect};

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn small<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    q(rng.gen_range(-bound..=bound))
}

fn nonzero<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let v = rng.gen_range(1..=bound);
    q(if rng.gen_bool(0.5) { v } else { -v })
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Positive definite Gram matrix with small rational entries: the identity,
/// a positive diagonal, or `L·Lᵀ + I` for a random integer `L`.
pub fn random_gram<R: Rng>(rng: &mut R, n: usize) -> Matrix<Rational> {
    match rng.gen_range(0..3) {
        0 => Matrix::identity(n),
        1 => Matrix::diagonal(&(0..n).map(|_| q(rng.gen_range(1..=4))).collect::<Vec<_>>()),
        _ => {
            let mut l = Matrix::zeros(n, n);
            for r in 0..n {
                for c in 0..=r {
                    l[(r, c)] = small(rng, 1);
                }
            }
            l.mul(&l.transpose()).add(&Matrix::identity(n))
        }
    }
}

/// `[e_i, e_j]` lands in the last `m` basis vectors, which are central.
fn two_step_nilpotent<R: Rng>(rng: &mut R, n: usize) -> MetricLieAlgebra<Rational> {
    let m = rng.gen_range(1..=n - 2);
    let mut g = MetricLieAlgebra::with_names(names(n), Matrix::identity(n));
    for i in 0..n - m {
        for j in i + 1..n - m {
            let mut v = vec![q(0); n];
            for slot in v.iter_mut().skip(n - m) {
                *slot = small(rng, 2);
            }
            g.set_bracket(i, j, &v);
        }
    }
    g
}

/// `[e_1, e_i] = a_i e_{i+1}` for `2 ≤ i < n`.
fn filiform<R: Rng>(rng: &mut R, n: usize) -> MetricLieAlgebra<Rational> {
    let mut g = MetricLieAlgebra::with_names(names(n), Matrix::identity(n));
    for i in 1..n - 1 {
        let mut v = vec![q(0); n];
        v[i + 1] = nonzero(rng, 2);
        g.set_bracket(0, i, &v);
    }
    g
}

fn random_almost_abelian<R: Rng>(rng: &mut R, n: usize) -> MetricLieAlgebra<Rational> {
    let k = n - 1;
    let mut a = Matrix::zeros(k, k);
    match rng.gen_range(0..3) {
        // diagonal
        0 => {
            for i in 0..k {
                a[(i, i)] = small(rng, 2);
            }
        }
        // skew part only: a flat metric when the Gram is the identity
        1 => {
            for i in 0..k {
                for j in i + 1..k {
                    let v = small(rng, 2);
                    a[(i, j)] = v.clone();
                    a[(j, i)] = -v;
                }
            }
        }
        _ => {
            for i in 0..k {
                for j in 0..k {
                    a[(i, j)] = small(rng, 2);
                }
            }
        }
    }
    almost_abelian(&a, names(n)).expect("square matrix")
}

/// `ℝ^k ⋊ ℝ^m` with `m ≤ 2` acting by `A` and a polynomial in `A`.
fn commuting_semidirect<R: Rng>(rng: &mut R, n: usize) -> MetricLieAlgebra<Rational> {
    let m = if n >= 3 && rng.gen_bool(0.5) { 2 } else { 1 };
    let k = n - m;
    let mut a = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            a[(i, j)] = small(rng, 1);
        }
    }
    let mut rep = vec![a.clone()];
    if m == 2 {
        let b = a.mul(&a).add(&Matrix::identity(k).scale(&small(rng, 1)));
        rep.push(b);
    }
    let h = MetricLieAlgebra::with_names((1..=m).map(|i| format!("h{i}")).collect(), Matrix::identity(m));
    semidirect(&rep, &h, k, Matrix::identity(n))
        .expect("commuting operators give a homomorphism")
        .with_basis_names(names(n))
}

fn family<R: Rng>(rng: &mut R, n: usize) -> MetricLieAlgebra<Rational> {
    let choices: &[u8] = match n {
        1 => &[0],
        2 => &[0, 1, 1, 5],
        _ => &[0, 1, 1, 2, 3, 4, 4, 5],
    };
    match *choices.choose(rng).expect("nonempty") {
        0 => MetricLieAlgebra::abelian(n),
        1 => random_almost_abelian(rng, n),
        2 => two_step_nilpotent(rng, n),
        3 => filiform(rng, n),
        4 => commuting_semidirect(rng, n),
        _ => {
            let a = rng.gen_range(1..n);
            let g = direct_sum(&family(rng, a), &family(rng, n - a));
            g.with_basis_names(names(n))
        }
    }
}

/// A random nilpotent or solvable metric Lie algebra of dimension
/// `1..=max_dim`; Jacobi holds by construction.
pub fn random_metric_lie_algebra<R: Rng>(rng: &mut R, max_dim: usize) -> MetricLieAlgebra<Rational> {
    // dimension 1 is always abelian, so draw it rarely
    let max_dim = max_dim.max(1);
    let n = if max_dim == 1 || rng.gen_bool(0.05) { 1 } else { rng.gen_range(2..=max_dim) };
    let g = family(rng, n);
    g.with_gram(random_gram(rng, n))
}

/// `count` algebras drawn from a seeded generator.
pub fn random_corpus(seed: u64, count: usize, max_dim: usize) -> Vec<MetricLieAlgebra<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = TolerancePolicy::default();
    (0..count)
        .map(|_| {
            let g = random_metric_lie_algebra(&mut rng, max_dim);
            debug_assert!(validate_algebra(&g, &tol).is_valid());
            g
        })
        .collect()
}
