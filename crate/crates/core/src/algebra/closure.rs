use super::matrix::Matrix;
use super::scalar::Scalar;
use super::subspace::{SpanBuilder, Subspace};
use super::TolerancePolicy;

/// Smallest span of `rows x cols` matrices containing `seed` and invariant
/// under `step`, returned as a subspace of the flattened (row-major) space.
///
/// `step` must be linear; it is applied once to every basis element that
/// enters the span, so the loop stops after at most `rows * cols` insertions.
pub fn span_closure<S, F>(
    rows: usize,
    cols: usize,
    seed: &[Matrix<S>],
    step: F,
    tol: &TolerancePolicy,
) -> Subspace<S>
where
    S: Scalar,
    F: FnMut(&Matrix<S>) -> Vec<Matrix<S>>,
{
    span_closure_bounded(rows, cols, seed, step, tol, rows * cols).into_subspace()
}

/// As [`span_closure`], but stops as soon as the span reaches `max_dim`
/// (useful when an a priori upper bound on the closure is known).
pub fn span_closure_bounded<S, F>(
    rows: usize,
    cols: usize,
    seed: &[Matrix<S>],
    mut step: F,
    tol: &TolerancePolicy,
    max_dim: usize,
) -> SpanBuilder<S>
where
    S: Scalar,
    F: FnMut(&Matrix<S>) -> Vec<Matrix<S>>,
{
    let mut span = SpanBuilder::new(rows * cols, *tol);
    let mut queue = Vec::new();
    for m in seed {
        if span.rank() >= max_dim {
            break;
        }
        if span.insert(m.as_slice().to_vec()) {
            queue.push(m.clone());
        }
    }
    let mut next = 0;
    while next < queue.len() && span.rank() < max_dim {
        let current = queue[next].clone();
        next += 1;
        for image in step(&current) {
            if span.insert(image.as_slice().to_vec()) {
                queue.push(image);
                if span.rank() >= max_dim {
                    break;
                }
            }
        }
    }
    span
}

/// Reshape flattened basis vectors back into matrices.
pub fn as_matrices<S: Scalar>(rows: usize, cols: usize, flat: &[Vec<S>]) -> Vec<Matrix<S>> {
    flat.iter()
        .map(|v| Matrix::from_vec(rows, cols, v.clone()).expect("flattened matrix"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    #[test]
    fn no_generators_keeps_seed() {
        let tol = TolerancePolicy::default();
        let id = Matrix::<Rational>::identity(2);
        let span = span_closure(2, 2, &[id.clone()], |_| Vec::new(), &tol);
        assert_eq!(span.dim(), 1);
        assert!(span.contains(id.as_slice(), &tol));
    }

    #[test]
    fn bracket_with_e21_generates_sl2() {
        let tol = TolerancePolicy::default();
        let e12 = Matrix::<Rational>::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let e21 = e12.transpose();
        let h = Matrix::<Rational>::from_i64_rows(&[&[1, 0], &[0, -1]]);
        let span = span_closure(2, 2, &[e12.clone()], |s| vec![e21.commutator(s)], &tol);
        assert_eq!(span.dim(), 3);
        for m in [&e12, &e21, &h] {
            assert!(span.contains(m.as_slice(), &tol));
        }
        assert!(!span.contains(Matrix::<Rational>::identity(2).as_slice(), &tol));
    }

    #[test]
    fn zero_seed_gives_zero_span() {
        let tol = TolerancePolicy::default();
        let span = span_closure(2, 2, &[Matrix::<f64>::zeros(2, 2)], |s| vec![s.clone()], &tol);
        assert!(span.is_zero());
    }
}
