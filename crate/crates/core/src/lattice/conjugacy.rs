use nalgebra::DMatrix;

use crate::algebra::Matrix;

use super::integer::IntegerMatrix;
use super::LatticeError;

/// `C⁻¹·A·C = exp(t₀·A₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Conjugacy {
    pub a0: Matrix<f64>,
    pub t0: f64,
    pub c: Matrix<f64>,
}

impl Conjugacy {
    /// Columns of `C⁻¹`: the images of the standard integer lattice.
    pub fn translation_parts(&self) -> Result<Vec<Vec<f64>>, LatticeError> {
        let inv = invert(&self.c)?;
        Ok((0..inv.ncols()).map(|j| inv.column(j).iter().cloned().collect()).collect())
    }
}

fn to_dm(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn from_dm(m: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_vec(m.nrows(), m.ncols(), m.transpose().as_slice().to_vec()).expect("shape")
}

fn invert(c: &Matrix<f64>) -> Result<DMatrix<f64>, LatticeError> {
    let dm = to_dm(c);
    let sv = dm.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if max == 0.0 || min <= 1e-12 * max {
        return Err(LatticeError::Singular);
    }
    dm.try_inverse().ok_or(LatticeError::Singular)
}

/// Matrix exponential by scaling and squaring with a Taylor series, summed
/// until terms fall below `1e-16` relative to the partial sum.
pub fn expm(m: &Matrix<f64>) -> Matrix<f64> {
    let a = to_dm(m);
    let n = a.nrows();
    let norm = a.iter().map(|x| x.abs()).sum::<f64>().max(0.0);
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let scaled = &a / 2f64.powi(s as i32);
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..40 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if term.amax() <= 1e-16 * sum.amax() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    from_dm(&sum)
}

/// `‖C⁻¹·A·C − exp(t₀·A₀)‖_max < tol`.
pub fn verify_conjugacy(
    a: &IntegerMatrix,
    a0: &Matrix<f64>,
    t0: f64,
    c: &Matrix<f64>,
    tol: f64,
) -> Result<bool, LatticeError> {
    let n = a.size();
    if a0.rows() != n || a0.cols() != n || c.rows() != n || c.cols() != n {
        return Err(LatticeError::Shape("A, A0 and C must have the same size".into()));
    }
    let c_inv = invert(c)?;
    let lhs = &c_inv * to_dm(&a.to_f64()) * to_dm(c);
    let rhs = to_dm(&expm(&a0.scale(&t0)));
    Ok((lhs - rhs).amax() < tol)
}

/// Real logarithm of an integer matrix whose eigenvalues are positive reals
/// or lie on the unit circle, normalized so that the largest `|ln r|` over
/// real eigenvalues becomes `t₀` (or `t₀ = 1` when there is none).
///
/// Real eigenvalues come first in decreasing order, then rotation blocks
/// `[[0, −μ], [μ, 0]]` with `0 < μ < π` in increasing order.
pub fn solve_conjugacy(a: &IntegerMatrix) -> Result<Conjugacy, LatticeError> {
    let n = a.size();
    let af = to_dm(&a.to_f64());
    let scale = af.amax().max(1.0);
    let cluster = 1e-6 * scale;
    let eig = af.complex_eigenvalues();

    let mut reals: Vec<f64> = Vec::new();
    let mut angles: Vec<f64> = Vec::new();
    for z in eig.iter() {
        if z.im.abs() <= cluster {
            if z.re <= cluster {
                return Err(LatticeError::UnsupportedEigenvalue { re: z.re, im: z.im });
            }
            reals.push(z.re);
        } else if (z.norm() - 1.0).abs() <= cluster {
            if z.im > 0.0 {
                angles.push(z.im.atan2(z.re));
            }
        } else {
            return Err(LatticeError::UnsupportedEigenvalue { re: z.re, im: z.im });
        }
    }
    reals.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    angles.sort_by(|x, y| x.partial_cmp(y).expect("finite"));

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut log = DMatrix::<f64>::zeros(n, n);
    let mut i = 0;
    while i < reals.len() {
        let r = reals[i];
        let mult = reals[i..].iter().take_while(|&&s| (s - r).abs() <= cluster).count();
        let refined = reals[i..i + mult].iter().sum::<f64>() / mult as f64;
        let shifted = &af - DMatrix::<f64>::identity(n, n) * refined;
        let kernel = kernel(&shifted, mult);
        if kernel.len() != mult {
            return Err(LatticeError::NotDiagonalizable);
        }
        for v in kernel {
            log[(columns.len(), columns.len())] = refined.ln();
            columns.push(normalize_sign(v));
        }
        i += mult;
    }
    let mut j = 0;
    while j < angles.len() {
        let mu = angles[j];
        let mult = angles[j..].iter().take_while(|&&s| (s - mu).abs() <= cluster).count();
        let mu = angles[j..j + mult].iter().sum::<f64>() / mult as f64;
        let (c, s) = (mu.cos(), mu.sin());
        let quad = &af * &af - &af * (2.0 * c) + DMatrix::<f64>::identity(n, n);
        let kernel = kernel(&quad, 2 * mult);
        if kernel.len() != 2 * mult {
            return Err(LatticeError::NotDiagonalizable);
        }
        let mut taken: Vec<Vec<f64>> = Vec::new();
        for w in kernel {
            if taken.len() == 2 * mult {
                break;
            }
            let w = nalgebra::DVector::from_vec(w);
            let aw = &af * &w;
            let v: Vec<f64> = ((&aw - &w * c) / s).iter().cloned().collect();
            let u: Vec<f64> = w.iter().cloned().collect();
            let mut trial = taken.clone();
            trial.push(u.clone());
            trial.push(v.clone());
            if rank(&trial) == trial.len() {
                let k = columns.len();
                log[(k, k + 1)] = -mu;
                log[(k + 1, k)] = mu;
                columns.push(u);
                columns.push(v);
                taken = trial;
            }
        }
        if taken.len() != 2 * mult {
            return Err(LatticeError::NotDiagonalizable);
        }
        j += mult;
    }

    let t0 = reals
        .iter()
        .map(|r| r.ln().abs())
        .fold(0.0, f64::max);
    let t0 = if t0 > 0.0 { t0 } else { 1.0 };
    let c = Matrix::from_columns(n, &columns);
    let a0 = from_dm(&(log / t0));
    Ok(Conjugacy { a0, t0, c })
}

/// Orthonormal basis of the approximate kernel: the `expected` right singular
/// vectors with the smallest singular values, kept if those are small.
fn kernel(m: &DMatrix<f64>, expected: usize) -> Vec<Vec<f64>> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let max = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).expect("finite"));
    idx.into_iter()
        .take(expected)
        .filter(|&i| svd.singular_values[i] <= 1e-7 * max)
        .map(|i| v_t.row(i).iter().cloned().collect())
        .collect()
}

fn rank(vs: &[Vec<f64>]) -> usize {
    let m = DMatrix::from_fn(vs.len(), vs[0].len(), |r, c| vs[r][c]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * max).count()
}

fn normalize_sign(v: Vec<f64>) -> Vec<f64> {
    let pivot = v
        .iter()
        .cloned()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() + 1e-12 { x } else { acc });
    if pivot < 0.0 {
        v.into_iter().map(|x| -x).collect()
    } else {
        v
    }
}
