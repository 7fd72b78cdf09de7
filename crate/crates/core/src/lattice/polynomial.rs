use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{IntLit, LatticeError};

const MAX_SEARCH_DEGREE: usize = 8;

/// Integer polynomial, constant term first, leading coefficient nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<IntLit>", into = "Vec<IntLit>")]
pub struct PolynomialZ {
    coeffs: Vec<BigInt>,
}

impl TryFrom<Vec<IntLit>> for PolynomialZ {
    type Error = LatticeError;
    fn try_from(v: Vec<IntLit>) -> Result<Self, LatticeError> {
        PolynomialZ::new(v.into_iter().map(|x| x.0).collect())
    }
}

impl From<PolynomialZ> for Vec<IntLit> {
    fn from(p: PolynomialZ) -> Self {
        p.coeffs.into_iter().map(IntLit).collect()
    }
}

impl std::fmt::Display for PolynomialZ {
    /// Coefficients separated by spaces, constant term first.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(BigInt::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl PolynomialZ {
    /// Trailing zero coefficients are stripped; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self, LatticeError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(LatticeError::Constant);
        }
        Ok(PolynomialZ { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, LatticeError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &PolynomialZ) -> PolynomialZ {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialZ { coeffs: out }
    }

    /// Exact quotient `self / d` when it exists in `ℤ[X]`.
    pub fn exact_div(&self, d: &PolynomialZ) -> Option<PolynomialZ> {
        if d.degree() > self.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - d.degree() + 1];
        let lc = d.leading();
        for k in (0..quot.len()).rev() {
            let top = &rem[k + d.degree()];
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            PolynomialZ::new(quot).ok()
        } else {
            None
        }
    }

    fn norm2(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let limit = n.to_u64().unwrap_or(u64::MAX);
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= limit {
        let bd = BigInt::from(d);
        if (&n % &bd).is_zero() {
            out.push(bd.clone());
            let other = &n / &bd;
            if other != bd {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A nonconstant factor of lower degree, with its cofactor, found by
/// exhaustive search over integer coefficients within the Mignotte bound.
pub fn find_factor(p: &PolynomialZ) -> Result<Option<(PolynomialZ, PolynomialZ)>, LatticeError> {
    let n = p.degree();
    if n == 0 {
        return Err(LatticeError::Constant);
    }
    if n > MAX_SEARCH_DEGREE {
        return Err(LatticeError::DegreeTooLarge {
            degree: n,
            max: MAX_SEARCH_DEGREE,
        });
    }
    if p.constant().is_zero() {
        if n == 1 {
            return Ok(None);
        }
        let x = PolynomialZ::from_i64(&[0, 1]).expect("nonzero");
        let rest = p.exact_div(&x).expect("X divides");
        return Ok(Some((x, rest)));
    }
    let bound = p.norm2();
    let p_one = p.eval(&BigInt::one());
    let p_minus = p.eval(&-BigInt::one());
    let lead_divs = divisors(p.leading());
    let const_divs: Vec<BigInt> = divisors(p.constant()).into_iter().flat_map(|d| [d.clone(), -d]).collect();
    for k in 1..=n / 2 {
        let bounds: Vec<i64> = (0..=k).map(|i| (binomial(k, i) * bound).floor() as i64).collect();
        for lead in &lead_divs {
            for c0 in &const_divs {
                let mut coeffs = vec![BigInt::zero(); k + 1];
                coeffs[0] = c0.clone();
                coeffs[k] = lead.clone();
                if let Some(found) = search(p, &mut coeffs, 1, k, &bounds, &p_one, &p_minus) {
                    return Ok(Some(found));
                }
            }
        }
    }
    Ok(None)
}

fn search(
    p: &PolynomialZ,
    coeffs: &mut Vec<BigInt>,
    i: usize,
    k: usize,
    bounds: &[i64],
    p_one: &BigInt,
    p_minus: &BigInt,
) -> Option<(PolynomialZ, PolynomialZ)> {
    if i == k {
        let q = PolynomialZ { coeffs: coeffs.clone() };
        for (x, px) in [(BigInt::one(), p_one), (-BigInt::one(), p_minus)] {
            let qx = q.eval(&x);
            if qx.is_zero() {
                if !px.is_zero() {
                    return None;
                }
            } else if !(px % &qx).is_zero() {
                return None;
            }
        }
        return p.exact_div(&q).map(|r| (q, r));
    }
    for v in -bounds[i]..=bounds[i] {
        coeffs[i] = BigInt::from(v);
        if let Some(found) = search(p, coeffs, i + 1, k, bounds, p_one, p_minus) {
            return Some(found);
        }
    }
    None
}

/// No nonconstant integer factor of lower degree.
pub fn is_irreducible_over_z(p: &PolynomialZ) -> Result<bool, LatticeError> {
    Ok(find_factor(p)?.is_none())
}

/// Split into factors that [`find_factor`] cannot split further.
pub fn factorize(p: &PolynomialZ) -> Result<Vec<PolynomialZ>, LatticeError> {
    let mut pending = vec![p.clone()];
    let mut out = Vec::new();
    while let Some(f) = pending.pop() {
        if f.degree() == 0 {
            continue;
        }
        match find_factor(&f)? {
            Some((a, b)) => {
                pending.push(a);
                pending.push(b);
            }
            None => out.push(f),
        }
    }
    out.sort_by_key(|f| (f.degree(), f.coeffs.clone()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitRootProfile {
    pub on_circle: usize,
    pub real_off_circle: usize,
    pub other: usize,
    /// Largest degree of an irreducible factor, i.e. of a root's minimal polynomial.
    pub degree_of_unit: usize,
    /// Roots as `(re, im)`, sorted by modulus then argument.
    pub roots: Vec<(f64, f64)>,
}

/// Numeric roots of a unit polynomial, classified relative to the unit circle.
pub fn unit_root_profile(p: &PolynomialZ, tol: f64) -> Result<UnitRootProfile, LatticeError> {
    if !p.constant().abs().is_one() {
        return Err(LatticeError::NonUnit {
            constant: p.constant().to_string(),
        });
    }
    let roots = numeric_roots(p);
    let mut profile = UnitRootProfile {
        on_circle: 0,
        real_off_circle: 0,
        other: 0,
        degree_of_unit: factorize(p)?.iter().map(PolynomialZ::degree).max().unwrap_or(0),
        roots: Vec::new(),
    };
    for &(re, im) in &roots {
        let modulus = re.hypot(im);
        if (modulus - 1.0).abs() <= tol {
            profile.on_circle += 1;
        } else if im.abs() <= tol * modulus.max(1.0) {
            profile.real_off_circle += 1;
        } else {
            profile.other += 1;
        }
    }
    profile.roots = roots;
    Ok(profile)
}

/// Companion-matrix eigenvalues, refined by a few Newton steps.
pub(crate) fn numeric_roots(p: &PolynomialZ) -> Vec<(f64, f64)> {
    let n = p.degree();
    let c = p.to_f64_coeffs();
    let lc = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lc;
    }
    let eig = m.complex_eigenvalues();
    let mut roots: Vec<(f64, f64)> = eig
        .iter()
        .map(|z| {
            let eval = |z: nalgebra::Complex<f64>| {
                let (mut val, mut der) = (nalgebra::Complex::new(0.0, 0.0), nalgebra::Complex::new(0.0, 0.0));
                for &a in c.iter().rev() {
                    der = der * z + val;
                    val = val * z + a;
                }
                (val, der)
            };
            let mut z = *z;
            for _ in 0..3 {
                let (val, der) = eval(z);
                let step = val / der;
                // near a multiple root the derivative is roundoff and Newton overshoots
                if !step.norm().is_finite() || eval(z - step).0.norm() >= val.norm() {
                    break;
                }
                z -= step;
            }
            let im = if z.im.abs() < 1e-14 * z.norm().max(1.0) { 0.0 } else { z.im };
            (z.re, im)
        })
        .collect();
    roots.sort_by(|a, b| {
        let ka = (a.0.hypot(a.1), a.1.atan2(a.0));
        let kb = (b.0.hypot(b.1), b.1.atan2(b.0));
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    roots
}
