//! Scalar domains: exact rationals and binary64 floats behind one trait.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Exact,
    Float,
}

impl std::fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float => f.write_str("float"),
        }
    }
}

/// Thresholds governing every float-mode rank and eigenvalue decision.
///
/// Both fields are ignored by exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rank_tol: f64,
    pub eigen_cluster_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rank_tol: 1e-9,
            eigen_cluster_tol: 1e-7,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rank_tol: f64, eigen_cluster_tol: f64) -> Result<Self, LinalgError> {
        // relative tolerances at or above 1 accept everything
        let ok = |t: f64| t > 0.0 && t < 1.0;
        if !ok(rank_tol) || !ok(eigen_cluster_tol) {
            return Err(LinalgError::InvalidTolerance {
                rank_tol,
                eigen_cluster_tol,
            });
        }
        Ok(TolerancePolicy {
            rank_tol,
            eigen_cluster_tol,
        })
    }

    /// Same policy with a different rank tolerance; the cluster tolerance keeps
    /// its default ratio of 100 to the rank tolerance.
    pub fn with_rank_tol(rank_tol: f64) -> Result<Self, LinalgError> {
        Self::new(rank_tol, (rank_tol * 100.0).min(1e-2))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot parse {literal:?} as a {mode} scalar")]
pub struct ScalarParseError {
    pub literal: String,
    pub mode: ScalarMode,
}

/// Field operations shared by both backends.
///
/// Zero tests go through [`Scalar::negligible`], which is an exact comparison
/// for rationals and a relative threshold for floats.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact conversion for rationals (every finite double is rational).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    /// True when `|self| <= rank_tol * scale` (float) or `self == 0` (exact).
    fn negligible(&self, scale: f64, tol: &TolerancePolicy) -> bool;
    fn parse_literal(s: &str) -> Result<Self, ScalarParseError>;
    /// `"p/q"` for rationals, shortest round-trip decimal for floats.
    fn to_literal(&self) -> String;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn negligible(&self, _scale: f64, _tol: &TolerancePolicy) -> bool {
        Zero::is_zero(self)
    }
    fn parse_literal(s: &str) -> Result<Self, ScalarParseError> {
        let err = || ScalarParseError {
            literal: s.to_string(),
            mode: ScalarMode::Exact,
        };
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        } else {
            BigInt::from_str(t)
                .map(BigRational::from_integer)
                .map_err(|_| err())
        }
    }
    fn to_literal(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
    fn abs_f64(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn negligible(&self, scale: f64, tol: &TolerancePolicy) -> bool {
        self.abs() <= tol.rank_tol * scale
    }
    fn parse_literal(s: &str) -> Result<Self, ScalarParseError> {
        let t = s.trim();
        let parsed = if let Some((p, q)) = t.split_once('/') {
            match (p.trim().parse::<f64>(), q.trim().parse::<f64>()) {
                (Ok(p), Ok(q)) if q != 0.0 => Some(p / q),
                _ => None,
            }
        } else {
            t.parse::<f64>().ok()
        };
        parsed.filter(|v| v.is_finite()).ok_or(ScalarParseError {
            literal: s.to_string(),
            mode: ScalarMode::Float,
        })
    }
    fn to_literal(&self) -> String {
        format!("{self:?}")
    }
}

/// Promote an exact value to the float backend.
pub fn promote(q: &Rational) -> f64 {
    Scalar::to_f64(q)
}

/// Closest rational with denominator at most `max_den`, by continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let a_int = BigInt::from(a as i64);
        let h2 = &a_int * &h1 + &h0;
        let k2 = &a_int * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
        if r.abs() > 1e15 {
            break;
        }
    }
    if k1.is_zero() {
        return None;
    }
    Some(BigRational::new(h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals_are_reduced() {
        let q = Rational::parse_literal("6/-4").unwrap();
        assert_eq!(q.to_literal(), "-3/2");
        assert_eq!(Rational::parse_literal("5").unwrap().to_literal(), "5/1");
        assert!(Rational::parse_literal("1/0").is_err());
        assert!(Rational::parse_literal("x").is_err());
    }

    #[test]
    fn float_literals_round_trip() {
        let v = 2.0f64.sqrt();
        assert_eq!(f64::parse_literal(&v.to_literal()).unwrap(), v);
        assert_eq!(f64::parse_literal("1/4").unwrap(), 0.25);
        assert!(f64::parse_literal("nan").is_err());
    }

    #[test]
    fn negligible_is_relative_in_float_mode() {
        let tol = TolerancePolicy::default();
        assert!(1e-12f64.negligible(1.0, &tol));
        assert!(!1e-12f64.negligible(1e-6, &tol));
        assert!(!Rational::from_ratio(1, 1_000_000_000_000).negligible(1e30, &tol));
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.75, 1000).unwrap(), Rational::from_ratio(3, 4));
        assert_eq!(rationalize(-2.0, 10).unwrap(), Rational::from_i64(-2));
        let third = rationalize(1.0 / 3.0, 1_000_000).unwrap();
        assert_eq!(third, Rational::from_ratio(1, 3));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(TolerancePolicy::new(0.0, 1e-7).is_err());
        assert!(TolerancePolicy::new(1e-9, f64::NAN).is_err());
        assert!(TolerancePolicy::with_rank_tol(1.5).is_err());
        assert!(TolerancePolicy::with_rank_tol(1e-10).is_ok());
    }
}
