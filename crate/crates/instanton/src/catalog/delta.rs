//! The ℤ/8 grading δ(p, q, i) of reducible flat connections on L(p, q),
//! evaluated in fixed-point arithmetic with an integrality gate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Environment variable overriding the working precision (decimal digits).
pub const DIGITS_VAR: &str = "INSTANTON_DELTA_DIGITS";

const MIN_DIGITS: u32 = 50;
const DEFAULT_DIGITS: u32 = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("lens parameters p = {p}, q = {q}, i = {i} are out of range")]
    InvalidParams { p: i64, q: i64, i: i64 },
    #[error("delta({p}, {q}, {i}) = {value} is not within 1e-6 of an integer")]
    NonIntegral { p: i64, q: i64, i: i64, value: String },
    #[error("delta({p}, {q}, {i}) = {value} is odd")]
    OddResult { p: i64, q: i64, i: i64, value: i64 },
}

pub fn working_digits() -> u32 {
    std::env::var(DIGITS_VAR).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_DIGITS).max(MIN_DIGITS)
}

/// Fixed-point reals x·10^-digits.
struct Fixed {
    scale: BigInt,
}

impl Fixed {
    fn new(digits: u32) -> Self {
        Fixed { scale: BigInt::from(10).pow(digits) }
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).div_floor(&self.scale)
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * &self.scale).div_floor(b)
    }

    /// atan(1/x) for an integer x > 1.
    fn atan_inv(&self, x: i64) -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut power = &self.scale / x;
        let mut sum = BigInt::zero();
        let mut n = 1i64;
        let mut sign = true;
        while !power.is_zero() {
            let term = &power / n;
            if sign {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            n += 2;
            sign = !sign;
        }
        sum
    }

    fn pi(&self) -> BigInt {
        self.atan_inv(5) * 16 - self.atan_inv(239) * 4
    }

    /// (sin x, cos x) by Taylor series; |x| should be at most about 2π.
    fn sin_cos(&self, x: &BigInt) -> (BigInt, BigInt) {
        let x2 = self.mul(x, x);
        let (mut s, mut c) = (x.clone(), self.scale.clone());
        let (mut ts, mut tc) = (x.clone(), self.scale.clone());
        let mut k = 1i64;
        while !ts.is_zero() || !tc.is_zero() {
            tc = -self.mul(&tc, &x2) / ((2 * k - 1) * (2 * k));
            ts = -self.mul(&ts, &x2) / ((2 * k) * (2 * k + 1));
            c += &tc;
            s += &ts;
            k += 1;
        }
        (s, c)
    }

    /// (sin, cos) of π·num/den, reducing num mod 2den first.
    fn sin_cos_pi(&self, pi: &BigInt, num: i64, den: i64) -> (BigInt, BigInt) {
        let mut n = num.rem_euclid(2 * den);
        if n > den {
            n -= 2 * den;
        }
        self.sin_cos(&(pi * n / den))
    }
}

/// q' with q q' ≡ 1 mod p, 0 < q' < p.
pub fn inverse_mod(q: i64, p: i64) -> Option<i64> {
    let e = BigInt::from(q).extended_gcd(&BigInt::from(p));
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&BigInt::from(p)).to_i64().unwrap())
}

pub(crate) fn check_params(p: i64, q: i64, i: i64) -> Result<i64, DeltaError> {
    let bad = DeltaError::InvalidParams { p, q, i };
    if p < 2 || q <= 0 || q >= p || i < 0 || 2 * i > p {
        return Err(bad);
    }
    inverse_mod(q, p).ok_or(bad)
}

/// δ(p, q, i) = 8i²q'/p - ε(i) + (2/p) Σ_{j=1}^{p-1} cot(jπ/p) cot(jqπ/p) sin²(2πij/p)
/// reduced mod 8, where ε(i) = 1 for 0 < i < p/2 and 0 otherwise.
pub fn delta_grading(p: i64, q: i64, i: i64) -> Result<i64, DeltaError> {
    delta_grading_with(p, q, i, working_digits())
}

pub fn delta_grading_with(p: i64, q: i64, i: i64, digits: u32) -> Result<i64, DeltaError> {
    let q_inv = check_params(p, q, i)?;
    // guard digits absorb rounding in the series
    let fx = Fixed::new(digits + 10);
    let pi = fx.pi();
    let mut sum = BigInt::zero();
    for j in 1..p {
        let (s1, c1) = fx.sin_cos_pi(&pi, j, p);
        let (s2, c2) = fx.sin_cos_pi(&pi, j * q, p);
        let (s3, _) = fx.sin_cos_pi(&pi, 2 * i * j, p);
        let cot = fx.mul(&fx.div(&c1, &s1), &fx.div(&c2, &s2));
        sum += fx.mul(&cot, &fx.mul(&s3, &s3));
    }
    let eps = if i > 0 && 2 * i < p { 1 } else { 0 };
    // total·p·scale, so the rational part stays exact
    let scaled: BigInt = &fx.scale * BigInt::from(8 * i * i * q_inv - eps * p) + sum * 2;
    let denom: BigInt = &fx.scale * BigInt::from(p);
    let twice: BigInt = &scaled * 2 + &denom;
    let nearest = twice.div_floor(&(&denom * 2));
    let diff: BigInt = &scaled - &nearest * &denom;
    let err = diff.abs();
    // |err / denom| < 1e-6
    if err * BigInt::from(1_000_000) >= denom {
        let value = format!("{:.9}", scaled.to_f64().unwrap_or(f64::NAN) / denom.to_f64().unwrap_or(f64::NAN));
        return Err(DeltaError::NonIntegral { p, q, i, value });
    }
    let value = nearest.mod_floor(&BigInt::from(8)).to_i64().unwrap();
    if value % 2 != 0 {
        return Err(DeltaError::OddResult { p, q, i, value });
    }
    Ok(value)
}
