use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::LinalgError;

/// Scalars are stored as rationals for every ring. Over the integers the
/// denominator is always 1; over F_p the numerator is the canonical
/// representative in `0..p`.
pub type Elem = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring, LinalgError> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    /// True iff 2 is invertible.
    pub fn has_half(&self) -> bool {
        match self {
            Ring::Integers => false,
            Ring::Rationals => true,
            Ring::PrimeField(p) => *p != 2,
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::zero()
    }

    pub fn one(&self) -> Elem {
        Elem::one()
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.normalize(Elem::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(&self, v: BigInt) -> Elem {
        self.normalize(Elem::from_integer(v))
    }

    /// Brings a rational into canonical form for this ring.
    /// Panics if the value does not lie in the ring (a denominator over Z,
    /// or a denominator divisible by p over F_p).
    pub fn normalize(&self, x: Elem) -> Elem {
        match self {
            Ring::Integers => {
                assert!(x.is_integer(), "non-integer {} in Z", x);
                x
            }
            Ring::Rationals => x,
            Ring::PrimeField(p) => {
                let pb = BigInt::from(*p);
                let num = x.numer().mod_floor(&pb);
                let den = x.denom().mod_floor(&pb);
                assert!(!den.is_zero(), "denominator divisible by {}", p);
                let inv = modinv(&den, &pb).expect("prime modulus");
                Elem::from_integer((num * inv).mod_floor(&pb))
            }
        }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        match self {
            Ring::Integers => x.is_integer(),
            Ring::Rationals => true,
            Ring::PrimeField(p) => {
                x.is_integer() && !x.is_negative() && x.numer() < &BigInt::from(*p)
            }
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::PrimeField(_) => self.normalize(a + b),
            _ => a + b,
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::PrimeField(_) => self.normalize(a - b),
            _ => a - b,
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::zero();
        }
        match self {
            Ring::PrimeField(_) => self.normalize(a * b),
            _ => a * b,
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match self {
            Ring::PrimeField(_) => self.normalize(-a.clone()),
            _ => -a.clone(),
        }
    }

    /// `a + b*c`, the workhorse of elimination.
    pub fn mul_add(&self, a: &Elem, b: &Elem, c: &Elem) -> Elem {
        if b.is_zero() || c.is_zero() {
            return a.clone();
        }
        self.add(a, &self.mul(b, c))
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match self {
            Ring::Integers => a.is_integer() && a.numer().abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        Some(match self {
            Ring::Integers => a.clone(),
            Ring::Rationals => a.recip(),
            Ring::PrimeField(_) => self.normalize(a.recip()),
        })
    }

    /// Exact division `a / b`, if it exists in the ring.
    pub fn div_exact(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        if b.is_zero() {
            return if a.is_zero() { Some(Elem::zero()) } else { None };
        }
        match self {
            Ring::Integers => {
                let (q, r) = a.numer().div_rem(b.numer());
                if r.is_zero() {
                    Some(Elem::from_integer(q))
                } else {
                    None
                }
            }
            Ring::Rationals => Some(a / b),
            Ring::PrimeField(_) => Some(self.normalize(a / b)),
        }
    }

    /// Euclidean size used for pivot selection; units have size 1.
    pub fn euclid_size(&self, a: &Elem) -> Option<BigInt> {
        if a.is_zero() {
            return None;
        }
        Some(match self {
            Ring::Integers => a.numer().abs(),
            _ => BigInt::one(),
        })
    }

    /// Euclidean quotient: `a = q*b + r` with r "smaller" than b.
    pub fn euclid_quot(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Ring::Integers => Elem::from_integer(a.numer().div_floor(b.numer())),
            _ => self.div_exact(a, b).expect("field division"),
        }
    }

    /// Canonical associate: positive over Z, 1 over a field (for nonzero a).
    pub fn normal_unit(&self, a: &Elem) -> Elem {
        match self {
            Ring::Integers => {
                if a.is_negative() {
                    -Elem::one()
                } else {
                    Elem::one()
                }
            }
            _ => {
                if a.is_zero() {
                    Elem::one()
                } else {
                    self.inv(a).unwrap()
                }
            }
        }
    }

    /// Parses integers and `a/b` fractions exactly.
    pub fn parse(&self, s: &str) -> Result<Elem, LinalgError> {
        let t = s.trim();
        let bad = || LinalgError::Parse(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        let x = Elem::new(n, d);
        match self {
            Ring::Integers if !x.is_integer() => Err(LinalgError::NotInRing(s.to_string())),
            Ring::PrimeField(p) if (x.denom() % BigInt::from(*p)).is_zero() => {
                Err(LinalgError::NotInRing(s.to_string()))
            }
            _ => Ok(self.normalize(x)),
        }
    }

    /// Sign-aware integer power of -1.
    pub fn sign(&self, odd: bool) -> Elem {
        if odd {
            self.neg(&Elem::one())
        } else {
            Elem::one()
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F_{}", p),
        }
    }
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Writes an element as a decimal string (`a` or `a/b`).
pub fn format_elem(x: &Elem) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
