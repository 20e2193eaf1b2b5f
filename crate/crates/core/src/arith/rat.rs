//! Exact rationals with an inline `i64` representation and a big-integer fallback.
//!
//! Almost every rational this crate touches is a short dyadic fraction, so the
//! common case runs on checked machine arithmetic. Any operation that would
//! overflow is redone on `BigRational`, and results that fit back into `i64`
//! are demoted, so each value has exactly one representation.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational number; always reduced, denominator positive.
#[derive(Clone)]
pub struct Rat(Repr);

#[derive(Clone)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn small_fits(r: &BigRational) -> Option<Ratio<i64>> {
    let n = r.numer().to_i64()?;
    let d = r.denom().to_i64()?;
    // i64::MIN cannot be negated, keep it out of the fast path.
    if n == i64::MIN || d == i64::MIN {
        return None;
    }
    Some(Ratio::new_raw(n, d))
}

impl Rat {
    pub fn zero() -> Self {
        Rat(Repr::Small(Ratio::zero()))
    }

    pub fn one() -> Self {
        Rat(Repr::Small(Ratio::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_big(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`. Fails on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::Parse(format!("zero denominator in {numer}/{denom}")));
        }
        Ok(Self::from_big(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, Error> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::from_big(BigRational::new(numer, denom)))
    }

    pub fn from_big(r: BigRational) -> Self {
        match small_fits(&r) {
            Some(s) => Rat(Repr::Small(s)),
            None => Rat(Repr::Big(r)),
        }
    }

    fn from_small(r: Ratio<i64>) -> Self {
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            Rat(Repr::Big(BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))))
        } else {
            Rat(Repr::Small(r))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(s) => {
                BigRational::new_raw(BigInt::from(*s.numer()), BigInt::from(*s.denom()))
            }
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(*s.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(*s.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if (0..62).contains(&k) {
            return Rat(Repr::Small(Ratio::from_integer(1i64 << k)));
        }
        if (-62..0).contains(&k) {
            return Rat(Repr::Small(Ratio::new_raw(1, 1i64 << (-k))));
        }
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Rat(Repr::Big(BigRational::from_integer(p)))
        } else {
            Rat(Repr::Big(BigRational::new_raw(BigInt::one(), p)))
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.is_positive(),
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.is_negative(),
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(s) => s.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::Precondition("reciprocal of zero".into()));
        }
        Ok(Self::one() / self)
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(s) => BigInt::from(s.numer().div_floor(s.denom())),
            Repr::Big(b) => b.numer().div_floor(b.denom()),
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Largest `k` with `2^k <= self`. Requires `self > 0`.
    pub fn floor_log2(&self) -> i64 {
        assert!(self.is_positive(), "floor_log2 of a non-positive rational");
        let n = self.numer();
        let d = self.denom();
        let mut k = n.bits() as i64 - d.bits() as i64;
        // 2^k is now within a factor of two of the value.
        if Rat::pow2(k) > *self {
            k -= 1;
        }
        k
    }

    /// Smallest `k` with `self <= 2^k`. Requires `self > 0`.
    pub fn ceil_log2(&self) -> i64 {
        let k = self.floor_log2();
        if Rat::pow2(k) == *self {
            k
        } else {
            k + 1
        }
    }

    /// Nearest multiple of `2^-prec` (ties round up). Error at most `2^-(prec+1)`.
    pub fn round_dyadic(&self, prec: i64) -> Self {
        let scaled = self * &Rat::pow2(prec) + Rat::new(1, 2).expect("nonzero");
        let f = scaled.floor();
        Rat::from_big(BigRational::from_integer(f)) * Rat::pow2(-prec)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(s) => *s.numer() as f64 / *s.denom() as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal rendering truncated toward the nearest value at `digits` places.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self * &Rat::from_big(BigRational::from_integer(scale.clone()));
        let rounded = (scaled + Rat::new(1, 2).expect("nonzero")).floor();
        let neg = rounded.is_negative();
        let mag = rounded.abs();
        let int_part = &mag / &scale;
        let frac_part = &mag % &scale;
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!(
                "{sign}{int_part}.{:0>width$}",
                frac_part.to_string(),
                width = digits as usize
            )
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_small(Ratio::from_integer(n))
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from(n as i64)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat::from_big(r)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            // canonical representation: a small value is never stored big
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(s) => {
                0u8.hash(state);
                s.numer().hash(state);
                s.denom().hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Rat::from_small(r);
                    }
                }
                Rat::from_big($trait::$method(self.to_big(), rhs.to_big()))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $trait::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division of a rational by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Rat::from_small(r);
            }
        }
        Rat::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        &self / &rhs
    }
}

impl Div<&Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        &self / rhs
    }
}

impl Div<Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        self / &rhs
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(s) => Rat::from_small(-*s),
            Repr::Big(b) => Rat::from_big(-b.clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(s) if *s.denom() == 1 => write!(f, "{}", s.numer()),
            Repr::Small(s) => write!(f, "{}/{}", s.numer(), s.denom()),
            Repr::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional sign; no decimal points.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Rat::from_bigints(n, d)
    }
}
