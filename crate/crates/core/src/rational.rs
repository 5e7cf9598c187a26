//! Exact rational numbers.
//!
//! Values that fit in a pair of `i64` are kept inline and combined with `i128`
//! intermediates; anything larger falls back to [`num::BigRational`]. The
//! representation is canonical (lowest terms, positive denominator, inline
//! whenever possible), so derived equality and hashing are value-based.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
enum Repr {
    Small { n: i64, d: i64 },
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        let (mut x, mut y) = (a as u64, b as u64);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        return x as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    /// Builds `n / d` from wide intermediates; `d` must be nonzero.
    fn from_i128(mut n: i128, mut d: i128) -> Self {
        assert!(d != 0, "rational with zero denominator");
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Rational(Repr::Small { n: 0, d: 1 });
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        n /= g;
        d /= g;
        if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
            Rational(Repr::Small {
                n: n as i64,
                d: d as i64,
            })
        } else {
            Rational(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(value: BigRational) -> Self {
        // BigRational is already reduced with a positive denominator.
        if let (Some(n), Some(d)) = (value.numer().to_i64(), value.denom().to_i64()) {
            if n != i64::MIN {
                return Rational(Repr::Small { n, d });
            }
        }
        Rational(Repr::Big(value))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { n, d } => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn new(numer: i64, denom: i64) -> Self {
        Self::from_i128(numer as i128, denom as i128)
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_i128(value as i128, 1)
    }

    pub fn zero() -> Self {
        Rational(Repr::Small { n: 0, d: 1 })
    }

    pub fn one() -> Self {
        Rational(Repr::Small { n: 1, d: 1 })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { n: 0, .. })
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { n, .. } => *n > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { n, .. } => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { d, .. } => *d == 1,
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

    /// `1 / self`; panics on zero.
    pub fn recip(&self) -> Self {
        Rational::one() / self
    }

    pub fn min_of<'a>(&'a self, other: &'a Self) -> &'a Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max_of<'a>(&'a self, other: &'a Self) -> &'a Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Integer value when the denominator is one and it fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { n, d: 1 } => Some(*n),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { n, d } => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn numer_string(&self) -> String {
        match &self.0 {
            Repr::Small { n, .. } => n.to_string(),
            Repr::Big(b) => b.numer().to_string(),
        }
    }

    pub fn denom_string(&self) -> String {
        match &self.0 {
            Repr::Small { d, .. } => d.to_string(),
            Repr::Big(b) => b.denom().to_string(),
        }
    }

    /// Smallest `k` such that `1 / 2^k` is strictly below `self`. `self` must be positive.
    pub fn dyadic_exponent_below(&self) -> u32 {
        assert!(self.is_positive());
        let mut k = 0u32;
        let mut p = Rational::one();
        while p >= *self {
            k += 1;
            p = Rational::new(1, 2) * &p;
        }
        k
    }

    /// `2^k` as a rational; `k` must be below 63.
    pub fn pow2(k: u32) -> Self {
        assert!(k < 63, "power of two out of range");
        Rational::from_integer(1i64 << k)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<i32> for Rational {
    fn from(value: i32) -> Self {
        Rational::from_integer(value as i64)
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Rational::from_i128(value as i128, 1)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { n: a, d: b }, Repr::Small { n: c, d: e }) => a == c && b == e,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { n, d } => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { n: a, d: b }, Repr::Small { n: c, d: e }) => {
                ((*a as i128) * (*e as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small { n: a, d: b }, Repr::Small { n: c, d: e }) => {
            if b == e {
                Rational::from_i128(*a as i128 + *c as i128, *b as i128)
            } else {
                Rational::from_i128(
                    (*a as i128) * (*e as i128) + (*c as i128) * (*b as i128),
                    (*b as i128) * (*e as i128),
                )
            }
        }
        _ => Rational::from_big(x.to_big() + y.to_big()),
    }
}

fn neg_ref(x: &Rational) -> Rational {
    match &x.0 {
        // canonical small numerators exclude i64::MIN
        Repr::Small { n, d } => Rational(Repr::Small { n: -n, d: *d }),
        Repr::Big(b) => Rational::from_big(-b.clone()),
    }
}

fn sub_ref(x: &Rational, y: &Rational) -> Rational {
    add_ref(x, &neg_ref(y))
}

fn mul_ref(x: &Rational, y: &Rational) -> Rational {
    match (&x.0, &y.0) {
        (Repr::Small { n: a, d: b }, Repr::Small { n: c, d: e }) => Rational::from_i128(
            (*a as i128) * (*c as i128),
            (*b as i128) * (*e as i128),
        ),
        _ => Rational::from_big(x.to_big() * y.to_big()),
    }
}

fn div_ref(x: &Rational, y: &Rational) -> Rational {
    assert!(!y.is_zero(), "rational division by zero");
    match (&x.0, &y.0) {
        (Repr::Small { n: a, d: b }, Repr::Small { n: c, d: e }) => Rational::from_i128(
            (*a as i128) * (*e as i128),
            (*b as i128) * (*c as i128),
        ),
        _ => Rational::from_big(x.to_big() / y.to_big()),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $f(&self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $f(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(&self)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        neg_ref(self)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_ref(self, rhs);
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_ref(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = sub_ref(self, rhs);
    }
}

impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = sub_ref(self, &rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Renders `p/q`, or just `p` when the value is an integer.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { n, d: 1 } => write!(f, "{n}"),
            Repr::Small { n, d } => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let valid_int = |p: &str| {
            let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        if !valid_int(num) || !valid_int(den) {
            return Err(err());
        }
        let n: BigInt = num.parse().map_err(|_| err())?;
        let d: BigInt = den.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
        assert_eq!(q(0, -5), Rational::zero());
        assert_eq!(q(11, 3).to_string(), "11/3");
        assert_eq!(q(6, 3).to_string(), "2");
    }

    #[test]
    fn overflow_promotes_to_big_and_back() {
        let big = Rational::from_integer(i64::MAX) * Rational::from_integer(4);
        assert!(matches!(big.0, Repr::Big(_)));
        let back = big / Rational::from_integer(4);
        assert!(matches!(back.0, Repr::Small { .. }));
        assert_eq!(back, Rational::from_integer(i64::MAX));
        let tiny = q(1, i64::MAX) * q(1, 3);
        assert_eq!(tiny * Rational::from_integer(3), q(1, i64::MAX));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("7/15".parse::<Rational>().unwrap(), q(7, 15));
        assert_eq!(" -4/8 ".parse::<Rational>().unwrap(), q(-1, 2));
        assert_eq!("3".parse::<Rational>().unwrap(), q(3, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("0.5".parse::<Rational>().is_err());
        assert!("inf".parse::<Rational>().is_err());
    }

    #[test]
    fn dyadic_exponent() {
        // 1/2^k < 1/8 first holds at k = 4
        assert_eq!(q(1, 8).dyadic_exponent_below(), 4);
        assert_eq!(q(3, 4).dyadic_exponent_below(), 1);
        assert_eq!(Rational::from_integer(2).dyadic_exponent_below(), 0);
    }

    proptest! {
        #[test]
        fn field_laws_match_bigrational(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000,
                                        c in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let x = q(a, b);
            let y = q(c, d);
            let bx = BigRational::new(a.into(), b.into());
            let by = BigRational::new(c.into(), d.into());
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            let printed: Rational = x.to_string().parse().unwrap();
            prop_assert_eq!(printed, x);
        }
    }
}
