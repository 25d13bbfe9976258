//! Exact scalars over Q or a prime field F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not invertible over {1}")]
    NotInvertible(String, FieldSpec),
    #[error("malformed scalar literal {0:?}")]
    Malformed(String),
    #[error("{0} is not a prime fitting in 64 bits")]
    NotPrime(String),
    #[error("unknown field {0:?} (expected Q or F<p>)")]
    UnknownField(String),
}

/// The base field: Q, or F_p for a prime p < 2^64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p.to_string()))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// True when the integer `n` is invertible in this field.
    pub fn inverts(&self, n: i64) -> bool {
        match self {
            FieldSpec::Rational => n != 0,
            FieldSpec::Prime(p) => (n.unsigned_abs() % p) != 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    /// Accepts `Q`, `F5`, `F_5` (case-insensitive prefix).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rational);
        }
        let rest = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| ScalarError::UnknownField(s.to_string()))?;
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let p: u64 = rest
            .parse()
            .map_err(|_| ScalarError::UnknownField(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// An element of Q or F_p. Rationals are kept reduced with positive
/// denominator; residues lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl FieldValue {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldValue::Rational(_) => FieldSpec::Rational,
            FieldValue::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn zero(spec: FieldSpec) -> Self {
        Self::from_i64(0, spec)
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::from_i64(1, spec)
    }

    pub fn from_i64(n: i64, spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => FieldValue::Rational(BigRational::from_integer(n.into())),
            FieldSpec::Prime(p) => FieldValue::Residue {
                value: residue_of_i64(n, p),
                modulus: p,
            },
        }
    }

    pub fn from_bigint(n: &BigInt, spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => FieldValue::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldValue::Residue {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den` in the given field.
    pub fn from_ratio(num: i64, den: i64, spec: FieldSpec) -> Result<Self, ScalarError> {
        Self::from_i64(num, spec).checked_div(&Self::from_i64(den, spec))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_zero(),
            FieldValue::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(q) => q.is_one(),
            FieldValue::Residue { value, .. } => *value == 1,
        }
    }

    /// Integer value, when this is an integer (always true in F_p).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldValue::Rational(q) if q.is_integer() => q.to_integer().to_i64(),
            FieldValue::Rational(_) => None,
            FieldValue::Residue { value, .. } => i64::try_from(*value).ok(),
        }
    }

    fn same(&self, other: &Self) -> Result<(), ScalarError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(ScalarError::Mismatch(self.spec(), other.spec()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same(other)?;
        Ok(match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a + b),
            (FieldValue::Residue { value: a, modulus: p }, FieldValue::Residue { value: b, .. }) => {
                FieldValue::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same(other)?;
        Ok(match (self, other) {
            (FieldValue::Rational(a), FieldValue::Rational(b)) => FieldValue::Rational(a * b),
            (FieldValue::Residue { value: a, modulus: p }, FieldValue::Residue { value: b, .. }) => {
                FieldValue::Residue {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.same(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Rational(q) => FieldValue::Rational(q.recip()),
            FieldValue::Residue { value, modulus } => FieldValue::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            FieldValue::Rational(q) => FieldValue::Rational(-q),
            FieldValue::Residue { value, modulus } => FieldValue::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.spec());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// `(-1)^e` as a field element.
    pub fn sign(e: i64, spec: FieldSpec) -> Self {
        Self::from_i64(if e.rem_euclid(2) == 0 { 1 } else { -1 }, spec)
    }
}

fn residue_of_i64(n: i64, p: u64) -> u64 {
    (n as i128).rem_euclid(p as i128) as u64
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldValue::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl FieldValue {
    /// True when the canonical literal starts with a minus sign.
    pub fn is_negative_literal(&self) -> bool {
        matches!(self, FieldValue::Rational(q) if q.is_negative())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&FieldValue> for &FieldValue {
            type Output = FieldValue;
            /// Panics when the operands live in different fields.
            fn $m(self, rhs: &FieldValue) -> FieldValue {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $tr<FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: FieldValue) -> FieldValue {
                (&self).$checked(&rhs).expect("field mismatch")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.neg_ref()
    }
}

/// Parses `[+-]digits[/digits]` into the given field.
pub fn parse_scalar(text: &str, spec: FieldSpec) -> Result<FieldValue, ScalarError> {
    let t = text.trim();
    let bad = || ScalarError::Malformed(text.to_string());
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || den.is_some_and(|d| !digits(d)) {
        return Err(bad());
    }
    let mut n: BigInt = num.parse().map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    match spec {
        FieldSpec::Rational => Ok(FieldValue::Rational(BigRational::new(n, d))),
        FieldSpec::Prime(_) => {
            let dv = FieldValue::from_bigint(&d, spec);
            if dv.is_zero() {
                return Err(ScalarError::NotInvertible(d.to_string(), spec));
            }
            FieldValue::from_bigint(&n, spec).checked_div(&dv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> FieldValue {
        parse_scalar(s, FieldSpec::Rational).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(&q("1/2") + &q("1/3"), q("5/6"));
    }

    #[test]
    fn half_mod_five() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(FieldValue::from_ratio(1, 2, f5).unwrap().to_string(), "3");
    }

    #[test]
    fn sixth_mod_three_fails() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(FieldValue::from_ratio(1, 6, f3), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn literals() {
        assert_eq!(q("-9").to_string(), "-9");
        assert_eq!(q("5/12").to_string(), "5/12");
        assert_eq!(q("-10/4").to_string(), "-5/2");
    }

    #[test]
    fn malformed() {
        assert!(parse_scalar("10/-4", FieldSpec::Rational).is_err());
        assert!(parse_scalar("", FieldSpec::Rational).is_err());
        assert!(parse_scalar("1/0", FieldSpec::Rational).is_err());
        assert!(parse_scalar("x", FieldSpec::Rational).is_err());
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(matches!(parse_scalar("3/4", f2), Err(ScalarError::NotInvertible(..))));
    }

    #[test]
    fn mismatch_is_an_error() {
        let f5 = FieldSpec::prime(5).unwrap();
        let a = FieldValue::one(f5);
        let b = FieldValue::one(FieldSpec::Rational);
        assert!(matches!(a.checked_add(&b), Err(ScalarError::Mismatch(..))));
    }

    #[test]
    fn specs() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("F5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("F4".parse::<FieldSpec>().is_err());
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551559));
    }
}
