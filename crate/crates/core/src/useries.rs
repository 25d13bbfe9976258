//! Power series in `U` truncated modulo `U^{N+1}`, with integer or field coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalars::{FieldSpec, FieldValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term {0} is not invertible")]
    NotInvertible(String),
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
}

/// Coefficient rings used by [`TruncatedUSeries`].
pub trait Ring: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(n: i64, like: &Self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    /// True when the printed form starts with a minus sign.
    fn is_negative(&self) -> bool;
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn from_i64_like(n: i64, _: &Self) -> Self {
        BigInt::from(n)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        (self.abs() == BigInt::one()).then(|| self.clone())
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Ring for FieldValue {
    fn zero_like(&self) -> Self {
        FieldValue::zero(self.spec())
    }
    fn one_like(&self) -> Self {
        FieldValue::one(self.spec())
    }
    fn from_i64_like(n: i64, like: &Self) -> Self {
        FieldValue::from_i64(n, like.spec())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        FieldValue::is_zero(self)
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn is_negative(&self) -> bool {
        self.is_negative_literal()
    }
}

/// `c_0 + c_1 U + ... + c_N U^N`, arithmetic modulo `U^{N+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedUSeries<R: Ring> {
    coeffs: Vec<R>,
}

pub type IntSeries = TruncatedUSeries<BigInt>;

impl<R: Ring> TruncatedUSeries<R> {
    /// Series from coefficients `c_0..c_N`; the truncation order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least c_0");
        TruncatedUSeries { coeffs }
    }

    pub fn zero(order: usize, like: &R) -> Self {
        TruncatedUSeries {
            coeffs: vec![like.zero_like(); order + 1],
        }
    }

    pub fn one(order: usize, like: &R) -> Self {
        let mut s = Self::zero(order, like);
        s.coeffs[0] = like.one_like();
        s
    }

    /// `c * U^k` (zero if `k > order`).
    pub fn monomial(order: usize, k: usize, c: R) -> Self {
        let mut s = Self::zero(order, &c);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == self.coeffs[0].one_like() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Drops coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        TruncatedUSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    fn check(&self, o: &Self) -> Result<(), SeriesError> {
        if self.order() != o.order() {
            return Err(SeriesError::OrderMismatch(self.order(), o.order()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        Ok(TruncatedUSeries {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        TruncatedUSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        TruncatedUSeries {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Cauchy product modulo `U^{N+1}`.
    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let n = self.order();
        let mut out = vec![self.coeffs[0].zero_like(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Ok(TruncatedUSeries { coeffs: out })
    }

    /// Inverse by the recursion `b_k = -c_0^{-1} sum_{j=1}^k c_j b_{k-j}`.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let c0inv = self.coeffs[0]
            .inverse()
            .ok_or_else(|| SeriesError::NotInvertible(self.coeffs[0].to_string()))?;
        let n = self.order();
        let mut b = vec![c0inv.clone()];
        for k in 1..=n {
            let mut acc = c0inv.zero_like();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&b[k - j]));
            }
            b.push(acc.mul(&c0inv).neg());
        }
        Ok(TruncatedUSeries { coeffs: b })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.order(), &self.coeffs[0]);
        for _ in 0..e {
            out = out.mul(self).expect("same order");
        }
        out
    }

    /// `[c_0, c_1, ..., c_N]`.
    pub fn coefficient_list(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl IntSeries {
    /// Reduction into a field.
    pub fn to_field(&self, spec: FieldSpec) -> TruncatedUSeries<FieldValue> {
        TruncatedUSeries {
            coeffs: self.coeffs.iter().map(|c| FieldValue::from_bigint(c, spec)).collect(),
        }
    }
}

impl<R: Ring> fmt::Display for TruncatedUSeries<R> {
    /// `1 - 3*U + 5*U^3 + O(U^11)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let unit = abs == abs.one_like();
            let body = match (k, unit) {
                (0, _) => abs.to_string(),
                (1, true) => "U".to_string(),
                (1, false) => format!("{abs}·U"),
                (_, true) => format!("U^{k}"),
                (_, false) => format!("{abs}·U^{k}"),
            };
            write!(f, "{sep}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(U^{})", self.order() + 1)
    }
}

/// `sum_n p(n) U^n` by the coin-change recursion over part sizes.
pub fn partition_series(order: usize) -> IntSeries {
    let mut p = vec![BigInt::zero(); order + 1];
    p[0] = BigInt::one();
    for m in 1..=order {
        for n in m..=order {
            let add = p[n - m].clone();
            p[n] += add;
        }
    }
    TruncatedUSeries { coeffs: p }
}

/// `prod_{m=1}^{N} (1 - U^m)^{-1}`, built from series inverses and products.
pub fn partition_series_product(order: usize) -> IntSeries {
    let one = BigInt::one();
    let mut acc = IntSeries::one(order, &one);
    for m in 1..=order {
        let mut factor = IntSeries::one(order, &one);
        factor.coeffs[m] = BigInt::from(-1);
        acc = acc.mul(&factor.inv().expect("unit constant term")).expect("same order");
    }
    acc
}

/// Number of partitions of `n`, by listing them explicitly.
pub fn count_partitions_brute_force(n: usize) -> u64 {
    fn rec(rest: usize, max_part: usize, current: &mut Vec<usize>, count: &mut u64) {
        if rest == 0 {
            *count += 1;
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            current.push(part);
            rec(rest - part, part, current, count);
            current.pop();
        }
    }
    let mut count = 0;
    rec(n, n, &mut Vec::new(), &mut count);
    count
}

/// `v = sum_{p>=0} (-1)^p (2p+1) U^{p(p+1)/2}`.
pub fn theta_v(order: usize) -> IntSeries {
    let mut s = IntSeries::zero(order, &BigInt::zero());
    let mut p = 0usize;
    while p * (p + 1) / 2 <= order {
        let c = (2 * p + 1) as i64 * if p % 2 == 0 { 1 } else { -1 };
        s.coeffs[p * (p + 1) / 2] = BigInt::from(c);
        p += 1;
    }
    s
}

/// `u^3 v` modulo `U^{N+1}`; equal to `1` by the triple product identity.
pub fn jacobi_product(order: usize) -> IntSeries {
    partition_series(order).pow(3).mul(&theta_v(order)).expect("same order")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> IntSeries {
        IntSeries::from_coeffs(xs.iter().map(|x| BigInt::from(*x)).collect())
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_series(7), ints(&[1, 1, 2, 3, 5, 7, 11, 15]));
        assert_eq!(partition_series(40), partition_series_product(40));
        for n in 0..=20 {
            assert_eq!(partition_series(20).coeff(n), &BigInt::from(count_partitions_brute_force(n)));
        }
    }

    #[test]
    fn theta_coefficients() {
        let v = theta_v(10);
        assert_eq!(v, ints(&[1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9]));
    }

    #[test]
    fn geometric_series() {
        let one_minus_u = ints(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(one_minus_u.inv().unwrap(), ints(&[1, 1, 1, 1, 1, 1]));
        assert!(ints(&[2, 1]).inv().is_err());
    }

    #[test]
    fn jacobi() {
        assert!(jacobi_product(50).is_one());
        let f = jacobi_product(12).to_field(FieldSpec::Prime(7));
        assert!(f.is_one());
    }

    #[test]
    fn display() {
        assert_eq!(theta_v(3).to_string(), "1 - 3·U + 5·U^3 + O(U^4)");
        assert_eq!(ints(&[0, 1, -1]).to_string(), "U - U^2 + O(U^3)");
        assert_eq!(theta_v(3).coefficient_list(), "[1, -3, 0, 5]");
    }
}
