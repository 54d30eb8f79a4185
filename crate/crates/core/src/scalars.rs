//! Exact rationals and the truncated series ring ℚ[h]/(h^N).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (optional sign, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_rational_at(s, 0)
}

fn parse_rational_at(s: &str, offset: usize) -> Result<Rational> {
    let t = s.trim();
    let lead = offset + (s.len() - s.trim_start().len());
    let err = |msg: &str| Error::Parse { pos: lead, msg: format!("{msg}: {t:?}") };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let d: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Element of ℚ[h]/(h^N). `coeffs[k]` is the coefficient of h^k and `coeffs.len() == N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HSeries {
    coeffs: Vec<Rational>,
}

impl HSeries {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        HSeries { coeffs: vec![Rational::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·h^k`; vanishes when `k >= order`.
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from leading coefficients, padding with zeros and dropping
    /// everything at or above h^order.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        assert!(order >= 1, "truncation order must be positive");
        coeffs.resize(order, Rational::zero());
        HSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Smallest k with a nonzero h^k coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(HSeries { coeffs })
    }

    /// Cauchy product modulo h^N.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        HSeries { coeffs }
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        HSeries { coeffs: out }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        HSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by h^k (shifting coefficients up, truncating).
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        HSeries { coeffs }
    }

    /// Two-sided inverse modulo h^N; requires a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.order();
        let inv0 = a0.recip();
        let mut b = vec![Rational::zero(); n];
        b[0] = inv0.clone();
        for k in 1..n {
            let mut acc = Rational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &b[k - i];
                }
            }
            b[k] = -(acc * &inv0);
        }
        Ok(HSeries { coeffs: b })
    }

    /// Same series at a different truncation order (padding or truncating).
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    /// Parses the textual form produced by `Display`, e.g. `1 - 1/2*h + h^2`.
    pub fn parse(s: &str, order: usize) -> Result<Self> {
        let mut coeffs: Vec<Rational> = vec![Rational::zero(); order];
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut sign = Rational::one();
        let mut expect_term = true;
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            if c.is_whitespace() {
                pos += 1;
                continue;
            }
            if c == '+' || c == '-' {
                if c == '-' {
                    sign = -sign;
                }
                expect_term = true;
                pos += 1;
                continue;
            }
            if !expect_term {
                return Err(Error::Parse { pos, msg: "expected '+' or '-'".into() });
            }
            let start = pos;
            while pos < bytes.len() && !matches!(bytes[pos] as char, '+' | '-') {
                pos += 1;
            }
            let term = s[start..pos].trim_end();
            let (coef_text, power) = match term.find('h') {
                None => (term, 0usize),
                Some(hpos) => {
                    let coef = term[..hpos].trim_end().trim_end_matches('*').trim_end();
                    let rest = term[hpos + 1..].trim();
                    let power = if rest.is_empty() {
                        1
                    } else {
                        let p = rest.strip_prefix('^').ok_or(Error::Parse {
                            pos: start + hpos + 1,
                            msg: "expected '^' after h".into(),
                        })?;
                        p.trim().parse::<usize>().map_err(|_| Error::Parse {
                            pos: start + hpos + 1,
                            msg: format!("bad exponent {p:?}"),
                        })?
                    };
                    (coef, power)
                }
            };
            let value = if coef_text.is_empty() {
                Rational::one()
            } else {
                parse_rational_at(coef_text, start)?
            };
            if power < order {
                coeffs[power] += &sign * value;
            }
            sign = Rational::one();
            expect_term = false;
        }
        if expect_term && pos > 0 && !s.trim().is_empty() {
            return Err(Error::Parse { pos, msg: "dangling sign".into() });
        }
        Ok(HSeries { coeffs })
    }
}

/// `hs_mul` of the contract: Cauchy product with order check.
pub fn hs_mul(a: &HSeries, b: &HSeries) -> Result<HSeries> {
    a.try_mul(b)
}

pub fn hs_invert(a: &HSeries) -> Result<HSeries> {
    a.invert()
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let body = fmt_rational(&mag);
            match k {
                0 => write!(f, "{body}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{body}*")?;
                    }
                    if k == 1 {
                        write!(f, "h")?;
                    } else {
                        write!(f, "h^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HSeries[N={}]({})", self.order(), self)
    }
}

// Operator forms panic on order mismatch; use the `try_*` methods to get an error instead.

impl Add for &HSeries {
    type Output = HSeries;
    fn add(self, rhs: &HSeries) -> HSeries {
        self.try_add(rhs).expect("HSeries order mismatch")
    }
}

impl Sub for &HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &HSeries) -> HSeries {
        self.try_sub(rhs).expect("HSeries order mismatch")
    }
}

impl Mul for &HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &HSeries) -> HSeries {
        self.try_mul(rhs).expect("HSeries order mismatch")
    }
}

impl Neg for &HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(c: &[i64], n: usize) -> HSeries {
        HSeries::from_coeffs(c.iter().map(|&x| int(x)).collect(), n)
    }

    #[test]
    fn product_truncates() {
        assert_eq!(hs_mul(&hs(&[1, 1], 2), &hs(&[1, -1], 2)).unwrap(), hs(&[1], 2));
        assert_eq!(hs_mul(&hs(&[1, 1], 3), &hs(&[1, -1], 3)).unwrap(), hs(&[1, 0, -1], 3));
        assert_eq!(hs_mul(&hs(&[0, 1], 2), &hs(&[0, 1], 2)).unwrap(), hs(&[0], 2));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        assert_eq!(hs_mul(&hs(&[1], 2), &hs(&[1], 3)), Err(Error::OrderMismatch(2, 3)));
        assert!(hs(&[1], 2).try_add(&hs(&[1], 3)).is_err());
    }

    #[test]
    fn inversion() {
        assert_eq!(hs_invert(&hs(&[1], 4)).unwrap(), hs(&[1], 4));
        assert_eq!(hs_invert(&hs(&[1, 1], 3)).unwrap(), hs(&[1, -1, 1], 3));
        assert_eq!(hs_invert(&hs(&[0, 1], 2)), Err(Error::NotInvertible));
        let a = HSeries::from_coeffs(vec![rat(3, 2), rat(-1, 7), int(5)], 3);
        let b = a.invert().unwrap();
        assert_eq!(&a * &b, HSeries::one(3));
        assert_eq!(&b * &a, HSeries::one(3));
    }

    #[test]
    fn text_form() {
        let s = HSeries::from_coeffs(vec![int(1), int(-1), rat(1, 2)], 3);
        assert_eq!(s.to_string(), "1 - h + 1/2*h^2");
        assert_eq!(HSeries::parse("1 - h + 1/2*h^2", 3).unwrap(), s);
        assert_eq!(HSeries::zero(2).to_string(), "0");
        assert_eq!(HSeries::parse("0", 2).unwrap(), HSeries::zero(2));
        assert_eq!(HSeries::parse("-3/4*h", 2).unwrap().to_string(), "-3/4*h");
        assert!(matches!(HSeries::parse("1 + x", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn shift_and_monomial() {
        assert_eq!(hs(&[1, 2], 3).shift(1), hs(&[0, 1, 2], 3));
        assert_eq!(HSeries::monomial(int(4), 3, 3), HSeries::zero(3));
    }
}
