use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{self, ZPoly};
use super::AlexError;

/// Integer Laurent polynomial in `t`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        let mut p = Self::default();
        p.add_term(k, c.into());
        p
    }

    /// Coefficients of `t^low, t^(low+1), ...`.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::default();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(low + i as i64, BigInt::from(c));
        }
        p
    }

    pub(crate) fn from_zpoly(a: &ZPoly) -> Self {
        let mut p = Self::default();
        for (i, c) in a.iter().enumerate() {
            p.add_term(i as i64, c.clone());
        }
        p
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn high(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Width of the exponent range.
    pub fn span(&self) -> usize {
        match (self.low(), self.high()) {
            (Some(l), Some(h)) => (h - l) as usize,
            _ => 0,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().unwrap().abs().is_one()
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `t -> 1/t`.
    pub fn invert_variable(&self) -> Self {
        LaurentPolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Lowest exponent 0 and positive leading coefficient.
    pub fn normalize(&self) -> Self {
        let Some(low) = self.low() else {
            return Self::zero();
        };
        let p = self.shift(-low);
        if p.coeffs.values().next_back().unwrap().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.is_zero() || (self.low() == Some(0) && self.coeffs.values().next_back().unwrap().is_positive())
    }

    /// True iff `self = ±t^k * other`.
    pub fn equivalent_up_to_units(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    /// Coefficients read the same from both ends.
    pub fn is_palindromic(&self) -> bool {
        let n = self.normalize();
        let d = n.high().unwrap_or(0);
        n.coeffs.iter().all(|(k, c)| n.coeff(d - k) == *c)
    }

    pub(crate) fn to_zpoly(&self) -> ZPoly {
        let n = self.normalize();
        let d = n.high().map_or(0, |h| h as usize + 1);
        let mut out = vec![BigInt::zero(); d];
        for (k, c) in &n.coeffs {
            out[*k as usize] = c.clone();
        }
        out
    }

    /// Irreducible factors over the rationals of the normalized polynomial,
    /// with multiplicity. The content contributes nothing.
    pub fn factor_count(&self) -> Result<usize, AlexError> {
        if self.is_zero() {
            return Err(AlexError::ZeroPolynomial);
        }
        Ok(super::factor::count_factors(&self.to_zpoly()))
    }

    pub fn content(&self) -> BigInt {
        poly::content(&self.to_zpoly())
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let var = match *k {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            if var.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{a}*{var}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPolynomial {
    type Err = AlexError;

    fn from_str(s: &str) -> Result<Self, AlexError> {
        let bad = |m: &str| AlexError::Parse(format!("{m} in {s:?}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad("empty polynomial"));
        }
        let b = text.as_bytes();
        let mut i = 0;
        let mut p = LaurentPolynomial::zero();
        let mut first = true;
        while i < b.len() {
            let mut sign = BigInt::one();
            if b[i] == b'+' || b[i] == b'-' {
                if b[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if !first {
                return Err(bad("expected '+' or '-'"));
            }
            first = false;
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let coeff = if i > start {
                text[start..i].parse::<BigInt>().map_err(|_| bad("bad coefficient"))?
            } else {
                BigInt::one()
            };
            let mut exp = 0i64;
            let has_coeff = i > start;
            if has_coeff && i < b.len() && b[i] == b'*' {
                i += 1;
                if i >= b.len() || b[i] != b't' {
                    return Err(bad("expected 't' after '*'"));
                }
            }
            if i < b.len() && b[i] == b't' {
                i += 1;
                exp = 1;
                if i < b.len() && b[i] == b'^' {
                    i += 1;
                    let paren = i < b.len() && b[i] == b'(';
                    if paren {
                        i += 1;
                    }
                    let es = i;
                    if i < b.len() && b[i] == b'-' {
                        i += 1;
                    }
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = text[es..i].parse().map_err(|_| bad("bad exponent"))?;
                    if paren {
                        if i >= b.len() || b[i] != b')' {
                            return Err(bad("expected ')'"));
                        }
                        i += 1;
                    }
                }
            } else if !has_coeff {
                return Err(bad("expected a term"));
            }
            p.add_term(exp, sign * coeff);
        }
        Ok(p)
    }
}

impl From<LaurentPolynomial> for String {
    fn from(p: LaurentPolynomial) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for LaurentPolynomial {
    type Error = AlexError;

    fn try_from(s: String) -> Result<Self, AlexError> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let p = LaurentPolynomial::from_coeffs(0, &[1, -1, 1]);
        assert_eq!(p.to_string(), "t^2 - t + 1");
        assert_eq!("t^2-t+1".parse::<LaurentPolynomial>().unwrap(), p);
        assert_eq!("1 - t + t^2".parse::<LaurentPolynomial>().unwrap(), p);
        let q: LaurentPolynomial = "-2*t^-1 + 3 - 2t".parse().unwrap();
        assert_eq!(q.to_string(), "-2*t + 3 - 2*t^-1");
        assert_eq!("t^(-2)".parse::<LaurentPolynomial>().unwrap(), LaurentPolynomial::monomial(1, -2));
        assert!("t^".parse::<LaurentPolynomial>().is_err());
        assert!("2t3".parse::<LaurentPolynomial>().is_err());
        assert_eq!("0".parse::<LaurentPolynomial>().unwrap(), LaurentPolynomial::zero());
    }

    #[test]
    fn units_and_normalization() {
        let p = LaurentPolynomial::from_coeffs(0, &[1, -1, 1]);
        let q = p.multiply(&LaurentPolynomial::monomial(-1, 1)).multiply(&LaurentPolynomial::monomial(1, -2));
        assert!(p.equivalent_up_to_units(&q));
        assert_eq!(q.normalize(), p);
        assert!(!p.equivalent_up_to_units(&LaurentPolynomial::from_coeffs(0, &[1, -3, 1])));
        assert!(LaurentPolynomial::zero().equivalent_up_to_units(&LaurentPolynomial::zero()));
    }

    #[test]
    fn products() {
        let p = LaurentPolynomial::from_coeffs(0, &[1, -1, 1]);
        assert_eq!(p.multiply(&p), LaurentPolynomial::from_coeffs(0, &[1, -2, 3, -2, 1]));
        assert_eq!(p.multiply(&LaurentPolynomial::one()), p);
        assert!(p.multiply(&LaurentPolynomial::zero()).is_zero());
    }

    #[test]
    fn serde_as_text() {
        let p = LaurentPolynomial::from_coeffs(0, &[2, -3, 2]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "\"2*t^2 - 3*t + 2\"");
        assert_eq!(serde_json::from_str::<LaurentPolynomial>(&s).unwrap(), p);
    }
}
