//! Exact Laurent polynomials in one variable `y` over big integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};

/// Σ c_e·y^e with finitely many nonzero coefficients. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// 1 + y + … + y^(d−1); zero when d = 0.
    pub fn geometric(d: u64) -> Self {
        let mut p = Self::zero();
        for e in 0..d as i64 {
            p.add_term(e, BigInt::one());
        }
        p
    }

    /// Builds Σ y^e over the given exponents.
    pub fn from_exponents<I: IntoIterator<Item = i64>>(exps: I) -> Self {
        let mut p = Self::zero();
        for e in exps {
            p.add_term(e, BigInt::one());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// (exponent, coefficient) pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// No negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
    }

    /// Multiplies by y^k.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn eval(&self, y: &BigRational) -> Result<BigRational> {
        if y.is_zero() && self.min_exponent().is_some_and(|e| e < 0) {
            return Err(Error::Pole);
        }
        let mut total = BigRational::zero();
        for (&e, c) in &self.terms {
            let base = if e >= 0 {
                pow(y, e as u64)
            } else {
                pow(&y.recip(), e.unsigned_abs())
            };
            total += base * BigRational::from_integer(c.clone());
        }
        Ok(total)
    }

    pub fn eval_int(&self, y: i64) -> Result<BigRational> {
        self.eval(&BigRational::from_integer(BigInt::from(y)))
    }

    /// Exact quotient by 1 − y; errors when the division leaves a remainder.
    pub fn div_one_minus_y(&self) -> Result<Self> {
        // self = (1 − y)·q ⇒ q_e = Σ_{k ≤ e} self_k
        let mut q = Self::zero();
        let (Some(lo), Some(hi)) = (self.min_exponent(), self.max_exponent()) else {
            return Ok(q);
        };
        let mut running = BigInt::zero();
        for e in lo..=hi {
            running += self.coeff(e);
            if e < hi {
                q.add_term(e, running.clone());
            }
        }
        if !running.is_zero() {
            return Err(Error::InexactDivision(format!("({self}) / (1 - y)")));
        }
        Ok(q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!([e, json_int(c)]))
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            reason: "expected {\"terms\": [[exponent, coefficient], ...]}".into(),
        };
        let mut p = Self::zero();
        for t in v.get("terms").and_then(|t| t.as_array()).ok_or_else(bad)? {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let e = pair[0].as_i64().ok_or_else(bad)?;
            let c = match &pair[1] {
                serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| bad())?,
                serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|_| bad())?,
                _ => return Err(bad()),
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn json_int(c: &BigInt) -> serde_json::Value {
    match i64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

fn pow(base: &BigRational, mut exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for LaurentPolynomial {
    /// Ascending exponents: `2 + y`, `1 + 3*y^2`, `y^-1 - 2*y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => String::new(),
                1 => "y".to_string(),
                _ => format!("y^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPolynomial {
    type Err = Error;

    /// Accepts the Display form and the explicit `c*y^e` form, e.g.
    /// `2*y^0 + 1*y^1`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse { line: 1, reason };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        let mut p = Self::zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            // a term ends at the next sign that is not an exponent sign
            let bytes = body.as_bytes();
            let mut end = body.len();
            for i in 1..bytes.len() {
                if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                    end = i;
                    break;
                }
            }
            let term = &body[..end];
            rest = &body[end..];
            let (coeff, exp) = parse_term(term).ok_or_else(|| err(format!("bad term `{term}`")))?;
            p.add_term(exp, if negative { -coeff } else { coeff });
        }
        Ok(p)
    }
}

fn parse_term(term: &str) -> Option<(BigInt, i64)> {
    let (coeff, var) = match term.split_once('*') {
        Some((c, v)) => (c.parse::<BigInt>().ok()?, v),
        None if term.starts_with('y') => (BigInt::one(), term),
        None => return Some((term.parse::<BigInt>().ok()?, 0)),
    };
    let exp = match var.strip_prefix('y')? {
        "" => 1,
        e => e.strip_prefix('^')?.parse::<i64>().ok()?,
    };
    Some((coeff, exp))
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&a, x) in &self.terms {
            for (&b, z) in &rhs.terms {
                out.add_term(a + b, x * z);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl std::iter::Sum for LaurentPolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}
