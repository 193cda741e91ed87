//! Exact univariate polynomial arithmetic over the rationals, plus truncated
//! power series in an auxiliary variable with polynomial coefficients.
//!
//! Polynomials are stored densely in ascending power order with trailing
//! zeros trimmed, so equality of canonical forms is vector equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{self, factorial, rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("invalid coefficient token {token:?}: {reason}")]
    BadCoefficient { token: String, reason: String },
    #[error("polynomial must be a JSON array of coefficient strings, got {0}")]
    NotAnArray(String),
    #[error("series exp requires a zero constant term, got {0}")]
    NonzeroConstantTerm(String),
}

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[k]` is the coefficient of `x^k`; the zero polynomial is the empty
/// vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    /// Convenience constructor from small integer coefficients, ascending.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// k-th formal derivative; k = 0 returns the polynomial itself.
    pub fn derivative(&self, k: u32) -> Polynomial {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            let coeffs = p
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect();
            p = Polynomial::new(coeffs);
        }
        p
    }

    /// Horner evaluation in exact arithmetic.
    pub fn eval_exact(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation in f64.
    pub fn eval_float(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + exact::to_f64(c);
        }
        acc
    }

    /// Coefficients rounded to f64, ascending. Useful when the same
    /// polynomial is evaluated at many sample points.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(exact::to_f64).collect()
    }

    /// Coefficient strings in ascending power order, the JSON wire format.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Parses the JSON coefficient-array encoding. Array entries may be
    /// strings (`"num/den"` or `"n"`) or plain JSON integers.
    pub fn from_json(text: &str) -> Result<Polynomial, PolyError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| PolyError::NotAnArray(e.to_string()))?;
        let items = value
            .as_array()
            .ok_or_else(|| PolyError::NotAnArray(value.to_string()))?;
        let mut coeffs = Vec::with_capacity(items.len());
        for item in items {
            coeffs.push(coeff_from_value(item)?);
        }
        Ok(Polynomial::new(coeffs))
    }
}

fn coeff_from_value(v: &serde_json::Value) -> Result<Rational, PolyError> {
    let token = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => {
            return Err(PolyError::BadCoefficient {
                token: other.to_string(),
                reason: "expected a rational string or integer".into(),
            })
        }
    };
    exact::parse_frac(&token).map_err(|reason| PolyError::BadCoefficient { token, reason })
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_coeff_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Polynomial, D::Error> {
        let items = Vec::<serde_json::Value>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(items.len());
        for item in &items {
            coeffs.push(coeff_from_value(item).map_err(D::Error::custom)?);
        }
        Ok(Polynomial::new(coeffs))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_str = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("({})", mag)
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{coeff_str}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{coeff_str}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{coeff_str}x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Polynomial::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_value_ops!(Add::add, Sub::sub, Mul::mul);

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        *self = &*self - rhs;
    }
}

/// Power series in `t` truncated at a fixed order, with polynomial-in-x
/// coefficients. `terms[n]` is the coefficient polynomial of `t^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    terms: Vec<Polynomial>,
}

impl TruncatedSeries {
    /// Pads or truncates `terms` so exactly `order + 1` coefficients are kept.
    pub fn new(order: usize, mut terms: Vec<Polynomial>) -> Self {
        terms.resize(order + 1, Polynomial::zero());
        TruncatedSeries { terms }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries::new(order, Vec::new())
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Polynomial] {
        &self.terms
    }

    pub fn term(&self, n: usize) -> &Polynomial {
        &self.terms[n]
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut terms = vec![Polynomial::zero(); order + 1];
        for i in 0..=order {
            if self.terms[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if rhs.terms[j].is_zero() {
                    continue;
                }
                let prod = &self.terms[i] * &rhs.terms[j];
                terms[i + j] += &prod;
            }
        }
        TruncatedSeries::new(order, terms)
    }

    /// exp of a series with zero constant term, truncated at the same order.
    pub fn exp(&self) -> Result<TruncatedSeries, PolyError> {
        if !self.terms[0].is_zero() {
            return Err(PolyError::NonzeroConstantTerm(self.terms[0].to_string()));
        }
        let order = self.order();
        let mut result = TruncatedSeries::new(order, vec![Polynomial::one()]);
        let mut power = TruncatedSeries::new(order, vec![Polynomial::one()]);
        for j in 1..=order as u32 {
            power = power.mul(self);
            let inv_fact = Rational::new(1.into(), factorial(j));
            for (acc, p) in result.terms.iter_mut().zip(&power.terms) {
                let scaled = p.scale(&inv_fact);
                *acc += &scaled;
            }
        }
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn mul_monomial_shift() {
        let p = Polynomial::from_integers(&[-1, 0, 1]); // x^2 - 1
        let q = &p * &Polynomial::x();
        assert_eq!(q, Polynomial::from_integers(&[0, -1, 0, 1])); // x^3 - x
    }

    #[test]
    fn add_zero_identity() {
        let p = Polynomial::from_integers(&[3, 0, 7]);
        assert_eq!(&p + &Polynomial::zero(), p);
    }

    #[test]
    fn schoolbook_product() {
        let a = Polynomial::from_integers(&[-1, 1]); // x - 1
        let b = Polynomial::from_integers(&[1, 1]); // x + 1
        assert_eq!(&a * &b, Polynomial::from_integers(&[-1, 0, 1]));
    }

    #[test]
    fn derivative_basic() {
        let cube = Polynomial::from_integers(&[0, 0, 0, 1]);
        assert_eq!(cube.derivative(1), Polynomial::from_integers(&[0, 0, 3]));
        assert_eq!(cube.derivative(4), Polynomial::zero());
        assert_eq!(cube.derivative(0), cube);
        // H_4' = 4 H_3
        let h4 = Polynomial::from_integers(&[3, 0, -6, 0, 1]);
        assert_eq!(h4.derivative(1), Polynomial::from_integers(&[0, -12, 0, 4]));
    }

    #[test]
    fn evaluation() {
        let h2 = Polynomial::from_integers(&[-1, 0, 1]);
        assert_eq!(h2.eval_exact(&rat(0)), rat(-1));
        assert_eq!(Polynomial::zero().eval_exact(&ratio(5, 3)), rat(0));
        let h4 = Polynomial::from_integers(&[3, 0, -6, 0, 1]);
        assert_eq!(h4.eval_exact(&rat(2)), rat(-5));
        assert_eq!(h4.eval_float(2.0), -5.0);
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Polynomial::new(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(p.coeffs().len(), 1);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn series_exp_generating_kernel() {
        // exp(t x - t^2/2) truncated at order 2 -> [1, x, (x^2-1)/2]
        let ts = TruncatedSeries::new(
            2,
            vec![
                Polynomial::zero(),
                Polynomial::x(),
                Polynomial::constant(ratio(-1, 2)),
            ],
        );
        let e = ts.exp().unwrap();
        assert_eq!(e.term(0), &Polynomial::one());
        assert_eq!(e.term(1), &Polynomial::x());
        let expected = Polynomial::new(vec![ratio(-1, 2), rat(0), ratio(1, 2)]);
        assert_eq!(e.term(2), &expected);
    }

    #[test]
    fn series_exp_of_zero() {
        let e = TruncatedSeries::zero(4).exp().unwrap();
        assert_eq!(e.term(0), &Polynomial::one());
        for n in 1..=4 {
            assert!(e.term(n).is_zero());
        }
    }

    #[test]
    fn series_exp_rejects_constant_term() {
        let ts = TruncatedSeries::new(3, vec![Polynomial::one()]);
        assert!(matches!(ts.exp(), Err(PolyError::NonzeroConstantTerm(_))));
    }

    #[test]
    fn series_mul_difference_of_squares() {
        let a = TruncatedSeries::new(2, vec![Polynomial::one(), Polynomial::x()]);
        let b = TruncatedSeries::new(2, vec![Polynomial::one(), -&Polynomial::x()]);
        let prod = a.mul(&b);
        assert_eq!(prod.term(0), &Polynomial::one());
        assert!(prod.term(1).is_zero());
        assert_eq!(prod.term(2), &-&(&Polynomial::x() * &Polynomial::x()));
    }

    #[test]
    fn display_matches_convention() {
        assert_eq!(
            Polynomial::from_integers(&[3, 0, -6, 0, 1]).to_string(),
            "x^4 - 6x^2 + 3"
        );
        assert_eq!(Polynomial::from_integers(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(Polynomial::x().to_string(), "x");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::from_integers(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn json_round_trip() {
        let p = Polynomial::new(vec![rat(-1), rat(0), ratio(3, 2)]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"["-1","0","3/2"]"#);
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        // bare integers accepted on input
        assert_eq!(
            Polynomial::from_json("[0, 1]").unwrap(),
            Polynomial::x()
        );
    }

    #[test]
    fn json_bad_token_is_named() {
        let err = Polynomial::from_json(r#"["1", "2/x"]"#).unwrap_err();
        match err {
            PolyError::BadCoefficient { token, .. } => assert_eq!(token, "2/x"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
