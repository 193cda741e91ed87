//! Exact arithmetic primitives: arbitrary-precision rationals, complex
//! rationals, binomial coefficients and standard normal moments.

use num::bigint::BigInt;
use num::complex::Complex;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Complex number with exact rational real and imaginary parts.
pub type ComplexRational = Complex<Rational>;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `num/den` with the denominator always present.
pub fn fmt_frac(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// n! as an arbitrary-precision integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Binomial coefficient C(n, k), exact. Returns 0 when k > n so that
/// summation loops need no bounds checks.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: the partial product is C(n, i+1)
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// E[N^k] for N standard normal: 0 for odd k, k!/(2^{k/2}(k/2)!) for even k.
pub fn normal_moment(k: u32) -> Rational {
    if k % 2 == 1 {
        return Rational::zero();
    }
    let half = k / 2;
    let den = BigInt::from(2u32).pow(half) * factorial(half);
    Rational::new(factorial(k), den)
}

/// i^k as an exact complex rational.
pub fn i_pow(k: u32) -> ComplexRational {
    let one = Rational::one();
    let zero = Rational::zero();
    match k % 4 {
        0 => ComplexRational::new(one, zero),
        1 => ComplexRational::new(zero, one),
        2 => ComplexRational::new(-one, zero),
        _ => ComplexRational::new(zero, -one),
    }
}

/// Best-effort f64 value of a rational.
pub fn to_f64(r: &Rational) -> f64 {
    num::ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // fall back to a division of rounded parts for huge operands
        let n = num::ToPrimitive::to_f64(r.numer()).unwrap_or(f64::NAN);
        let d = num::ToPrimitive::to_f64(r.denom()).unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses a rational from `num/den` or a plain integer string.
pub fn parse_frac(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// |r| <= 1 test used by correlation parameters.
pub fn abs_le_one(r: &Rational) -> bool {
    r.abs() <= Rational::one()
}
