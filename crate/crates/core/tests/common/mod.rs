//! Shared fixtures for the integration suites: the polynomial corpus and an
//! independent Isserlis/Wick bivariate moment oracle.

use malliavin::exact::{rat, Rational};
use malliavin::poly::Polynomial;
use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Monomials x^d for d <= 8 plus 50 seeded random rational polynomials of
/// degree <= 6: the corpus every exhaustive sweep runs over.
pub fn corpus() -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = (0..=8).map(|d| Polynomial::monomial(d, rat(1))).collect();
    out.extend(random_polynomials(50, 6, 0x5eed_2019));
    out
}

pub fn random_polynomials(count: usize, max_degree: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree = rng.gen_range(0..=max_degree);
            let coeffs = (0..=degree)
                .map(|_| {
                    let num = rng.gen_range(-9i64..=9);
                    let den = rng.gen_range(1i64..=9);
                    Rational::new(BigInt::from(num), BigInt::from(den))
                })
                .collect();
            Polynomial::new(coeffs)
        })
        .collect()
}

/// E[X^a Y^b] for standard bivariate normal (X, Y) with correlation rho,
/// by the Wick pairing recursion: pair the first X factor with one of the
/// remaining a-1 X's (covariance 1) or one of the b Y's (covariance rho).
pub fn isserlis_moment(a: usize, b: usize, rho: &Rational) -> Rational {
    if a == 0 && b == 0 {
        return rat(1);
    }
    if (a + b) % 2 == 1 {
        return Rational::zero();
    }
    if a == 0 {
        // pair the first Y with one of the remaining b-1 Y's
        return rat(b as i64 - 1) * isserlis_moment(0, b - 2, rho);
    }
    let mut acc = Rational::zero();
    if a >= 2 {
        acc += rat(a as i64 - 1) * isserlis_moment(a - 2, b, rho);
    }
    if b >= 1 {
        acc += rat(b as i64) * rho * isserlis_moment(a - 1, b - 1, rho);
    }
    acc
}

/// E[p(X) q(Y)] expanded coefficient by coefficient over Isserlis moments.
pub fn isserlis_expectation(p: &Polynomial, q: &Polynomial, rho: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for (i, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += a * b * isserlis_moment(i, j, rho);
        }
    }
    acc
}
