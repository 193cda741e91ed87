//! Probabilists' Hermite polynomials by three independent routes: the
//! three-term recurrence (production path), the Rodrigues-style derivative
//! recursion and the complex Gaussian moment expansion (oracles).

use num::Zero;

use crate::exact::{binomial, factorial, i_pow, normal_moment, rat, ComplexRational, Rational};
use crate::poly::{Polynomial, TruncatedSeries};

/// Table of H_0 .. H_max_n, all monic, deg(H_n) = n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteTable {
    polys: Vec<Polynomial>,
}

impl HermiteTable {
    pub fn max_n(&self) -> u32 {
        (self.polys.len() - 1) as u32
    }

    /// H_n; panics if n exceeds the table.
    pub fn get(&self, n: u32) -> &Polynomial {
        &self.polys[n as usize]
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }
}

/// Builds H_0 .. H_max_n by H_{n+1} = x H_n - n H_{n-1}.
pub fn hermite_recurrence(max_n: u32) -> HermiteTable {
    let mut polys = Vec::with_capacity(max_n as usize + 1);
    polys.push(Polynomial::one());
    if max_n >= 1 {
        polys.push(Polynomial::x());
    }
    let x = Polynomial::x();
    for n in 1..max_n as usize {
        let next = &(&x * &polys[n]) - &polys[n - 1].scale(&rat(n as i64));
        polys.push(next);
    }
    HermiteTable { polys }
}

/// H_n via the density-derivative recursion: with phi^{(n)} = q_n phi,
/// q_n = -(x q_{n-1} + (n-1) q_{n-2}), and H_n = (-1)^n q_n.
pub fn hermite_rodrigues(n: u32) -> Polynomial {
    let x = Polynomial::x();
    let mut prev = Polynomial::one(); // q_0
    if n == 0 {
        return prev;
    }
    let mut cur = -&x; // q_1, since phi' = -x phi
    for m in 2..=n as usize {
        let next = -&(&(&x * &cur) + &prev.scale(&rat(m as i64 - 1)));
        prev = cur;
        cur = next;
    }
    if n % 2 == 0 {
        cur
    } else {
        -&cur
    }
}

/// H_n via the moment identity H_n = E(x + iN)^n, expanded term by term in
/// exact complex arithmetic. The imaginary part must cancel to the zero
/// polynomial; a nonzero remainder signals an arithmetic bug.
pub fn hermite_moment(n: u32) -> Polynomial {
    let (re, im) = moment_power_expansion(n);
    assert!(
        im.is_zero(),
        "imaginary part of E(x+iN)^{n} must vanish, got {im}"
    );
    re
}

/// (re, im) polynomial parts of E[(x + iN)^n].
pub(crate) fn moment_power_expansion(n: u32) -> (Polynomial, Polynomial) {
    let mut re = Polynomial::zero();
    let mut im = Polynomial::zero();
    for k in 0..=n {
        let weight = binomial(n, k) * normal_moment(k);
        let ComplexRational { re: wr, im: wi } = i_pow(k);
        let deg = (n - k) as usize;
        re += &Polynomial::monomial(deg, &weight * wr);
        im += &Polynomial::monomial(deg, weight * wi);
    }
    (re, im)
}

/// H_n(0): 0 for odd n, (-1)^{n/2} n! / (2^{n/2} (n/2)!) for even n.
pub fn hermite_at_zero(n: u32) -> Rational {
    if n % 2 == 1 {
        return Rational::zero();
    }
    let half = n / 2;
    let mag = Rational::new(
        factorial(n),
        num::BigInt::from(2u32).pow(half) * factorial(half),
    );
    if half % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// The exponential generating series exp(t x - t^2/2) truncated in t;
/// term n equals H_n / n!.
pub fn generating_series(order: usize) -> TruncatedSeries {
    let kernel = TruncatedSeries::new(
        order,
        vec![
            Polynomial::zero(),
            Polynomial::x(),
            Polynomial::constant(Rational::new((-1).into(), 2.into())),
        ],
    );
    kernel.exp().expect("kernel has zero constant term")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn h(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_integers(coeffs)
    }

    #[test]
    fn recurrence_first_values() {
        let table = hermite_recurrence(5);
        assert_eq!(table.get(0), &h(&[1]));
        assert_eq!(table.get(1), &h(&[0, 1]));
        assert_eq!(table.get(2), &h(&[-1, 0, 1]));
        assert_eq!(table.get(3), &h(&[0, -3, 0, 1]));
        assert_eq!(table.get(4), &h(&[3, 0, -6, 0, 1]));
        assert_eq!(table.get(5), &h(&[0, 15, 0, -10, 0, 1]));
    }

    #[test]
    fn recurrence_degenerate_table() {
        let table = hermite_recurrence(0);
        assert_eq!(table.max_n(), 0);
        assert_eq!(table.get(0), &Polynomial::one());
    }

    #[test]
    fn rodrigues_values() {
        assert_eq!(hermite_rodrigues(0), Polynomial::one());
        assert_eq!(hermite_rodrigues(1), Polynomial::x());
        assert_eq!(hermite_rodrigues(3), h(&[0, -3, 0, 1]));
    }

    #[test]
    fn moment_values() {
        assert_eq!(hermite_moment(1), Polynomial::x());
        assert_eq!(hermite_moment(2), h(&[-1, 0, 1]));
        assert_eq!(hermite_moment(4), h(&[3, 0, -6, 0, 1]));
    }

    #[test]
    fn at_zero_values() {
        assert_eq!(hermite_at_zero(3), rat(0));
        assert_eq!(hermite_at_zero(2), rat(-1));
        assert_eq!(hermite_at_zero(6), rat(-15));
        assert_eq!(hermite_at_zero(0), rat(1));
    }

    #[test]
    fn at_zero_matches_constant_terms() {
        let table = hermite_recurrence(30);
        for n in 0..=30 {
            assert_eq!(table.get(n).eval_exact(&rat(0)), hermite_at_zero(n), "n={n}");
        }
    }

    #[test]
    fn generating_series_terms() {
        let g = generating_series(3);
        assert_eq!(g.term(0), &Polynomial::one());
        assert_eq!(g.term(1), &Polynomial::x());
        // term 3 = H_3 / 3! = (x^3 - 3x)/6
        let expected = h(&[0, -3, 0, 1]).scale(&Rational::new(1.into(), 6.into()));
        assert_eq!(g.term(3), &expected);
    }

    #[test]
    fn generating_series_order_eight() {
        let g = generating_series(8);
        let table = hermite_recurrence(8);
        for n in 0..=8u32 {
            let scaled = g.term(n as usize).scale(&Rational::from_integer(factorial(n)));
            assert_eq!(&scaled, table.get(n), "t^{n} coefficient");
        }
    }

    #[test]
    fn three_routes_agree() {
        let table = hermite_recurrence(30);
        for n in 0..=30u32 {
            assert_eq!(table.get(n), &hermite_rodrigues(n), "rodrigues n={n}");
            assert_eq!(table.get(n), &hermite_moment(n), "moment n={n}");
        }
    }

    #[test]
    fn derivative_and_recurrence_identities() {
        let table = hermite_recurrence(31);
        for n in 1..=30u32 {
            let hn = table.get(n);
            let expected = table.get(n - 1).scale(&rat(n as i64));
            assert_eq!(hn.derivative(1), expected, "H_n' = n H_{{n-1}}, n={n}");
            let lhs = &(&Polynomial::x() * hn) - &hn.derivative(1);
            assert_eq!(&lhs, table.get(n + 1), "x H_n - H_n' = H_{{n+1}}, n={n}");
        }
    }
}
