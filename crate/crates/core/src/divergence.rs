//! Four constructions of the n-th divergence operator acting on polynomials,
//! the derivative commutation identity, exact Gaussian expectations and the
//! duality verifier, plus Gauss-Hermite quadrature for floating-point
//! cross-checks.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{self, binomial, rat, Rational};
use crate::hermite::{self, HermiteTable};
use crate::poly::Polynomial;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DivergenceError {
    #[error("hermite table holds max_n = {have}, but order {needed} requested")]
    TableTooSmall { needed: u32, have: u32 },
    #[error("quadrature Newton iteration failed to converge at root index {index}")]
    QuadratureDiverged { index: usize },
}

/// Which construction produced a divergence value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Binomial,
    Iterative,
    AltSum,
    Moment,
}

/// A computed n-th divergence together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceResult {
    pub n: u32,
    pub input: Polynomial,
    pub output: Polynomial,
    pub method: Method,
}

/// Both sides of the duality identity E[f^{(n)} g] = E[f delta^n g].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub f: Polynomial,
    pub g: Polynomial,
    pub n: u32,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

impl Serialize for DualityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DualityReport", 6)?;
        s.serialize_field("f", &self.f)?;
        s.serialize_field("g", &self.g)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("lhs", &exact::fmt_frac(&self.lhs))?;
        s.serialize_field("rhs", &exact::fmt_frac(&self.rhs))?;
        s.serialize_field("pass", &self.pass)?;
        s.end()
    }
}

/// Derivatives g, g', ..., g^{(max)} with index 0 holding g itself.
///
/// This is the single home of the binomial-expansion convention that the
/// zeroth "power" of g means g, not 1; both the binomial and alternative-sum
/// constructions read their g-factors from here.
fn derivative_ladder(g: &Polynomial, max: u32) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(g.clone());
    for _ in 0..max {
        let next = out.last().unwrap().derivative(1);
        out.push(next);
    }
    out
}

fn signed(term: Polynomial, negative: bool) -> Polynomial {
    if negative {
        -&term
    } else {
        term
    }
}

/// delta^n g as the binomially expanded (H - g)^n: the canonical
/// implementation. Every term carries a g-derivative factor, so
/// delta^n 0 = 0 and n = 0 returns g.
pub fn delta_binomial(
    g: &Polynomial,
    n: u32,
    table: &HermiteTable,
) -> Result<Polynomial, DivergenceError> {
    if table.max_n() < n {
        return Err(DivergenceError::TableTooSmall {
            needed: n,
            have: table.max_n(),
        });
    }
    let derivs = derivative_ladder(g, n);
    let mut acc = Polynomial::zero();
    for k in 0..=n {
        let term = table.get(k) * derivs[(n - k) as usize].scale(&binomial(n, k));
        acc += &signed(term, (n - k) % 2 == 1);
    }
    Ok(acc)
}

/// delta^n g by n-fold application of the first-order rule
/// delta g = x g - g'.
pub fn delta_iterative(g: &Polynomial, n: u32) -> Polynomial {
    let x = Polynomial::x();
    let mut p = g.clone();
    for _ in 0..n {
        p = &(&x * &p) - &p.derivative(1);
    }
    p
}

/// delta^n g via the alternative sum over H_{k+1} g^{(m-k)} - H_k g^{(m-k+1)}
/// with m = n - 1. Callers pass the divergence order n directly; n = 0
/// returns g.
pub fn delta_alt(
    g: &Polynomial,
    n: u32,
    table: &HermiteTable,
) -> Result<Polynomial, DivergenceError> {
    if n == 0 {
        return Ok(g.clone());
    }
    if table.max_n() < n {
        return Err(DivergenceError::TableTooSmall {
            needed: n,
            have: table.max_n(),
        });
    }
    let m = n - 1;
    let derivs = derivative_ladder(g, m + 1);
    let mut acc = Polynomial::zero();
    for k in 0..=m {
        let c = binomial(m, k);
        let upper = table.get(k + 1) * derivs[(m - k) as usize].scale(&c);
        let lower = table.get(k) * derivs[(m - k + 1) as usize].scale(&c);
        acc += &signed(&upper - &lower, (m - k) % 2 == 1);
    }
    Ok(acc)
}

/// delta^n g via the complex moment formula E(K - g)^n with K = x + iN,
/// expanded with exact normal moments. The imaginary part must cancel to
/// the zero polynomial.
pub fn delta_moment(g: &Polynomial, n: u32) -> Polynomial {
    let derivs = derivative_ladder(g, n);
    let mut re = Polynomial::zero();
    let mut im = Polynomial::zero();
    for r in 0..=n {
        // E[K^r] as a complex-coefficient polynomial in x
        let (kr_re, kr_im) = hermite::moment_power_expansion(r);
        let gd = derivs[(n - r) as usize].scale(&binomial(n, r));
        let neg = (n - r) % 2 == 1;
        re += &signed(&kr_re * &gd, neg);
        im += &signed(&kr_im * &gd, neg);
    }
    assert!(
        im.is_zero(),
        "imaginary part of E(K-g)^{n} must vanish, got {im}"
    );
    re
}

/// Checks D(delta^n g) = n delta^{n-1} g + delta^n g' as exact polynomials.
pub fn commutator_check(g: &Polynomial, n: u32) -> bool {
    assert!(n >= 1, "commutator identity requires n >= 1");
    let table = hermite::hermite_recurrence(n);
    let dn = delta_binomial(g, n, &table).expect("table sized to n");
    let lhs = dn.derivative(1);
    let lower = delta_binomial(g, n - 1, &table)
        .expect("table sized to n")
        .scale(&rat(n as i64));
    let shifted = delta_binomial(&g.derivative(1), n, &table).expect("table sized to n");
    lhs == &lower + &shifted
}

/// E[p(N)] for N standard normal, exact.
pub fn gaussian_expectation(p: &Polynomial) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * exact::normal_moment(k as u32))
        .sum()
}

/// Verifies the defining duality E[f^{(n)} g] = E[f delta^n g] exactly.
pub fn duality_check(f: &Polynomial, g: &Polynomial, n: u32) -> DualityReport {
    let table = hermite::hermite_recurrence(n);
    let lhs = gaussian_expectation(&(&f.derivative(n) * g));
    let delta = delta_binomial(g, n, &table).expect("table sized to n");
    let rhs = gaussian_expectation(&(f * &delta));
    let pass = lhs == rhs;
    DualityReport {
        f: f.clone(),
        g: g.clone(),
        n,
        lhs,
        rhs,
        pass,
    }
}

/// m-point Gauss-Hermite rule against the standard normal weight, exact for
/// polynomials of degree <= 2m-1. Nodes are the roots of H_m located by
/// bisection-safeguarded Newton iteration, bracketed by the interlacing
/// roots of H_{m-1}; weights are m! / (m^2 H_{m-1}(x_i)^2).
pub fn gauss_hermite_nodes(m: u32) -> Result<(Vec<f64>, Vec<f64>), DivergenceError> {
    assert!(m >= 1, "quadrature needs at least one point");
    let table = hermite::hermite_recurrence(m);
    let coeffs: Vec<Vec<f64>> = table.polys().iter().map(|p| p.coeffs_f64()).collect();

    let mut roots = vec![0.0f64]; // H_1 = x
    for n in 2..=m as usize {
        let bound = (4.0 * n as f64 + 2.0).sqrt();
        let mut brackets = Vec::with_capacity(n + 1);
        brackets.push(-bound);
        brackets.extend_from_slice(&roots);
        brackets.push(bound);
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let root = refine_root(&coeffs[n], &coeffs[n - 1], n, brackets[i], brackets[i + 1])
                .ok_or(DivergenceError::QuadratureDiverged { index: i })?;
            next.push(root);
        }
        roots = next;
    }

    let m_fact = exact::to_f64(&Rational::from_integer(exact::factorial(m)));
    let weights = roots
        .iter()
        .map(|&x| {
            let hm1 = horner(&coeffs[m as usize - 1], x);
            m_fact / ((m * m) as f64 * hm1 * hm1)
        })
        .collect();
    Ok((roots, weights))
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Magnitude of the largest term of the polynomial at x; the residual
/// tolerance is taken relative to this local scale.
fn local_scale(coeffs: &[f64], x: f64) -> f64 {
    let mut scale = 0.0f64;
    let mut pow = 1.0f64;
    for &c in coeffs {
        scale = scale.max((c * pow).abs());
        pow *= x.abs();
    }
    scale.max(1.0)
}

/// Newton iteration on H_n within a sign-changing bracket, falling back to
/// bisection whenever a step leaves the bracket.
fn refine_root(hn: &[f64], hn1: &[f64], n: usize, mut lo: f64, mut hi: f64) -> Option<f64> {
    let f = |x: f64| horner(hn, x);
    let fp = |x: f64| n as f64 * horner(hn1, x);
    let mut flo = f(lo);
    if flo == 0.0 {
        return Some(lo);
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= 1e-14 * local_scale(hn, x) {
            return Some(x);
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = fp(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= f64::EPSILON * (1.0 + x.abs()) {
            return Some(next);
        }
        x = next;
    }
    None
}
