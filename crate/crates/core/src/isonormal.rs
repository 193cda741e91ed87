//! Finite-dimensional isonormal Gaussian space: tensor divergences along a
//! unit direction, the Malliavin-derivative corollary, and two independent
//! duality oracles (exact bivariate-Hermite and Monte Carlo).

use num::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::divergence::{self, DivergenceError, DualityReport};
use crate::exact::{self, factorial, Rational};
use crate::hermite::{self, HermiteTable};
use crate::poly::Polynomial;

const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum IsonormalError {
    #[error("direction has {got} components, space has dimension {dim}")]
    DimensionMismatch { dim: usize, got: usize },
    #[error("direction norm {norm} is not 1 within 1e-12")]
    NonUnitDirection { norm: f64 },
    #[error("correlation {0} lies outside [-1, 1]")]
    CorrelationOutOfRange(String),
    #[error("correlation {rho} disagrees with <v,h> = {dot} beyond 1e-9")]
    InconsistentCorrelation { rho: f64, dot: f64 },
    #[error("Monte Carlo check needs at least 1000 samples, got {0}")]
    TooFewSamples(usize),
    #[error("tensor divergence requires order >= 1, got 0")]
    ZeroOrder,
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
}

/// Finite-dimensional real inner-product space carrying the isonormal
/// process X(h) = <h, Z> with Z standard Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsonormalSpace {
    dim: usize,
}

impl IsonormalSpace {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "space dimension must be positive");
        IsonormalSpace { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// A vector h in the space; X(h) at a sample z is dot(h, z).
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    vec: Vec<f64>,
}

impl Direction {
    pub fn new(space: &IsonormalSpace, vec: Vec<f64>) -> Result<Self, IsonormalError> {
        if vec.len() != space.dim() {
            return Err(IsonormalError::DimensionMismatch {
                dim: space.dim(),
                got: vec.len(),
            });
        }
        Ok(Direction { vec })
    }

    pub fn components(&self) -> &[f64] {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        self.vec.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.vec.iter().zip(&other.vec).map(|(a, b)| a * b).sum()
    }

    /// X(h) evaluated at one sample row.
    pub fn field_at(&self, z: &[f64]) -> f64 {
        self.vec.iter().zip(z).map(|(a, b)| a * b).sum()
    }

    fn require_unit(&self) -> Result<(), IsonormalError> {
        let norm = self.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(IsonormalError::NonUnitDirection { norm });
        }
        Ok(())
    }
}

/// The rank-one functional u = g(X(h)) h^{tensor order}.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFunctional {
    pub g: Polynomial,
    pub h: Direction,
    pub order: u32,
}

/// Statistical duality verdict with both estimates, their standard errors
/// and the exact reference value.
#[derive(Clone, Debug, PartialEq)]
pub struct MCDualityReport {
    pub lhs_estimate: f64,
    pub rhs_estimate: f64,
    pub lhs_se: f64,
    pub rhs_se: f64,
    pub samples: usize,
    pub seed: u64,
    pub exact_value: Option<Rational>,
    pub pass: bool,
}

impl Serialize for MCDualityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MCDualityReport", 8)?;
        s.serialize_field("lhs", &self.lhs_estimate)?;
        s.serialize_field("rhs", &self.rhs_estimate)?;
        s.serialize_field("lhs_se", &self.lhs_se)?;
        s.serialize_field("rhs_se", &self.rhs_se)?;
        s.serialize_field("samples", &self.samples)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("exact", &self.exact_value.as_ref().map(exact::fmt_frac))?;
        s.serialize_field("pass", &self.pass)?;
        s.end()
    }
}

/// `count` independent standard Gaussian d-vectors, deterministic in the
/// seed. The stream is ChaCha12 seeded from the u64, sampled row-major.
pub fn sample_fields(space: &IsonormalSpace, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..space.dim())
                .map(|_| StandardNormal.sample(&mut rng))
                .collect()
        })
        .collect()
}

/// delta^n(g(X(h)) h^{tensor n}) as the polynomial p with value p(X(h)).
pub fn divergence_tensor(
    u: &TensorFunctional,
    table: &HermiteTable,
) -> Result<Polynomial, IsonormalError> {
    u.h.require_unit()?;
    Ok(divergence::delta_binomial(&u.g, u.order, table)?)
}

/// D(delta^n u) = q(X(h)) h with q = n delta^{n-1} g + delta^n g'.
/// The bridge to the derivative of the tensor divergence is asserted.
pub fn corollary_derivative(
    u: &TensorFunctional,
    table: &HermiteTable,
) -> Result<(Polynomial, Direction), IsonormalError> {
    if u.order == 0 {
        return Err(IsonormalError::ZeroOrder);
    }
    u.h.require_unit()?;
    let n = u.order;
    let lower = divergence::delta_binomial(&u.g, n - 1, table)?.scale(&exact::rat(n as i64));
    let shifted = divergence::delta_binomial(&u.g.derivative(1), n, table)?;
    let q = &lower + &shifted;
    let direct = divergence::delta_binomial(&u.g, n, table)?.derivative(1);
    assert_eq!(q, direct, "corollary derivative must match D(delta^n g)");
    Ok((q, u.h.clone()))
}

/// Exact E[p(X) q(Y)] for standard bivariate normal (X, Y) with rational
/// correlation rho, via the Hermite change of basis and the covariance
/// identity E[H_j(X) H_k(Y)] = [j=k] j! rho^j.
pub fn mehler_expectation(
    p: &Polynomial,
    q: &Polynomial,
    rho: &Rational,
) -> Result<Rational, IsonormalError> {
    if !exact::abs_le_one(rho) {
        return Err(IsonormalError::CorrelationOutOfRange(rho.to_string()));
    }
    let (a, b) = (hermite_coefficients(p), hermite_coefficients(q));
    let mut acc = Rational::zero();
    let mut rho_pow = Rational::one();
    for j in 0..a.len().min(b.len()) {
        if !a[j].is_zero() && !b[j].is_zero() {
            let fact = Rational::from_integer(factorial(j as u32));
            acc += &a[j] * &b[j] * fact * &rho_pow;
        }
        rho_pow *= rho;
    }
    Ok(acc)
}

/// Coefficients of p in the Hermite basis, solved by back-substitution
/// against the monic table.
fn hermite_coefficients(p: &Polynomial) -> Vec<Rational> {
    let deg = match p.degree() {
        Some(d) => d,
        None => return Vec::new(),
    };
    let table = hermite::hermite_recurrence(deg as u32);
    let mut residual = p.clone();
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for n in (0..=deg).rev() {
        let a = residual.coeff(n);
        if !a.is_zero() {
            residual -= &table.get(n as u32).scale(&a);
        }
        coeffs[n] = a;
    }
    debug_assert!(residual.is_zero());
    coeffs
}

/// Exact duality check E<D^n F, u> = E[F delta^n u] with F = f(X(v)).
/// Both sides collapse to bivariate expectations in (X(v), X(h)).
pub fn duality_bivariate(
    f: &Polynomial,
    u: &TensorFunctional,
    v: &Direction,
    rho: &Rational,
) -> Result<DualityReport, IsonormalError> {
    u.h.require_unit()?;
    v.require_unit()?;
    if !exact::abs_le_one(rho) {
        return Err(IsonormalError::CorrelationOutOfRange(rho.to_string()));
    }
    let n = u.order;
    let table = hermite::hermite_recurrence(n);
    let delta = divergence::delta_binomial(&u.g, n, &table)?;
    let rho_n = num::pow::pow(rho.clone(), n as usize);
    let lhs = rho_n * mehler_expectation(&f.derivative(n), &u.g, rho)?;
    let rhs = mehler_expectation(f, &delta, rho)?;
    let pass = lhs == rhs;
    Ok(DualityReport {
        f: f.clone(),
        g: u.g.clone(),
        n,
        lhs,
        rhs,
        pass,
    })
}

/// Monte Carlo estimate of both sides of the same duality, with standard
/// errors and the exact value attached. Deterministic in (seed, samples,
/// dimension).
pub fn duality_monte_carlo(
    f: &Polynomial,
    u: &TensorFunctional,
    v: &Direction,
    rho: &Rational,
    samples: usize,
    seed: u64,
) -> Result<MCDualityReport, IsonormalError> {
    if samples < 1000 {
        return Err(IsonormalError::TooFewSamples(samples));
    }
    let exact_report = duality_bivariate(f, u, v, rho)?;
    let rho_f = exact::to_f64(rho);
    let dot = v.dot(&u.h);
    if (dot - rho_f).abs() > 1e-9 {
        return Err(IsonormalError::InconsistentCorrelation { rho: rho_f, dot });
    }

    let n = u.order;
    let space = IsonormalSpace::new(u.h.components().len());
    let fd = f.derivative(n).coeffs_f64();
    let fc = f.coeffs_f64();
    let gc = u.g.coeffs_f64();
    let table = hermite::hermite_recurrence(n);
    let dg = divergence::delta_binomial(&u.g, n, &table)?.coeffs_f64();
    let rho_pow = rho_f.powi(n as i32);

    let rows = sample_fields(&space, samples, seed);
    let mut lhs_vals = Vec::with_capacity(samples);
    let mut rhs_vals = Vec::with_capacity(samples);
    for z in &rows {
        let xv = v.field_at(z);
        let xh = u.h.field_at(z);
        lhs_vals.push(rho_pow * horner(&fd, xv) * horner(&gc, xh));
        rhs_vals.push(horner(&fc, xv) * horner(&dg, xh));
    }
    let (lhs_estimate, lhs_se) = mean_and_se(&lhs_vals);
    let (rhs_estimate, rhs_se) = mean_and_se(&rhs_vals);

    let exact_f = exact::to_f64(&exact_report.rhs);
    let combined = 4.0 * (lhs_se * lhs_se + rhs_se * rhs_se).sqrt();
    let pass = (lhs_estimate - rhs_estimate).abs() <= combined
        && (lhs_estimate - exact_f).abs() <= 4.0 * lhs_se.max(f64::EPSILON * exact_f.abs())
        && (rhs_estimate - exact_f).abs() <= 4.0 * rhs_se.max(f64::EPSILON * exact_f.abs());
    Ok(MCDualityReport {
        lhs_estimate,
        rhs_estimate,
        lhs_se,
        rhs_se,
        samples,
        seed,
        exact_value: Some(exact_report.rhs),
        pass,
    })
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
