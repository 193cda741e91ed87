//! Exact symbolic-numeric toolkit for Hermite polynomials and the n-th order
//! Gaussian divergence (Skorohod) operator.
//!
//! All core identities are verified in exact rational arithmetic; floating
//! point appears only in the Gauss-Hermite quadrature and Monte Carlo
//! cross-checks.

pub mod divergence;
pub mod exact;
pub mod hermite;
pub mod isonormal;
pub mod poly;

pub use divergence::{DivergenceError, DualityReport, Method};
pub use exact::{ComplexRational, Rational};
pub use hermite::HermiteTable;
pub use isonormal::{Direction, IsonormalSpace, MCDualityReport, TensorFunctional};
pub use poly::{Polynomial, TruncatedSeries};
