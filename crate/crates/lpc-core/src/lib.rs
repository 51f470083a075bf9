//! Certified decision procedures for a two-parameter family of entire series.
//!
//! The family under study is `f(x) = sum a_k x^k` with `a_0 = a_1 = 1`,
//! all `a_k > 0`, and 2-periodic second quotients
//! `q_n = a_{n-1}^2 / (a_{n-2} a_n)`: `q_even = a`, `q_odd = b`.
//! Everything the crate reports about such a series is backed by outward
//! rounded interval arithmetic over arbitrary-precision dyadics, exact
//! rational arithmetic, or both, so a verdict of `Member` / `NotMember`
//! comes with a machine-checkable witness or floor rather than a float
//! that happened to land on the right side of zero.
//!
//! Module map:
//!
//! * [`rigor`] - dyadic big-floats with directed rounding, interval
//!   arithmetic, certified sign verdicts, and enclosures of pi, sin, cos,
//!   atan used by the winding-number machinery.
//! * [`quotient`] - the parameter specification and closed-form coefficient
//!   exponents.
//! * [`series`] - certified evaluation of the series, its alternating form
//!   `phi(x) = f(-x)`, its derivative, and values on circles in the plane.
//! * [`membership`] - the membership decision (witness search plus positive
//!   covers) and the closed-form parameter gates.
//! * [`certificates`] - sign chains on nested radii, winding-number zero
//!   counts, and the inequality checks that make a certificate self-contained.
//! * [`theta`] - the one-parameter diagonal family, its membership threshold
//!   constant, and the per-degree section thresholds.
//! * [`realroot`] - exact Sturm sequences over rationals and unit-disk root
//!   counting for polynomials with rational or enclosure coefficients.
//! * [`sequences`] - coefficient sequences derived from members, Jensen
//!   polynomials, and verifiers for the sequence properties.
//! * [`scan`] - parameter-plane scans, boundary localisation in `b`, and
//!   monotonicity audits.

pub mod certificates;
pub mod membership;
pub mod minimize;
pub mod quotient;
pub mod realroot;
pub mod rigor;
pub mod scan;
pub mod sequences;
pub mod series;
pub mod theta;

pub use quotient::QuotientSpec;
pub use rigor::{Dyadic, RigorousValue, SignVerdict};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters that violate a structural precondition (for example
    /// `a <= 1` or `a >= b` where a strict order is required).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Requested working precision below the supported minimum.
    #[error("precision {0} below minimum {min}", min = rigor::MIN_PRECISION)]
    PrecisionTooLow(u32),
    /// The procedure exhausted its precision ladder or sampling budget
    /// without reaching a certified answer.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// Two independent routes to the same fact produced contradicting
    /// certified answers. This indicates a bug and is never swallowed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
