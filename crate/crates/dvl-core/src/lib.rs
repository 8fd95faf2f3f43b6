//! Exact-arithmetic machinery for deciding whether the Dirichlet series
//! `L(s,f) = sum f(n) n^{-s}` of a rational-valued periodic function `f`
//! vanishes at `s = 1` (and, conditionally, at integers `s = k > 1`).
//!
//! The decision procedure is purely algebraic: a periodic function supported
//! on coprime residues is identified with an element of the rational group
//! ring `Q[(Z/NZ)*]`, and vanishing of `L(1,f)` is equivalent to a family of
//! imprimitivity conditions (one per divisor of the period) plus a family of
//! exact linear conditions (one per prime divisor). Floating-point code never
//! participates in a verdict; it exists to cross-check the exact route.
//!
//! Module map:
//! - [`modarith`]: divisors, multiplicative functions, p-adic valuations and
//!   the cyclic-factor structure of `(Z/NZ)*`.
//! - [`groupring`]: sparse exact arithmetic in `Q[(Z/MZ)*]`, restriction
//!   between moduli, and the relative Galois generators `tau_p`.
//! - [`periodic`]: rational periodic functions, derived components `f_d`,
//!   restricted sums `M_d`, classification, JSON interchange format.
//! - [`characters`]: Dirichlet characters with exactly computed conductors,
//!   and the floating-point inner-product oracle.
//! - [`vanishing`]: the vanishing criterion itself — imprimitivity testing,
//!   projections, divisor/prime conditions, log coefficients, reports.
//! - [`numeric`]: digamma / Hurwitz-zeta oracles for `L(s,f)`, smooth-sum
//!   transforms, and order-of-zero analysis of Dirichlet polynomials.
//! - [`search`]: exhaustive searches over `{+-1}`-valued function families,
//!   data-parallel with a sequential fallback (feature `parallel`).
//! - [`fixtures`]: the bundled regression functions used throughout tests.
//!
//! ```
//! use dvl_core::{fixtures, vanishing};
//!
//! // Tengely's period-36 sign function has L(1,f) = 0, decided exactly:
//! let report = vanishing::decide_vanishing(&fixtures::tengely36(), 1);
//! assert_eq!(report.verdict, vanishing::Verdict::Vanishes);
//! assert!(report.divisor_conditions.iter().all(|c| c.holds));
//!
//! // while the nontrivial character mod 3 is primitive, so L(1, psi_3) != 0:
//! let psi3 = fixtures::unique_nontrivial_character_fn(3).unwrap();
//! assert_eq!(
//!     vanishing::decide_vanishing(&psi3, 1).verdict,
//!     vanishing::Verdict::Nonvanishing,
//! );
//! ```

pub mod characters;
pub mod fixtures;
pub mod groupring;
pub mod modarith;
pub mod numeric;
pub mod periodic;
pub mod search;
pub mod vanishing;

pub use modarith::Rational;

/// Numeric corroboration thresholds, centralized so code, tests, and docs
/// reference one record. Exact verdicts never consult any of these.
pub mod tolerances {
    /// Primitivity oracle: a character sum counts as nonzero when its
    /// modulus exceeds this times `1 + sum |f(a)|`.
    pub const PRIMITIVITY_EPS_SCALE: f64 = 1e-9;
    /// Residual allowed when rounding oracle outputs back onto the rational
    /// grid with denominator `phi(M) * M * lcm(denominators of f)`.
    pub const RATIONAL_ROUNDING: f64 = 1e-9;
    /// `|L(1,f)|` corroboration bound for exact vanishing verdicts.
    pub const L1_CORROBORATION: f64 = 1e-9;
    /// Series-decomposition comparisons at sample points `s > 1`.
    pub const SERIES_DECOMPOSITION: f64 = 1e-8;
    /// Smooth-split convention resolution threshold.
    pub const SMOOTH_SPLIT: f64 = 1e-5;
    /// Default truncation bound for smooth-monoid partial sums.
    pub const SMOOTH_SUM_BOUND: u64 = 1_000_000;
}

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("{divisor} does not divide {of}")]
    NotADivisor { divisor: u64, of: u64 },
    #[error("residue {residue} is not coprime to modulus {modulus}")]
    NotCoprime { residue: u64, modulus: u64 },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(u64, u64),
    #[error("function is not Dirichlet-type: nonzero value at {residue} with gcd({residue}, {modulus}) > 1")]
    NotDirichletType { residue: u64, modulus: u64 },
    #[error("sum of f over a period is nonzero; the series diverges at s = 1")]
    NonzeroPeriodSum,
    #[error("v_{p}({n}) = {valuation}, expected exactly 1")]
    ValuationNotOne { p: u64, n: u64, valuation: u32 },
    #[error("numeric rounding residual {residual:e} exceeds tolerance {tolerance:e}")]
    RoundingResidual { residual: f64, tolerance: f64 },
    #[error("evaluation point s = {0} must exceed 1")]
    SBelowOne(f64),
    #[error("exponent k = {0} out of range for this operation")]
    BadExponent(u32),
    #[error("search space of 2^{bits} candidates exceeds the 2^{limit} guard")]
    SearchTooLarge { bits: u32, limit: u32 },
    #[error("invalid function file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
