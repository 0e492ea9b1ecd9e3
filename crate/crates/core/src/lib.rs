//! Approximate stochastic dominance between two univariate laws.
//!
//! Two relaxations of `F ≤st G` are provided:
//!
//! * the contamination index `π(F,G) = sup (G − F)`: `G` dominates `F` after
//!   trimming a fraction `π` of both populations;
//! * the crossing-mass index `γ(F,G)`: the share of quantile levels at which
//!   `G` falls below `F`, i.e. what must be Winsorized to restore the order.
//!
//! The crate computes both indices exactly on samples and in closed form for
//! normal laws, tests `H₀: index ≥ δ₀` against `H₁: index < δ₀` (rejection
//! is evidence of approximate dominance), gives the dual upper confidence
//! bounds, and ships the Monte Carlo harness used to check the procedures.
//!
//! The step-function code is generic over [`Scalar`], so it runs in `f64`,
//! `f32` or exact rationals; everything involving Φ works in `f64`.

pub mod bootstrap;
pub mod distributions;
mod error;
pub mod indices;
pub mod inference;
pub mod scalar;
pub mod simulation;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::Ratio<i128>;

/// A sample of `f64` observations.
pub type Empirical = distributions::EmpiricalDistribution<f64>;
pub type Empirical32 = distributions::EmpiricalDistribution<f32>;
pub type ExactEmpirical = distributions::EmpiricalDistribution<Exact>;

pub type Psi = indices::PsiCurve<f64>;
pub type ExactPsi = indices::PsiCurve<Exact>;
