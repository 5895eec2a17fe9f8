//! Estimation of the distribution of time displacements between paired
//! event streams, using only per-interval counts.
//!
//! The setting: a stream of source events (say, visits to a store) produces
//! a thinned, delayed stream of follow-up events (calls from visitors). Each
//! source event independently converts with probability `q`, and a converted
//! event appears after a random delay — its *displacement*. Nothing links an
//! individual follow-up back to its source; all that is observed are the
//! counts `n_t` and `k_t` of the two streams over consecutive intervals of
//! `ell` minutes.
//!
//! When displacements lie in `[0, m*ell]`, the conditional mean of `k_t`
//! given the current and `m` lagged source counts is `sum_j q*p_j*n_{t-j}`,
//! where `p_j` is the probability of landing `j` intervals ahead. Regressing
//! `k_t` on the lagged counts, clipping negative coefficients, and
//! normalizing therefore estimates `p`; partial sums of `p` give a step
//! approximation of the displacement CDF. See [`regress`] for the fits
//! (ordinary and simplex-constrained), [`model`] for the shared domain
//! types, [`simulate`] for the synthetic event generator, [`metrics`] for
//! analytic ground truth and L2 scoring, and [`experiment`] for the Monte
//! Carlo harness tying them together.
//!
//! The numeric core is generic over the scalar type via [`Scalar`]
//! (`f32`/`f64`); the simulator and harness are `f64`-only, and `*64`
//! aliases for the generic types live at the crate root.

use std::fmt;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

pub mod error;
pub mod experiment;
pub mod metrics;
pub mod model;
pub mod regress;
pub mod simulate;

pub use error::{Error, Result};

/// Floating-point scalar the numeric core is generic over.
pub trait Scalar:
    Float + NumAssign + FromPrimitive + ToPrimitive + fmt::Debug + fmt::Display + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `f64` specializations of the generic core types.
pub type Binning64 = model::Binning<f64>;
pub type ProbabilityEstimate64 = model::ProbabilityEstimate<f64>;
pub type StepCdf64 = model::StepCdf<f64>;
pub type TrueDistribution64 = model::TrueDistribution<f64>;
pub type LagDesign64 = regress::LagDesign<f64>;
pub type ConstrainedSolution64 = regress::ConstrainedSolution<f64>;
pub type TrueProbabilities64 = metrics::TrueProbabilities<f64>;
