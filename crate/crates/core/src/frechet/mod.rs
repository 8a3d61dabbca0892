//! Discrete and continuous Fréchet distance.
//!
//! The discrete distance is the classic O(nm) dynamic program over vertex
//! pairs, returning both the value and a witness traversal. In rational mode
//! the value is reported as an exact squared distance and every comparison
//! is exact; in float mode decisions carry an explicit tolerance.
//!
//! The continuous decision builds the free-space diagram of the two curves
//! and propagates monotone reachability; the value is bracketed by bisection
//! on the decision. Interval endpoints come from quadratic roots in double
//! precision, with a symmetric 1e-12 band on emptiness tests — the sole
//! source of decision error.

mod continuous;
mod discrete;

pub use continuous::{continuous_decision, continuous_value, free_space_cell, DistanceBracket, FreeSpaceCell, FREE_SPACE_EPS};
pub use discrete::{
    discrete_decision, discrete_decision_with_tol, discrete_frechet, traversal_width,
    DiscreteTraversal,
};

use crate::geometry::Scalar;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// A Fréchet distance value. Rational curves report the exact squared
/// distance so threshold comparisons stay tolerance-free.
#[derive(Debug, Clone, PartialEq)]
pub enum FrechetValue {
    RationalSquared(BigRational),
    Float(f64),
}

impl FrechetValue {
    /// The distance as a double (square root applied in rational mode).
    pub fn distance_f64(&self) -> f64 {
        match self {
            FrechetValue::RationalSquared(sq) => sq.to_f64().unwrap_or(f64::NAN).sqrt(),
            FrechetValue::Float(d) => *d,
        }
    }

    /// Decides `value <= delta`. Exact in rational mode (compares squares);
    /// float mode allows `tol` slack on the threshold.
    pub fn le_threshold(&self, delta: &Scalar, tol: f64) -> crate::error::Result<bool> {
        match (self, delta) {
            (FrechetValue::RationalSquared(sq), Scalar::Rational(d)) => {
                if d < &BigRational::from_integer(0.into()) {
                    return Ok(false);
                }
                Ok(*sq <= d * d)
            }
            (FrechetValue::Float(v), Scalar::Float(d)) => Ok(*v <= d + tol),
            _ => Err(crate::error::Error::ScalarModeMismatch { context: "Fréchet threshold" }),
        }
    }
}
