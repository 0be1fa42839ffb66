//! Fractional integrals with respect to a monotone map `h`.
//!
//! For `side = Left` and evaluation point `x`,
//!
//! ```text
//! J φ(x) = 1/Γ(α) ∫_lo^hi [h(x) - h(t)]^(α-1) h'(t) φ(t) dt,   hi <= x
//! ```
//!
//! and for `side = Right` the kernel is `[h(t) - h(x)]^(α-1)` with `lo >= x`. The usual
//! operators take `(lo, hi) = (a, x)` and `(x, b)`; other terminals give the half-interval
//! integrals that show up in the midpoint identities.

mod map;
mod norm;
mod operator;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{DiffError, EvalError, PropertyReport};
use crate::quad::QuadError;
use crate::special;
use crate::Interval;

pub use map::MonotoneMap;
pub use norm::{xh_sup_norm, xh_weighted_sup_norm, xhp_norm, NormResult};
pub use operator::{frac_int_h, frac_int_h_direct, frac_int_h_fn, OperatorNodes, OperatorSpec};

/// Smallest order accepted by the operators; the graded rules are not tuned below it.
pub const ALPHA_FLOOR: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("order {alpha} is below the supported floor 0.1")]
    OrderBelowFloor { alpha: f64 },
    #[error("map is not strictly increasing on {interval} (worst margin {} at x = {})", report.worst_margin, report.witness)]
    NotMonotone { interval: Interval, report: PropertyReport },
    #[error("map is not differentiable: {0}")]
    NotDifferentiable(#[from] DiffError),
    #[error("point {point} lies outside the validated interval {interval}")]
    OutsideInterval { point: f64, interval: Interval },
    #[error("terminals [{lower}, {upper}] do not fit a {side} operator evaluated at {at}")]
    BadTerminals { side: Side, lower: f64, upper: f64, at: f64 },
    #[error("norm exponent {p} must be at least 1")]
    InvalidExponent { p: f64 },
    #[error("gamma is only evaluated for positive arguments, got {x}")]
    GammaDomain { x: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

impl FracError {
    /// Violations of a stated precondition, as opposed to evaluation or numeric failures.
    pub fn is_hypothesis(&self) -> bool {
        !matches!(self, FracError::Quad(_))
    }
}

/// Fractional order `α >= 0.1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if alpha.is_finite() && alpha >= ALPHA_FLOOR {
            Ok(Self(alpha))
        } else {
            Err(FracError::OrderBelowFloor { alpha })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = FracError;

    fn try_from(alpha: f64) -> Result<Self, Self::Error> {
        FracOrder::new(alpha)
    }
}

impl From<FracOrder> for f64 {
    fn from(o: FracOrder) -> f64 {
        o.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(format!("unknown side `{other}` (expected left or right)")),
        }
    }
}

/// Γ(x) for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64, FracError> {
    if x > 0.0 && x.is_finite() {
        Ok(special::gamma(x))
    } else {
        Err(FracError::GammaDomain { x })
    }
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma_fn(x: f64) -> Result<f64, FracError> {
    if x > 0.0 && x.is_finite() {
        Ok(special::ln_gamma(x))
    } else {
        Err(FracError::GammaDomain { x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_floor() {
        assert!(FracOrder::new(0.1).is_ok());
        assert!(matches!(FracOrder::new(0.05), Err(FracError::OrderBelowFloor { .. })));
        assert!(FracOrder::new(f64::NAN).is_err());
        let o: FracOrder = serde_json::from_str("0.5").unwrap();
        assert_eq!(o.value(), 0.5);
        assert!(serde_json::from_str::<FracOrder>("0.01").is_err());
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert!((gamma_fn(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-14);
        assert!((gamma_fn(3.5).unwrap() - 3.323_350_970_447_843).abs() < 1e-13);
        assert!(gamma_fn(0.0).is_err());
        assert!(ln_gamma_fn(-1.0).is_err());
    }

    #[test]
    fn side_parsing() {
        assert_eq!("left".parse::<Side>().unwrap(), Side::Left);
        assert!("up".parse::<Side>().is_err());
    }
}
