//! Quadrature engine.
//!
//! Production rules ([`gauss_legendre_rule`], [`gauss_jacobi_rule`], the graded composite in
//! [`graded`]) and the adaptive Gauss–Kronrod oracle in [`adaptive`] share no nodes or
//! weights, so one can check the other.

pub mod adaptive;
pub mod graded;
mod jacobi;
mod legendre;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::EvalError;
use crate::Interval;

pub use adaptive::{integrate_adaptive, integrate_adaptive_with, AdaptiveConfig};
pub use graded::{integrate_singular, GradedRule, SingularEnd};
pub use jacobi::gauss_jacobi_rule;
pub use legendre::gauss_legendre_rule;

pub const MAX_POINTS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("rule size {n} is outside 1..=256")]
    PointsOutOfRange { n: usize },
    #[error("order {alpha} must be positive")]
    InvalidOrder { alpha: f64 },
    #[error("tridiagonal eigensolver did not converge for n = {n}")]
    EigenNonConvergence { n: usize },
    #[error("tolerance {tol} is below 1e-13")]
    InvalidTolerance { tol: f64 },
    #[error(
        "evaluation budget exceeded after {evaluations} evaluations (best value {value}, error estimate {estimate})"
    )]
    BudgetExceeded { value: f64, estimate: f64, evaluations: u64 },
    #[error("integral appears divergent or the integrand is too irregular (value {value}, error estimate {estimate})")]
    Divergent { value: f64, estimate: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Canonical {
    /// `[-1, 1]`
    Symmetric,
    /// `[0, 1]`
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RuleKind {
    Legendre,
    /// Weight `(1 - s)^(alpha - 1)` on `[0, 1]`.
    Jacobi {
        alpha: f64,
    },
}

/// A Gaussian rule on its canonical interval. Nodes are strictly increasing and interior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    canonical: Canonical,
    kind: RuleKind,
}

impl QuadRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn canonical(&self) -> Canonical {
        self.canonical
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Integral of the rule's weight function over the canonical interval.
    pub fn weight_integral(&self) -> f64 {
        match self.kind {
            RuleKind::Legendre => 2.0,
            RuleKind::Jacobi { alpha } => 1.0 / alpha,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Applies `rule` to `f` on `iv` through the affine map from the canonical interval.
///
/// For a Jacobi rule the weight `(1 - s)^(alpha - 1)` is part of the rule, so this computes
/// `|iv| * ∫_0^1 (1-s)^(alpha-1) f(a + s |iv|) ds`.
pub fn integrate<F>(mut f: F, iv: &Interval, rule: &QuadRule) -> Result<f64, EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let (a, b) = (iv.a(), iv.b());
    let (shift, scale) = match rule.canonical {
        Canonical::Symmetric => (0.5 * (a + b), 0.5 * (b - a)),
        Canonical::Unit => (a, b - a),
    };
    let mut sum = 0.0;
    for (x, w) in rule.iter() {
        sum += w * f(shift + scale * x)?;
    }
    Ok(sum * scale)
}

fn check_points(n: usize) -> Result<(), QuadError> {
    if (1..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(QuadError::PointsOutOfRange { n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn affine_mapping() {
        let r2 = gauss_legendre_rule(2).unwrap();
        assert!((integrate(|_| Ok(1.0), &iv(0.0, 1.0), &r2).unwrap() - 1.0).abs() < 1e-15);
        assert!((integrate(Ok, &iv(0.0, 1.0), &r2).unwrap() - 0.5).abs() < 1e-15);
        let r4 = gauss_legendre_rule(4).unwrap();
        let v = integrate(|x| Ok(x * x), &iv(0.0, 2.0), &r4).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_rule_through_integrate() {
        // ∫_0^2 (1 - t/2)^(-1/2) dt = 2 * 2
        let r = gauss_jacobi_rule(3, 0.5).unwrap();
        let v = integrate(|_| Ok(1.0), &iv(0.0, 2.0), &r).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
    }

    #[test]
    fn evaluation_errors_surface() {
        let r = gauss_legendre_rule(3).unwrap();
        let e = crate::expr::parse("log(x)").unwrap();
        assert!(integrate(|x| e.eval(x), &iv(-1.0, 1.0), &r).is_err());
    }
}
