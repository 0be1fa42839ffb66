//! Midpoint identities, their bounds and the Hermite–Hadamard chains.
//!
//! Every check returns a [`CheckReport`]. Failed shape hypotheses (convexity, symmetry, ...)
//! produce a `Skipped` report rather than an error; errors are reserved for evaluation and
//! quadrature failures.

mod bounds;
mod chain;
pub mod corpus;
mod identity;
mod kernel;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{evaluation_count, DiffError, EvalError, Expr};
use crate::fracint::{FracError, FracOrder, MonotoneMap};
use crate::quad::QuadError;
use crate::Interval;

pub use bounds::{bound_t1, bound_t2, bound_t3};
pub use chain::{hh_chain, ChainMode};
pub use identity::{identity_l1, identity_l2, FirstIdentitySides, SecondIdentitySides};
pub use kernel::{kernel_l1, kernel_l2, KernelKind, KernelSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HhfError {
    #[error("f is not differentiable: {0}")]
    NotDifferentiable(DiffError),
    #[error("exponent q = {q} must be a finite number >= 1")]
    InvalidQ { q: f64 },
    #[error(transparent)]
    Frac(#[from] FracError),
}

impl HhfError {
    /// True for precondition violations, false for numeric failures.
    pub fn is_hypothesis(&self) -> bool {
        match self {
            HhfError::Frac(e) => e.is_hypothesis(),
            _ => true,
        }
    }
}

impl From<EvalError> for HhfError {
    fn from(e: EvalError) -> Self {
        HhfError::Frac(FracError::Eval(e))
    }
}

impl From<QuadError> for HhfError {
    fn from(e: QuadError) -> Self {
        HhfError::Frac(FracError::Quad(e))
    }
}

/// One `(f, g, h, [a, b], α, q)` problem with its validated derivative and map.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub id: String,
    f: Expr,
    f_prime: Expr,
    g: Expr,
    map: MonotoneMap,
    order: FracOrder,
    q: f64,
}

impl ProblemInstance {
    pub fn new(
        id: impl Into<String>,
        f: Expr,
        g: Expr,
        map: MonotoneMap,
        order: FracOrder,
        q: f64,
    ) -> Result<Self, HhfError> {
        let f_prime = f.differentiate().map_err(HhfError::NotDifferentiable)?;
        if !(q >= 1.0 && q.is_finite()) {
            return Err(HhfError::InvalidQ { q });
        }
        Ok(Self { id: id.into(), f, f_prime, g, map, order, q })
    }

    /// Builds the instance from expressions, validating `h` on `iv`.
    pub fn from_parts(
        id: impl Into<String>,
        f: Expr,
        g: Expr,
        h: Expr,
        iv: Interval,
        alpha: f64,
        q: f64,
    ) -> Result<Self, HhfError> {
        let order = FracOrder::new(alpha)?;
        let map = MonotoneMap::validate(h, iv)?;
        Self::new(id, f, g, map, order, q)
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn f_prime(&self) -> &Expr {
        &self.f_prime
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.map
    }

    pub fn interval(&self) -> Interval {
        self.map.interval()
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.order.value()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn with_q(mut self, q: f64) -> Result<Self, HhfError> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(HhfError::InvalidQ { q });
        }
        self.q = q;
        Ok(self)
    }

    /// Same instance with `f` replaced by `c f`.
    pub fn scaled(&self, c: f64) -> Result<Self, HhfError> {
        let f = Expr::binary(crate::expr::BinaryOp::Mul, Expr::num(c), self.f.clone());
        Self::new(self.id.clone(), f, self.g.clone(), self.map.clone(), self.order, self.q)
    }

    pub fn description(&self) -> String {
        format!(
            "f = {}, g = {}, h = {}, [a, b] = {}, alpha = {}, q = {}",
            self.f,
            self.g,
            self.map.h(),
            self.interval(),
            self.alpha(),
            self.q
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    IdentityL1,
    IdentityL2,
    BoundT1,
    BoundT2,
    BoundT3,
    HhClassical,
    HhFejer,
    HhFractional,
    QuadOracle,
    /// A single operator evaluation, compared against the adaptive oracle.
    Integrate,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::IdentityL1,
        CheckKind::IdentityL2,
        CheckKind::BoundT1,
        CheckKind::BoundT2,
        CheckKind::BoundT3,
        CheckKind::HhClassical,
        CheckKind::HhFejer,
        CheckKind::HhFractional,
        CheckKind::QuadOracle,
        CheckKind::Integrate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::IdentityL1 => "identity-l1",
            CheckKind::IdentityL2 => "identity-l2",
            CheckKind::BoundT1 => "bound-t1",
            CheckKind::BoundT2 => "bound-t2",
            CheckKind::BoundT3 => "bound-t3",
            CheckKind::HhClassical => "hh-classical",
            CheckKind::HhFejer => "hh-fejer",
            CheckKind::HhFractional => "hh-fractional",
            CheckKind::QuadOracle => "quad-oracle",
            CheckKind::Integrate => "integrate",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = CheckKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown check `{s}` (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A hypothesis of the check did not hold; nothing was compared.
    Skipped,
    /// Evaluation or quadrature failed.
    Error,
}

/// Outcome of the shape checks a report depends on. `None` means not applicable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub convex: Option<bool>,
    pub symmetric: Option<bool>,
    pub monotone_h: Option<bool>,
}

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        [self.convex, self.symmetric, self.monotone_h].iter().all(|h| h.unwrap_or(true))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub instance_id: String,
    pub check: CheckKind,
    pub status: CheckStatus,
    pub pass: bool,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// Middle term of a three-term chain.
    pub middle: Option<f64>,
    /// `|lhs - rhs|` for identities.
    pub residual: Option<f64>,
    /// `rhs - |lhs|` for bounds, smallest gap for chains.
    pub slack: Option<f64>,
    pub tol: f64,
    pub hypothesis: Hypotheses,
    /// Named intermediate quantities, for tracing a value back to its ingredients.
    pub pieces: BTreeMap<String, f64>,
    pub description: String,
    pub evals: u64,
    pub seconds: f64,
    pub message: Option<String>,
}

impl CheckReport {
    pub fn new(instance_id: impl Into<String>, check: CheckKind, description: impl Into<String>) -> Self {
        Self {
            instance_id: instance_id.into(),
            check,
            status: CheckStatus::Error,
            pass: false,
            lhs: None,
            rhs: None,
            middle: None,
            residual: None,
            slack: None,
            tol: 0.0,
            hypothesis: Hypotheses::default(),
            pieces: BTreeMap::new(),
            description: description.into(),
            evals: 0,
            seconds: 0.0,
            message: None,
        }
    }

    pub(crate) fn piece(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.pieces.insert(name.to_owned(), value);
        }
    }

    pub(crate) fn set_pass(&mut self, pass: bool) {
        self.pass = pass;
        self.status = if pass { CheckStatus::Pass } else { CheckStatus::Fail };
    }

    pub(crate) fn skip(&mut self, message: impl Into<String>) {
        self.pass = false;
        self.status = CheckStatus::Skipped;
        self.message = Some(message.into());
    }

    /// Report for a check that could not be evaluated.
    pub fn from_error(
        instance_id: impl Into<String>,
        check: CheckKind,
        description: impl Into<String>,
        err: &HhfError,
    ) -> Self {
        let mut r = Self::new(instance_id, check, description);
        r.status = if err.is_hypothesis() { CheckStatus::Skipped } else { CheckStatus::Error };
        r.message = Some(err.to_string());
        if let HhfError::Frac(FracError::NotMonotone { .. }) = err {
            r.hypothesis.monotone_h = Some(false);
        }
        r
    }
}

/// Tolerances used by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Identities pass when `residual <= identity_rel_tol * (1 + |lhs|)`.
    pub identity_rel_tol: f64,
    /// Bounds pass when `slack >= -slack_tol`.
    pub slack_tol: f64,
    /// Chains pass when each ordering holds within this.
    pub chain_tol: f64,
    /// Replaces whichever tolerance the check would use.
    pub tol_override: Option<f64>,
    /// Evaluation budget for adaptive integrals.
    pub budget: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { identity_rel_tol: 1e-7, slack_tol: 1e-9, chain_tol: 1e-10, tol_override: None, budget: 10_000_000 }
    }
}

impl CheckConfig {
    pub fn with_tol(mut self, tol: Option<f64>) -> Self {
        self.tol_override = tol;
        self
    }

    pub(crate) fn identity_tol(&self, lhs: f64) -> f64 {
        self.tol_override.unwrap_or(self.identity_rel_tol * (1.0 + lhs.abs()))
    }

    pub(crate) fn slack_tol(&self) -> f64 {
        self.tol_override.unwrap_or(self.slack_tol)
    }

    pub(crate) fn chain_tol(&self) -> f64 {
        self.tol_override.unwrap_or(self.chain_tol)
    }
}

/// Runs `body`, filling in evaluation count and wall time; errors become error reports.
pub(crate) fn timed<F>(instance_id: &str, check: CheckKind, description: String, body: F) -> CheckReport
where
    F: FnOnce(&mut CheckReport) -> Result<(), HhfError>,
{
    let evals0 = evaluation_count();
    let start = Instant::now();
    let mut report = CheckReport::new(instance_id, check, description.clone());
    if let Err(e) = body(&mut report) {
        let known = report.hypothesis;
        report = CheckReport::from_error(instance_id, check, description, &e);
        // keep the hypotheses established before the failure
        let h = &mut report.hypothesis;
        h.convex = h.convex.or(known.convex);
        h.symmetric = h.symmetric.or(known.symmetric);
        h.monotone_h = h.monotone_h.or(known.monotone_h);
    }
    report.evals = evaluation_count() - evals0;
    report.seconds = start.elapsed().as_secs_f64();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn check_names_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!("identity".parse::<CheckKind>().is_err());
    }

    #[test]
    fn instance_validation() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        let p = |s: &str| parse(s).unwrap();
        assert!(ProblemInstance::from_parts("ok", p("x^2"), p("1"), p("x"), iv, 0.5, 1.0).is_ok());
        let e = ProblemInstance::from_parts("abs", p("abs(x)"), p("1"), p("x"), iv, 0.5, 1.0).unwrap_err();
        assert!(matches!(e, HhfError::NotDifferentiable(_)) && e.is_hypothesis());
        let e = ProblemInstance::from_parts("q", p("x"), p("1"), p("x"), iv, 0.5, 0.5).unwrap_err();
        assert!(matches!(e, HhfError::InvalidQ { .. }));
        let e = ProblemInstance::from_parts("h", p("x"), p("1"), p("-x"), iv, 0.5, 1.0).unwrap_err();
        assert!(e.is_hypothesis());
        let e = ProblemInstance::from_parts("alpha", p("x"), p("1"), p("x"), iv, 0.01, 1.0).unwrap_err();
        assert!(e.is_hypothesis());
    }

    #[test]
    fn tolerance_override() {
        let cfg = CheckConfig::default();
        assert_eq!(cfg.identity_tol(1.0), 2e-7);
        let cfg = cfg.with_tol(Some(1e-30));
        assert_eq!(cfg.identity_tol(1.0), 1e-30);
        assert_eq!(cfg.slack_tol(), 1e-30);
    }
}
