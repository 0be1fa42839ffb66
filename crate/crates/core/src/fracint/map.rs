use crate::expr::{check_property, EvalError, Expr, Property, PropertyReport};
use crate::Interval;

use super::FracError;

/// A map `h` checked to be strictly increasing on an interval, with its derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneMap {
    h: Expr,
    h_prime: Expr,
    interval: Interval,
    identity: bool,
    report: PropertyReport,
    range: (f64, f64),
}

impl MonotoneMap {
    /// Validates `h` on `iv`: differentiable and strictly increasing on the check grid.
    pub fn validate(h: Expr, iv: Interval) -> Result<Self, FracError> {
        let h_prime = h.differentiate()?;
        let report = check_property(&h, &iv, Property::StrictlyIncreasing)?;
        if !report.pass {
            return Err(FracError::NotMonotone { interval: iv, report });
        }
        let range = (h.eval(iv.a())?, h.eval(iv.b())?);
        let identity = h.is_identity();
        Ok(Self { h, h_prime, interval: iv, identity, report, range })
    }

    pub fn identity(iv: Interval) -> Self {
        Self::validate(Expr::Var, iv).expect("identity map is increasing")
    }

    pub fn h(&self) -> &Expr {
        &self.h
    }

    pub fn h_prime(&self) -> &Expr {
        &self.h_prime
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn report(&self) -> &PropertyReport {
        &self.report
    }

    /// `(h(a), h(b))`.
    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        if self.identity {
            Ok(t)
        } else {
            self.h.eval(t)
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64, EvalError> {
        if self.identity {
            Ok(1.0)
        } else {
            self.h_prime.eval(t)
        }
    }

    pub(crate) fn check_point(&self, t: f64) -> Result<(), FracError> {
        if self.interval.contains(t) {
            Ok(())
        } else {
            Err(FracError::OutsideInterval { point: t, interval: self.interval })
        }
    }

    /// `h^{-1}(u)` by safeguarded Newton iteration inside the validated interval.
    ///
    /// Values of `u` outside `[h(a), h(b)]` clamp to the nearest endpoint.
    pub fn inverse(&self, u: f64) -> Result<f64, EvalError> {
        if self.identity {
            return Ok(u);
        }
        let (mut lo, mut hi) = (self.interval.a(), self.interval.b());
        let (ulo, uhi) = self.range;
        if u <= ulo {
            return Ok(lo);
        }
        if u >= uhi {
            return Ok(hi);
        }
        // secant start is exact for affine maps
        let mut t = lo + (hi - lo) * (u - ulo) / (uhi - ulo);
        for _ in 0..200 {
            let r = self.h.eval(t)? - u;
            if r == 0.0 {
                return Ok(t);
            }
            if r < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let d = self.h_prime.eval(t)?;
            let newton = t - r / d;
            let next = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            let step = (next - t).abs();
            t = next;
            if step <= 2.0 * f64::EPSILON * t.abs() || hi - lo <= 2.0 * f64::EPSILON * t.abs() {
                break;
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn map(text: &str, a: f64, b: f64) -> MonotoneMap {
        MonotoneMap::validate(parse(text).unwrap(), Interval::new(a, b).unwrap()).unwrap()
    }

    #[test]
    fn inverse_round_trips() {
        for (text, a, b) in [("x^2", 0.0, 1.0), ("exp(x) - 1", 1.0, 2.0), ("x^3 + x", -1.0, 2.0), ("log(x)", 0.5, 4.0)]
        {
            let m = map(text, a, b);
            for i in 0..=100 {
                let t = a + (b - a) * i as f64 / 100.0;
                let back = m.inverse(m.eval(t).unwrap()).unwrap();
                assert!((back - t).abs() < 1e-13 * (1.0 + t.abs()), "{text}: {t} -> {back}");
            }
        }
    }

    #[test]
    fn square_root_near_flat_end() {
        let m = map("x^2", 0.0, 1.0);
        for u in [1e-20, 1e-12, 1e-6] {
            let t = m.inverse(u).unwrap();
            assert!(((t - f64::sqrt(u)) / f64::sqrt(u)).abs() < 1e-12, "{u}: {t}");
        }
    }

    #[test]
    fn rejects_non_monotone_and_abs() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        assert!(matches!(MonotoneMap::validate(parse("x^2").unwrap(), iv), Err(FracError::NotMonotone { .. })));
        assert!(matches!(MonotoneMap::validate(parse("abs(x)").unwrap(), iv), Err(FracError::NotDifferentiable(_))));
        assert!(matches!(MonotoneMap::validate(parse("log(x)").unwrap(), iv), Err(FracError::Eval(_))));
    }

    #[test]
    fn identity_shortcut() {
        let m = MonotoneMap::identity(Interval::new(0.0, 1.0).unwrap());
        assert!(m.is_identity());
        assert_eq!(m.inverse(0.3).unwrap(), 0.3);
        assert_eq!(m.derivative(0.3).unwrap(), 1.0);
    }
}
