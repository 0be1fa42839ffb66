//! Operator evaluation.
//!
//! The production path substitutes `u = h(t)`: the integral becomes
//! `∫ |X - u|^(α-1) φ(h^{-1}(u)) du` with `X = h(x)`, a pure power-law weight in the distance
//! from the singular end, which the graded rules handle directly. `h'` drops out.

use crate::expr::{EvalError, Expr};
use crate::quad::GradedRule;
use crate::special::gamma;

use super::{FracError, FracOrder, MonotoneMap, Side};

/// Which operator to apply: side, order, integration terminals and the map `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub side: Side,
    pub order: FracOrder,
    pub lower: f64,
    pub upper: f64,
    pub map: MonotoneMap,
}

impl OperatorSpec {
    pub fn new(side: Side, order: FracOrder, lower: f64, upper: f64, map: MonotoneMap) -> Result<Self, FracError> {
        map.check_point(lower)?;
        map.check_point(upper)?;
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(FracError::BadTerminals { side, lower, upper, at: f64::NAN });
        }
        Ok(Self { side, order, lower, upper, map })
    }

    /// The standard operator evaluated at `at`: terminals `(a, at)` on the left,
    /// `(at, b)` on the right.
    pub fn standard(side: Side, order: FracOrder, map: MonotoneMap, at: f64) -> Result<Self, FracError> {
        let iv = map.interval();
        match side {
            Side::Left => Self::new(side, order, iv.a(), at, map),
            Side::Right => Self::new(side, order, at, iv.b(), map),
        }
    }

    /// Terminal where the kernel is anchored: `lower` on the left, `upper` on the right.
    pub fn anchor(&self) -> f64 {
        match self.side {
            Side::Left => self.lower,
            Side::Right => self.upper,
        }
    }

    fn check_eval_point(&self, at: f64) -> Result<(), FracError> {
        self.map.check_point(at)?;
        let slack = 4.0 * f64::EPSILON * at.abs().max(1.0);
        let ok = match self.side {
            Side::Left => self.upper <= at + slack,
            Side::Right => self.lower >= at - slack,
        };
        if ok {
            Ok(())
        } else {
            Err(FracError::BadTerminals { side: self.side, lower: self.lower, upper: self.upper, at })
        }
    }

    /// Nodes `t_i` and weights `w_i` with `J φ(at) ≈ Σ w_i φ(t_i)`, `1/Γ(α)` included.
    pub fn nodes(&self, at: f64) -> Result<OperatorNodes, FracError> {
        self.check_eval_point(at)?;
        let alpha = self.order.value();
        let x = self.map.eval(at)?;
        let ulo = self.map.eval(self.lower)?;
        let uhi = self.map.eval(self.upper)?;
        let length = uhi - ulo;
        let mut nodes = OperatorNodes { t: Vec::new(), w: Vec::new() };
        if length.is_nan() || length <= 0.0 {
            return Ok(nodes);
        }
        let offset = match self.side {
            Side::Left => (x - uhi).max(0.0),
            Side::Right => (ulo - x).max(0.0),
        };
        let inv_gamma = 1.0 / gamma(alpha);
        let raw = GradedRule::new(alpha).with_offset(offset).nodes(length)?;
        nodes.t.reserve(raw.len());
        nodes.w.reserve(raw.len());
        for (d, w) in raw {
            let u = match self.side {
                Side::Left => uhi - d,
                Side::Right => ulo + d,
            };
            nodes.t.push(self.map.inverse(u)?);
            nodes.w.push(w * inv_gamma);
        }
        Ok(nodes)
    }
}

/// Precomputed quadrature for one operator at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNodes {
    t: Vec<f64>,
    w: Vec<f64>,
}

impl OperatorNodes {
    pub fn apply<F>(&self, mut phi: F) -> Result<f64, EvalError>
    where
        F: FnMut(f64) -> Result<f64, EvalError>,
    {
        let mut sum = 0.0;
        for (&t, &w) in self.t.iter().zip(&self.w) {
            sum += w * phi(t)?;
        }
        Ok(sum)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// `J φ(at)` for an expression `φ`.
pub fn frac_int_h(spec: &OperatorSpec, f: &Expr, at: f64) -> Result<f64, FracError> {
    frac_int_h_fn(spec, |t| f.eval(t), at)
}

/// `J φ(at)` for an arbitrary evaluator `φ(t)`.
pub fn frac_int_h_fn<F>(spec: &OperatorSpec, phi: F, at: f64) -> Result<f64, FracError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    Ok(spec.nodes(at)?.apply(phi)?)
}

/// Same operator computed in `t` without the substitution: the kernel is factored as
/// `|x - t|^(α-1) Q(t)^(α-1)` with `Q` the divided difference of `h`, and `h'` stays in
/// the integrand. Slower, used to cross-check the production path.
pub fn frac_int_h_direct<F>(spec: &OperatorSpec, mut phi: F, at: f64) -> Result<f64, FracError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    spec.check_eval_point(at)?;
    let alpha = spec.order.value();
    let map = &spec.map;
    let width = spec.upper - spec.lower;
    if width.is_nan() || width <= 0.0 {
        return Ok(0.0);
    }
    let (offset, start) = match spec.side {
        Side::Left => ((at - spec.upper).max(0.0), spec.upper),
        Side::Right => ((spec.lower - at).max(0.0), spec.lower),
    };
    let hx = map.eval(at)?;
    let scale = map.interval().width();
    let nodes = GradedRule::new(alpha).with_offset(offset).nodes(width)?;
    let mut sum = 0.0;
    for (e, w) in nodes {
        let t = match spec.side {
            Side::Left => start - e,
            Side::Right => start + e,
        };
        let gap = (at - t).abs();
        let q =
            if gap > 1e-5 * scale { ((hx - map.eval(t)?) / (at - t)).abs() } else { map.derivative(0.5 * (at + t))? };
        sum += w * q.powf(alpha - 1.0) * map.derivative(t)? * phi(t)?;
    }
    Ok(sum / gamma(alpha))
}
