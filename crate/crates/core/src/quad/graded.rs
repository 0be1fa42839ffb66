//! Composite rules for `∫_0^L (δ + d)^(α-1) φ(d) dd` with `d` the distance from the
//! singular end.
//!
//! Panels are graded geometrically toward both ends: toward `d = 0` for the power weight
//! and toward `d = L` because the smooth part is often only Hölder there (e.g. after the
//! substitution `u = h(t)` with `h'` vanishing at an endpoint). The innermost panel uses
//! a Gauss–Jacobi rule when `δ = 0`; every other panel uses Gauss–Legendre with the weight
//! folded in.

use super::{gauss_jacobi_rule, gauss_legendre_rule, QuadError, QuadRule};
use crate::expr::EvalError;
use crate::Interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradedRule {
    pub alpha: f64,
    /// Distance from `d = 0` to the kernel singularity (0 when it sits on the end).
    pub offset: f64,
    pub points: usize,
    pub ratio: f64,
    pub near_layers: usize,
    pub far_layers: usize,
}

impl GradedRule {
    pub fn new(alpha: f64) -> Self {
        Self { alpha, offset: 0.0, points: 15, ratio: 0.25, near_layers: 36, far_layers: 16 }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    /// Panel breakpoints on `[0, length]`, increasing.
    pub fn breakpoints(&self, length: f64) -> Vec<f64> {
        let half = 0.5 * length;
        let mut near: Vec<f64> = (0..=self.near_layers).map(|k| half * self.ratio.powi(k as i32)).collect();
        near.push(0.0);
        near.reverse();
        let far = (1..=self.far_layers).map(|k| half * self.ratio.powi(k as i32));
        near.extend(far.map(|e| length - e));
        near.push(length);
        near
    }

    /// `(distance, weight)` pairs for `∫_0^length (offset + d)^(α-1) φ(d) dd`.
    pub fn nodes(&self, length: f64) -> Result<Vec<(f64, f64)>, QuadError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(QuadError::InvalidOrder { alpha: self.alpha });
        }
        let gl = gauss_legendre_rule(self.points)?;
        let singular_first = self.offset == 0.0 && self.alpha != 1.0;
        let gj = if singular_first { Some(gauss_jacobi_rule(self.points, self.alpha)?) } else { None };
        let am1 = self.alpha - 1.0;
        let bp = self.breakpoints(length);
        let mut out = Vec::with_capacity((bp.len() - 1) * self.points);
        for (i, w) in bp.windows(2).enumerate() {
            let (p, q) = (w[0], w[1]);
            if q <= p {
                continue;
            }
            match (&gj, i) {
                (Some(gj), 0) => push_jacobi(&mut out, gj, q, self.alpha),
                _ => {
                    let (c, r) = (0.5 * (p + q), 0.5 * (q - p));
                    for (x, wx) in gl.iter() {
                        let d = c + r * x;
                        let kernel = if am1 == 0.0 { 1.0 } else { (self.offset + d).powf(am1) };
                        out.push((d, r * wx * kernel));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `∫_0^ε d^(α-1) φ(d) dd = ε^α ∫_0^1 (1-s)^(α-1) φ(ε(1-s)) ds`
fn push_jacobi(out: &mut Vec<(f64, f64)>, rule: &QuadRule, eps: f64, alpha: f64) {
    let scale = eps.powf(alpha);
    for (s, w) in rule.iter().collect::<Vec<_>>().into_iter().rev() {
        out.push((eps * (1.0 - s), scale * w));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularEnd {
    Left,
    Right,
}

/// `∫_iv dist(t, end)^(α-1) f(t) dt` for smooth `f`.
pub fn integrate_singular<F>(mut f: F, iv: &Interval, alpha: f64, end: SingularEnd) -> Result<f64, QuadError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let nodes = GradedRule::new(alpha).nodes(iv.width())?;
    let mut sum = 0.0;
    for (d, w) in nodes {
        let t = match end {
            SingularEnd::Left => iv.a() + d,
            SingularEnd::Right => iv.b() - d,
        };
        sum += w * f(t)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn beta(p: f64, q: f64) -> f64 {
        gamma(p) * gamma(q) / gamma(p + q)
    }

    #[test]
    fn closed_forms() {
        let v = integrate_singular(|_| Ok(1.0), &unit(), 0.5, SingularEnd::Right).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
        let v = integrate_singular(|_| Ok(1.0), &unit(), 1.0, SingularEnd::Right).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        // Beta(2, 1/2) = 4/3
        let v = integrate_singular(Ok, &unit(), 0.5, SingularEnd::Right).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn beta_integrals_across_orders() {
        for &alpha in &[0.1, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 2.7, 3.0] {
            for m in 0..4 {
                // ∫_0^1 t^m (1-t)^(α-1) dt
                let v = integrate_singular(|t: f64| Ok(t.powi(m)), &unit(), alpha, SingularEnd::Right).unwrap();
                let exact = beta(m as f64 + 1.0, alpha);
                assert!(((v - exact) / exact).abs() < 1e-12, "α {alpha} m {m}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn holder_smooth_part_converges() {
        // ∫_0^1 d^(α-1) sqrt(1-d) dd = Beta(α, 3/2): the far end is only Hölder
        for &alpha in &[0.2, 0.5, 1.7] {
            let rule = GradedRule::new(alpha);
            let v: f64 = rule.nodes(1.0).unwrap().iter().map(|(d, w)| w * (1.0 - d).sqrt()).sum();
            let exact = beta(alpha, 1.5);
            assert!(((v - exact) / exact).abs() < 1e-11, "α {alpha}: {v} vs {exact}");
        }
    }

    #[test]
    fn offset_kernel() {
        // ∫_0^1 (δ + d)^(α-1) dd = ((δ+1)^α - δ^α)/α
        for &delta in &[1e-12, 1e-6, 0.01, 0.5, 3.0] {
            for &alpha in &[0.1, 0.5, 2.5] {
                let v: f64 = GradedRule::new(alpha).with_offset(delta).nodes(1.0).unwrap().iter().map(|p| p.1).sum();
                let exact = ((delta + 1.0f64).powf(alpha) - delta.powf(alpha)) / alpha;
                assert!(((v - exact) / exact).abs() < 1e-11, "δ {delta} α {alpha}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn distances_are_sorted_and_inside() {
        let nodes = GradedRule::new(0.5).nodes(2.0).unwrap();
        assert!(nodes.windows(2).all(|p| p[0].0 < p[1].0));
        assert!(nodes[0].0 > 0.0 && nodes.last().unwrap().0 < 2.0);
        assert!(nodes.iter().all(|p| p.1 > 0.0));
    }

    #[test]
    fn rejects_non_positive_order() {
        assert!(integrate_singular(|_| Ok(1.0), &unit(), 0.0, SingularEnd::Left).is_err());
    }
}
