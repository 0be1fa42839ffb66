//! Upper bounds on the identity left sides under convexity of `|f'|` (or `|f'|^q`).

use super::identity::{FirstIdentitySides, SecondIdentitySides};
use super::{timed, CheckConfig, CheckKind, CheckReport, HhfError, Hypotheses, ProblemInstance};
use crate::expr::{check_property_fn, Property};
use crate::fracint::{xh_sup_norm, xh_weighted_sup_norm};
use crate::quad::GradedRule;
use crate::special::gamma;
use crate::Interval;

/// Quantities shared by the bounds.
struct Setup {
    alpha: f64,
    span: f64,
    delta1: f64,
    delta2: f64,
    fp_a: f64,
    fp_b: f64,
    g_left: f64,
    g_right: f64,
}

impl Setup {
    fn new(inst: &ProblemInstance, r: &mut CheckReport) -> Result<Self, HhfError> {
        let iv = inst.interval();
        let map = inst.map();
        let (ha, hb) = map.range();
        let hm = map.eval(iv.midpoint())?;
        let fp = inst.f_prime();
        let s = Setup {
            alpha: inst.alpha(),
            span: hb - ha,
            delta1: hm - ha,
            delta2: hb - hm,
            fp_a: fp.eval(ha)?.abs(),
            fp_b: fp.eval(hb)?.abs(),
            g_left: xh_sup_norm(inst.g(), &iv.left_half())?.value,
            g_right: xh_sup_norm(inst.g(), &iv.right_half())?.value,
        };
        r.piece("span", s.span);
        r.piece("delta1", s.delta1);
        r.piece("delta2", s.delta2);
        r.piece("abs_fprime_a", s.fp_a);
        r.piece("abs_fprime_b", s.fp_b);
        r.piece("sup_g_left", s.g_left);
        r.piece("sup_g_right", s.g_right);
        r.piece("weighted_sup_g_left", xh_weighted_sup_norm(inst.g(), map, &iv.left_half())?.value);
        r.piece("weighted_sup_g_right", xh_weighted_sup_norm(inst.g(), map, &iv.right_half())?.value);
        Ok(s)
    }

    /// `near·[Δ^(α+1) H/(α+1) - Δ^(α+2)/(α+2)] + far·Δ^(α+2)/(α+2)`
    fn bracket(&self, delta: f64, near: f64, far: f64) -> f64 {
        let a = self.alpha;
        let top = delta.powf(a + 2.0) / (a + 2.0);
        near * (delta.powf(a + 1.0) * self.span / (a + 1.0) - top) + far * top
    }
}

/// Convexity of `|f'|^q` on `[h(a), h(b)]`; records the outcome and skips the report if it fails.
fn derivative_convex(inst: &ProblemInstance, q: f64, r: &mut CheckReport) -> Result<bool, HhfError> {
    let (ha, hb) = inst.map().range();
    let fp = inst.f_prime();
    let range = Interval::new(ha, hb).map_err(|_| crate::expr::EvalError::NonFinite { x: ha })?;
    let report = check_property_fn(&|u| Ok(fp.eval(u)?.abs().powf(q)), None, &range, Property::Convex)?;
    r.hypothesis =
        Hypotheses { convex: Some(report.pass), symmetric: None, monotone_h: Some(inst.map().report().pass) };
    if !report.pass {
        r.piece("convexity_worst_margin", report.worst_margin);
        r.piece("convexity_witness", report.witness);
        let what = if q == 1.0 { "|f'|".to_owned() } else { format!("|f'|^{q}") };
        r.skip(format!(
            "{what} is not convex on [{ha}, {hb}] (margin {} at u = {})",
            report.worst_margin, report.witness
        ));
    }
    Ok(report.pass)
}

fn finish(r: &mut CheckReport, cfg: &CheckConfig, lhs: f64, rhs: f64) {
    let slack = rhs - lhs.abs();
    r.lhs = Some(lhs);
    r.rhs = Some(rhs);
    r.slack = Some(slack);
    r.tol = cfg.slack_tol();
    r.set_pass(slack >= -r.tol);
}

/// Bound on the first identity's left side when `|f'|` is convex.
pub fn bound_t1(inst: &ProblemInstance, cfg: &CheckConfig) -> CheckReport {
    timed(&inst.id, CheckKind::BoundT1, inst.description(), |r| {
        r.tol = cfg.slack_tol();
        if !derivative_convex(inst, 1.0, r)? {
            return Ok(());
        }
        let s = Setup::new(inst, r)?;
        let scale = s.span * gamma(s.alpha + 1.0);
        let left = s.g_left / scale * s.bracket(s.delta1, s.fp_a, s.fp_b);
        let right = s.g_right / scale * s.bracket(s.delta2, s.fp_b, s.fp_a);
        r.piece("rhs_left", left);
        r.piece("rhs_right", right);
        let lhs = FirstIdentitySides::compute(inst)?.lhs;
        finish(r, cfg, lhs, left + right);
        Ok(())
    })
}

/// Power-mean bound on the first identity's left side when `|f'|^q` is convex.
pub fn bound_t2(inst: &ProblemInstance, cfg: &CheckConfig) -> CheckReport {
    timed(&inst.id, CheckKind::BoundT2, inst.description(), |r| {
        r.tol = cfg.slack_tol();
        let q = inst.q();
        r.piece("q", q);
        if !derivative_convex(inst, q, r)? {
            return Ok(());
        }
        let s = Setup::new(inst, r)?;
        let a = s.alpha;
        let (pa, pb) = (s.fp_a.powf(q), s.fp_b.powf(q));
        let half = |norm: f64, t: f64, prefactor_base: f64| {
            norm / gamma(a) * (prefactor_base / (a * (a + 1.0))).powf(1.0 - 1.0 / q) * (t / (a * s.span)).powf(1.0 / q)
        };
        let t1 = s.bracket(s.delta1, pa, pb);
        let t2 = s.bracket(s.delta2, pb, pa);
        let left = half(s.g_left, t1, s.delta1.powf(a + 1.0));
        let right = half(s.g_right, t2, s.delta2.powf(a + 1.0));
        // same expression with Δ in place of Δ^(α+1) inside the prefactor
        let printed = half(s.g_left, t1, s.delta1) + half(s.g_right, t2, s.delta2);
        r.piece("rhs_left", left);
        r.piece("rhs_right", right);
        r.piece("printed_prefactor_rhs", printed);
        let lhs = FirstIdentitySides::compute(inst)?.lhs;
        finish(r, cfg, lhs, left + right);
        Ok(())
    })
}

/// Bound on the second identity's left side for `h = x` when `|f'|` is convex.
pub fn bound_t3(inst: &ProblemInstance, cfg: &CheckConfig) -> CheckReport {
    timed(&inst.id, CheckKind::BoundT3, inst.description(), |r| {
        r.tol = cfg.slack_tol();
        if !inst.map().is_identity() {
            r.hypothesis.monotone_h = Some(inst.map().report().pass);
            r.skip(format!("this bound requires h = x, got h = {}", inst.map().h()));
            return Ok(());
        }
        if !derivative_convex(inst, 1.0, r)? {
            return Ok(());
        }
        let s = Setup::new(inst, r)?;
        let (a, h) = (s.alpha, s.span);
        let ha = h.powf(a);
        // ∫_0^d [H^(α-1) - (H-s)^(α-1) + s^(α-1)] ds
        let k = |d: f64| d * h.powf(a - 1.0) + ha * f64::exp_m1(a * f64::ln_1p(-d / h)) / a + d.powf(a) / a;
        let mut left = 0.0;
        let mut right = 0.0;
        for (d, w) in GradedRule::new(1.0).nodes(0.5 * h)? {
            let kd = k(d);
            left += w * kd * ((h - d) * s.fp_a + d * s.fp_b);
            right += w * kd * (d * s.fp_a + (h - d) * s.fp_b);
        }
        let scale = h * gamma(a);
        let (left, right) = (s.g_left / scale * left, s.g_right / scale * right);
        r.piece("rhs_left", left);
        r.piece("rhs_right", right);
        let lhs = SecondIdentitySides::compute(inst)?.lhs;
        finish(r, cfg, lhs, left + right);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::hhf::CheckStatus;

    fn inst(f: &str, g: &str, h: &str, alpha: f64, a: f64, b: f64, q: f64) -> ProblemInstance {
        let iv = Interval::new(a, b).unwrap();
        let p = |s: &str| parse(s).unwrap();
        ProblemInstance::from_parts("t", p(f), p(g), p(h), iv, alpha, q).unwrap()
    }

    #[test]
    fn square_anchor() {
        let cfg = CheckConfig::default();
        let p = inst("x^2", "1", "x", 1.0, 0.0, 1.0, 1.0);
        let r1 = bound_t1(&p, &cfg);
        assert_eq!(r1.status, CheckStatus::Pass);
        assert!((r1.lhs.unwrap().abs() - 1.0 / 12.0).abs() < 1e-12);
        assert!((r1.rhs.unwrap() - 0.25).abs() < 1e-12);
        assert!((r1.slack.unwrap() - 1.0 / 6.0).abs() < 1e-12);
        let r2 = bound_t2(&p, &cfg);
        assert!((r2.rhs.unwrap() - 0.25).abs() < 1e-12);
        let r2 = bound_t2(&p.clone().with_q(2.0).unwrap(), &cfg);
        assert_eq!(r2.status, CheckStatus::Pass);
        // |f'| = 2u has f'(a) = 0, so the third bound evaluates to 1/12 + 1/6
        let r3 = bound_t3(&p, &cfg);
        assert!((r3.rhs.unwrap() - 0.25).abs() < 1e-12, "{r3:?}");
        assert!((r3.slack.unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn q_one_matches_first_bound() {
        let cfg = CheckConfig::default();
        for (f, g, h, alpha) in
            [("exp(x)", "x*(1 - x) + 0.1", "x^2", 0.5), ("x^4", "1 + sin(3.141592653589793*x)^2", "exp(x) - 1", 2.0)]
        {
            let p = inst(f, g, h, alpha, 1.0, 2.0, 1.0);
            let (r1, r2) = (bound_t1(&p, &cfg), bound_t2(&p, &cfg));
            assert!(((r1.rhs.unwrap() - r2.rhs.unwrap()) / r1.rhs.unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_f_has_zero_left_side() {
        let cfg = CheckConfig::default();
        let p = inst("3*x + 1", "1", "x", 0.5, 0.0, 1.0, 2.0);
        for r in [bound_t1(&p, &cfg), bound_t2(&p, &cfg), bound_t3(&p, &cfg)] {
            assert_eq!(r.status, CheckStatus::Pass, "{r:?}");
            assert!(r.lhs.unwrap().abs() < 1e-12);
            assert!((r.slack.unwrap() - r.rhs.unwrap()).abs() < 1e-12);
        }
        // an asymmetric h leaves a nonzero left side, still under the bound
        let p = inst("3*x + 1", "x*(1 - x)", "x^2", 0.5, 0.0, 1.0, 2.0);
        for r in [bound_t1(&p, &cfg), bound_t2(&p, &cfg)] {
            assert_eq!(r.status, CheckStatus::Pass, "{r:?}");
            assert!(r.lhs.unwrap().abs() > 1e-3);
        }
    }

    #[test]
    fn hypotheses_skip() {
        let cfg = CheckConfig::default();
        // |f'| = |3x^2 - 1| is not convex on [0, 1]
        let p = inst("x^3 - x", "1", "x", 0.5, 0.0, 1.0, 1.0);
        let r = bound_t1(&p, &cfg);
        assert_eq!(r.status, CheckStatus::Skipped);
        assert_eq!(r.hypothesis.convex, Some(false));
        let r = bound_t3(&inst("x^2", "1", "x^2", 0.5, 0.0, 1.0, 1.0), &cfg);
        assert_eq!(r.status, CheckStatus::Skipped);
        assert!(r.message.unwrap().contains("h = x"));
    }

    #[test]
    fn nontrivial_slack() {
        let cfg = CheckConfig::default();
        let r = bound_t1(&inst("exp(x)", "x*(1 - x)", "x", 0.5, 0.0, 1.0, 1.0), &cfg);
        assert_eq!(r.status, CheckStatus::Pass);
        let r = bound_t3(&inst("x^4", "x*(1 - x)", "x", 0.5, 0.0, 1.0, 1.0), &cfg);
        assert_eq!(r.status, CheckStatus::Pass);
    }
}
