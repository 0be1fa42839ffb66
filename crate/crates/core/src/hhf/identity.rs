//! Both sides of the two midpoint identities.
//!
//! Left sides are assembled from operator values. Right sides are computed in `u = h(t)`,
//! where each kernel branch is a running integral of `κ(s) G(s)` with `G = g ∘ h^{-1}`; it
//! is accumulated node by node along the outer rule, so the two sides share no quadrature.

use super::{timed, CheckConfig, CheckKind, CheckReport, HhfError, Hypotheses, ProblemInstance};
use crate::expr::EvalError;
use crate::fracint::{FracOrder, OperatorNodes, OperatorSpec, Side};
use crate::quad::{gauss_legendre_rule, GradedRule};
use crate::special::gamma;

/// Left side pieces of the first identity. All operator values include `1/Γ(α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIdentitySides {
    /// `f(h(mid))`
    pub f_mid: f64,
    /// Right-sided operator on `[a, mid]` at `a`, applied to `g` and to `g·(f∘h)`.
    pub j_mid_minus_g: f64,
    pub j_mid_minus_gf: f64,
    /// Left-sided operator on `[mid, b]` at `b`.
    pub j_mid_plus_g: f64,
    pub j_mid_plus_gf: f64,
    pub lhs: f64,
}

impl FirstIdentitySides {
    pub fn compute(inst: &ProblemInstance) -> Result<Self, HhfError> {
        let iv = inst.interval();
        let (a, m, b) = (iv.a(), iv.midpoint(), iv.b());
        let f_mid = inst.f().eval(inst.map().eval(m)?)?;
        let right = nodes(inst, Side::Right, inst.order(), a, m, a)?;
        let left = nodes(inst, Side::Left, inst.order(), m, b, b)?;
        let (j_mid_minus_g, j_mid_minus_gf) = apply_pair(inst, &right)?;
        let (j_mid_plus_g, j_mid_plus_gf) = apply_pair(inst, &left)?;
        let lhs = f_mid * (j_mid_minus_g + j_mid_plus_g) - (j_mid_minus_gf + j_mid_plus_gf);
        Ok(Self { f_mid, j_mid_minus_g, j_mid_minus_gf, j_mid_plus_g, j_mid_plus_gf, lhs })
    }

    fn record(&self, r: &mut CheckReport) {
        r.piece("f_mid", self.f_mid);
        r.piece("j_mid_minus_g", self.j_mid_minus_g);
        r.piece("j_mid_minus_gf", self.j_mid_minus_gf);
        r.piece("j_mid_plus_g", self.j_mid_plus_g);
        r.piece("j_mid_plus_gf", self.j_mid_plus_gf);
    }
}

/// Left side of the second identity in consolidated form `f(h(mid))·C - D`, with the
/// operator pieces it is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondIdentitySides {
    pub f_mid: f64,
    /// `(1/Γ(α)) ∫ κ g h'` over `[a, b]`
    pub c: f64,
    /// `(1/Γ(α)) ∫ κ g (f∘h) h'` over `[a, b]`
    pub d: f64,
    pub lhs: f64,
    /// The operator reading of the same quantity with full-interval operators.
    pub printed_form_lhs: f64,
    pub pieces: Vec<(&'static str, f64)>,
}

impl SecondIdentitySides {
    pub fn compute(inst: &ProblemInstance) -> Result<Self, HhfError> {
        let iv = inst.interval();
        let (a, m, b) = (iv.a(), iv.midpoint(), iv.b());
        let order = inst.order();
        let alpha = order.value();
        let one = FracOrder::new(1.0)?;
        let (ha, hb) = inst.map().range();
        let corr = (hb - ha).powf(alpha - 1.0) / gamma(alpha);
        let f_mid = inst.f().eval(inst.map().eval(m)?)?;

        let (mid_minus_g, mid_minus_gf) = apply_pair(inst, &nodes(inst, Side::Right, order, a, m, a)?)?;
        let (a_plus_half_g, a_plus_half_gf) = apply_pair(inst, &nodes(inst, Side::Left, order, a, m, b)?)?;
        let (plain_left_g, plain_left_gf) = apply_pair(inst, &nodes(inst, Side::Left, one, a, m, m)?)?;
        let (mid_plus_g, mid_plus_gf) = apply_pair(inst, &nodes(inst, Side::Left, order, m, b, b)?)?;
        let (b_minus_half_g, b_minus_half_gf) = apply_pair(inst, &nodes(inst, Side::Right, order, m, b, a)?)?;
        let (plain_right_g, plain_right_gf) = apply_pair(inst, &nodes(inst, Side::Right, one, m, b, m)?)?;
        let (a_plus_g, a_plus_gf) = apply_pair(inst, &nodes(inst, Side::Left, order, a, b, b)?)?;
        let (b_minus_g, b_minus_gf) = apply_pair(inst, &nodes(inst, Side::Right, order, a, b, a)?)?;

        let c = mid_minus_g - a_plus_half_g + corr * plain_left_g + mid_plus_g - b_minus_half_g + corr * plain_right_g;
        let d = mid_minus_gf - a_plus_half_gf + corr * plain_left_gf + mid_plus_gf - b_minus_half_gf
            + corr * plain_right_gf;
        let lhs = f_mid * c - d;
        let printed_form_lhs = f_mid
            * (-a_plus_g - b_minus_g + mid_plus_g + mid_minus_g + corr * (plain_left_g + plain_right_g))
            + a_plus_gf
            + b_minus_gf
            - mid_plus_gf
            - mid_minus_gf
            - corr * (plain_left_gf + plain_right_gf);
        let pieces = vec![
            ("f_mid", f_mid),
            ("c", c),
            ("d", d),
            ("j_mid_minus_g", mid_minus_g),
            ("j_mid_minus_gf", mid_minus_gf),
            ("j_mid_plus_g", mid_plus_g),
            ("j_mid_plus_gf", mid_plus_gf),
            ("j_a_plus_half_g", a_plus_half_g),
            ("j_a_plus_half_gf", a_plus_half_gf),
            ("j_b_minus_half_g", b_minus_half_g),
            ("j_b_minus_half_gf", b_minus_half_gf),
            ("j_a_plus_g", a_plus_g),
            ("j_a_plus_gf", a_plus_gf),
            ("j_b_minus_g", b_minus_g),
            ("j_b_minus_gf", b_minus_gf),
            ("correction_g", corr * (plain_left_g + plain_right_g)),
            ("correction_gf", corr * (plain_left_gf + plain_right_gf)),
            ("printed_form_lhs", printed_form_lhs),
        ];
        Ok(Self { f_mid, c, d, lhs, printed_form_lhs, pieces })
    }
}

fn nodes(
    inst: &ProblemInstance,
    side: Side,
    order: FracOrder,
    lo: f64,
    hi: f64,
    at: f64,
) -> Result<OperatorNodes, HhfError> {
    let spec = OperatorSpec::new(side, order, lo, hi, inst.map().clone())?;
    Ok(spec.nodes(at)?)
}

/// Applies `nodes` to `g` and to `g·(f∘h)`.
fn apply_pair(inst: &ProblemInstance, nodes: &OperatorNodes) -> Result<(f64, f64), HhfError> {
    let (g, f, map) = (inst.g(), inst.f(), inst.map());
    let plain = nodes.apply(|t| g.eval(t))?;
    let with_f = nodes.apply(|t| Ok(g.eval(t)? * f.eval(map.eval(t)?)?))?;
    Ok((plain, with_f))
}

/// `(1/Γ(α)) ∫_a^b k(t) f'(h(t)) h'(t) dt` for the first (`second = false`) or second kernel.
pub(crate) fn identity_rhs(inst: &ProblemInstance, second: bool) -> Result<f64, HhfError> {
    let iv = inst.interval();
    let map = inst.map();
    let (ha, hb) = map.range();
    let hm = map.eval(iv.midpoint())?;
    let left = branch(inst, ha, 1.0, hm - ha, hb - ha, second)?;
    let right = branch(inst, hb, -1.0, hb - hm, hb - ha, second)?;
    Ok((left - right) / gamma(inst.alpha()))
}

/// `∫_0^Δ K(d) f'(u0 + dir·d) dd` with `K(d) = ∫_0^d κ(s) G(u0 + dir·s) ds` and
/// `κ(s) = s^(α-1) + [H^(α-1) - (H-s)^(α-1)]` (bracket only for the second kernel).
fn branch(inst: &ProblemInstance, u0: f64, dir: f64, delta: f64, span: f64, second: bool) -> Result<f64, HhfError> {
    if delta.is_nan() || delta <= 0.0 {
        return Ok(0.0);
    }
    let alpha = inst.alpha();
    let am1 = alpha - 1.0;
    let (g, fp, map) = (inst.g(), inst.f_prime(), inst.map());
    let weight = |s: f64| -> Result<f64, EvalError> { g.eval(map.inverse(u0 + dir * s)?) };
    let smooth = |s: f64| if second { span.powf(am1) - (span - s).powf(am1) } else { 0.0 };
    let kappa = |s: f64| s.powf(am1) + smooth(s);
    let gl = gauss_legendre_rule(15)?;

    let mut outer = GradedRule::new(1.0).nodes(delta)?;
    outer.sort_by(|x, y| x.0.total_cmp(&y.0));
    let first = outer[0].0;
    let mut cum = 0.0;
    for (s, w) in GradedRule::new(alpha).nodes(first)? {
        cum += w * weight(s)?;
    }
    if second {
        for (x, w) in gl.iter() {
            let s = 0.5 * first * (1.0 + x);
            cum += 0.5 * first * w * smooth(s) * weight(s)?;
        }
    }
    let mut total = 0.0;
    let mut prev = first;
    for (d, w) in outer {
        if d > prev {
            let (c, r) = (0.5 * (prev + d), 0.5 * (d - prev));
            for (x, wx) in gl.iter() {
                let s = c + r * x;
                cum += r * wx * kappa(s) * weight(s)?;
            }
            prev = d;
        }
        total += w * cum * fp.eval(u0 + dir * d)?;
    }
    Ok(total)
}

fn identity_report(inst: &ProblemInstance, cfg: &CheckConfig, check: CheckKind) -> CheckReport {
    timed(&inst.id, check, inst.description(), |r| {
        r.hypothesis = Hypotheses { convex: None, symmetric: None, monotone_h: Some(inst.map().report().pass) };
        let lhs = match check {
            CheckKind::IdentityL1 => {
                let sides = FirstIdentitySides::compute(inst)?;
                sides.record(r);
                sides.lhs
            }
            _ => {
                let sides = SecondIdentitySides::compute(inst)?;
                for (k, v) in &sides.pieces {
                    r.piece(k, *v);
                }
                sides.lhs
            }
        };
        let rhs = identity_rhs(inst, check == CheckKind::IdentityL2)?;
        let residual = (lhs - rhs).abs();
        r.lhs = Some(lhs);
        r.rhs = Some(rhs);
        r.residual = Some(residual);
        r.tol = cfg.identity_tol(lhs);
        r.set_pass(residual <= r.tol);
        Ok(())
    })
}

/// Checks the first identity: operator left side against the kernel integral.
pub fn identity_l1(inst: &ProblemInstance, cfg: &CheckConfig) -> CheckReport {
    identity_report(inst, cfg, CheckKind::IdentityL1)
}

/// Checks the second identity in consolidated form.
pub fn identity_l2(inst: &ProblemInstance, cfg: &CheckConfig) -> CheckReport {
    identity_report(inst, cfg, CheckKind::IdentityL2)
}
