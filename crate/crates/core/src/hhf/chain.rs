//! Three-term Hermite–Hadamard chains `left <= middle <= right` for convex `f`.

use super::{timed, CheckConfig, CheckKind, CheckReport, HhfError, Hypotheses};
use crate::expr::{check_property, Expr, Property};
use crate::fracint::{frac_int_h, FracOrder, MonotoneMap, OperatorSpec, Side};
use crate::quad::{integrate_adaptive_with, AdaptiveConfig};
use crate::special::gamma;
use crate::Interval;

#[derive(Debug, Clone, PartialEq)]
pub enum ChainMode {
    /// `f(mid) <= mean of f <= (f(a) + f(b))/2`
    Classical,
    /// Weighted by a nonnegative `g` symmetric about the midpoint.
    Fejer(Expr),
    /// Middle term from the two Riemann–Liouville integrals of order α.
    Fractional(FracOrder),
}

impl ChainMode {
    pub fn check(&self) -> CheckKind {
        match self {
            ChainMode::Classical => CheckKind::HhClassical,
            ChainMode::Fejer(_) => CheckKind::HhFejer,
            ChainMode::Fractional(_) => CheckKind::HhFractional,
        }
    }
}

fn integral<F>(f: F, iv: &Interval, cfg: &CheckConfig) -> Result<f64, HhfError>
where
    F: FnMut(f64) -> Result<f64, crate::expr::EvalError>,
{
    let adaptive = AdaptiveConfig { abs_tol: 1e-13, rel_tol: 0.0, budget: cfg.budget };
    Ok(integrate_adaptive_with(f, iv.a(), iv.b(), &adaptive)?.value)
}

pub fn hh_chain(id: &str, f: &Expr, iv: &Interval, mode: &ChainMode, cfg: &CheckConfig) -> CheckReport {
    let description = match mode {
        ChainMode::Classical => format!("f = {f}, [a, b] = {iv}"),
        ChainMode::Fejer(g) => format!("f = {f}, g = {g}, [a, b] = {iv}"),
        ChainMode::Fractional(o) => format!("f = {f}, [a, b] = {iv}, alpha = {}", o.value()),
    };
    timed(id, mode.check(), description, |r| {
        r.tol = cfg.chain_tol();
        let convex = check_property(f, iv, Property::Convex)?;
        r.hypothesis = Hypotheses { convex: Some(convex.pass), ..Hypotheses::default() };
        if !convex.pass {
            r.piece("convexity_worst_margin", convex.worst_margin);
            r.piece("convexity_witness", convex.witness);
            r.skip(format!("f is not convex on {iv} (margin {} at x = {})", convex.worst_margin, convex.witness));
            return Ok(());
        }
        let (a, b) = (iv.a(), iv.b());
        let width = iv.width();
        let f_mid = f.eval(iv.midpoint())?;
        let f_ends = 0.5 * (f.eval(a)? + f.eval(b)?);
        let (left, middle, right) = match mode {
            ChainMode::Classical => (f_mid, integral(|x| f.eval(x), iv, cfg)? / width, f_ends),
            ChainMode::Fejer(g) => {
                let nonneg = check_property(g, iv, Property::Nonnegative)?;
                let symmetric = check_property(g, iv, Property::SymmetricAboutMidpoint)?;
                r.hypothesis.symmetric = Some(symmetric.pass);
                if !nonneg.pass || !symmetric.pass {
                    let which = if nonneg.pass { "symmetric about the midpoint" } else { "nonnegative" };
                    r.skip(format!("g is not {which} on {iv}"));
                    return Ok(());
                }
                let mean_g = integral(|x| g.eval(x), iv, cfg)? / width;
                r.piece("mean_g", mean_g);
                let mean_fg = integral(|x| Ok(f.eval(x)? * g.eval(x)?), iv, cfg)? / width;
                (f_mid * mean_g, mean_fg, f_ends * mean_g)
            }
            ChainMode::Fractional(order) => {
                if a < 0.0 {
                    r.skip(format!("the fractional chain needs 0 <= a, got a = {a}"));
                    return Ok(());
                }
                let alpha = order.value();
                let map = MonotoneMap::identity(*iv);
                let left_op = OperatorSpec::new(Side::Left, *order, a, b, map.clone())?;
                let right_op = OperatorSpec::new(Side::Right, *order, a, b, map)?;
                let ja = frac_int_h(&left_op, f, b)?;
                let jb = frac_int_h(&right_op, f, a)?;
                r.piece("j_a_plus_f", ja);
                r.piece("j_b_minus_f", jb);
                (f_mid, gamma(alpha + 1.0) / (2.0 * width.powf(alpha)) * (ja + jb), f_ends)
            }
        };
        let slack = (middle - left).min(right - middle);
        r.lhs = Some(left);
        r.middle = Some(middle);
        r.rhs = Some(right);
        r.slack = Some(slack);
        r.set_pass(slack >= -r.tol);
        Ok(())
    })
}
