//! Pointwise evaluation of the two identity kernels.

use serde::{Deserialize, Serialize};

use super::{HhfError, ProblemInstance};
use crate::fracint::{frac_int_h_fn, FracError, FracOrder, OperatorSpec, Side};
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub which: KernelKind,
    pub instance: ProblemInstance,
}

impl KernelSpec {
    pub fn eval(&self, t: f64) -> Result<f64, HhfError> {
        match self.which {
            KernelKind::First => kernel_l1(&self.instance, t),
            KernelKind::Second => kernel_l2(&self.instance, t),
        }
    }
}

/// `(1/Γ(order)) ∫_lo^hi kernel · g h'` for the operator of `side` evaluated at `at`.
fn op(inst: &ProblemInstance, side: Side, order: FracOrder, lo: f64, hi: f64, at: f64) -> Result<f64, HhfError> {
    let spec = OperatorSpec::new(side, order, lo, hi, inst.map().clone())?;
    Ok(frac_int_h_fn(&spec, |s| inst.g().eval(s), at)?)
}

fn check_t(inst: &ProblemInstance, t: f64) -> Result<(), HhfError> {
    let iv = inst.interval();
    if iv.contains(t) {
        Ok(())
    } else {
        Err(FracError::OutsideInterval { point: t, interval: iv }.into())
    }
}

/// Kernel of the first identity: `∫_a^t (h(s)-h(a))^(α-1) g h' ds` up to the midpoint,
/// `∫_b^t (h(b)-h(s))^(α-1) g h' ds` (negative) after it.
pub fn kernel_l1(inst: &ProblemInstance, t: f64) -> Result<f64, HhfError> {
    check_t(inst, t)?;
    let iv = inst.interval();
    let (a, b) = (iv.a(), iv.b());
    let order = inst.order();
    let scale = gamma(order.value());
    if t <= iv.midpoint() {
        Ok(scale * op(inst, Side::Right, order, a, t, a)?)
    } else {
        Ok(-scale * op(inst, Side::Left, order, t, b, b)?)
    }
}

/// Kernel of the second identity, with branch integrand
/// `(h(b)-h(a))^(α-1) - (h(b)-h(s))^(α-1) + (h(s)-h(a))^(α-1)` on the left half and
/// `(h(b)-h(s))^(α-1) - (h(s)-h(a))^(α-1) + (h(b)-h(a))^(α-1)` on the right.
pub fn kernel_l2(inst: &ProblemInstance, t: f64) -> Result<f64, HhfError> {
    check_t(inst, t)?;
    let iv = inst.interval();
    let (a, b) = (iv.a(), iv.b());
    let order = inst.order();
    let alpha = order.value();
    let scale = gamma(alpha);
    let (ha, hb) = inst.map().range();
    let hpow = (hb - ha).powf(alpha - 1.0);
    let one = FracOrder::new(1.0)?;
    if t <= iv.midpoint() {
        let plain = op(inst, Side::Left, one, a, t, t)?;
        Ok(hpow * plain - scale * op(inst, Side::Left, order, a, t, b)?
            + scale * op(inst, Side::Right, order, a, t, a)?)
    } else {
        let plain = op(inst, Side::Right, one, t, b, t)?;
        Ok(-(scale * op(inst, Side::Left, order, t, b, b)? - scale * op(inst, Side::Right, order, t, b, a)?
            + hpow * plain))
    }
}
