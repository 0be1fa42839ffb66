use crate::expr::{EvalError, Expr};
use crate::quad::integrate_adaptive;
use crate::Interval;

use super::{FracError, MonotoneMap};

const SUP_GRID: usize = 4097;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    /// `f64::INFINITY` for sup norms.
    pub p: f64,
    pub interval: Interval,
    /// For sup norms: where the maximum was found and on how many grid points.
    pub worst_point: Option<f64>,
    pub grid_points: Option<usize>,
}

/// `(∫_iv |f|^p h' dt)^(1/p)`, computed with the adaptive integrator.
pub fn xhp_norm(f: &Expr, map: &MonotoneMap, p: f64, iv: &Interval) -> Result<NormResult, FracError> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(FracError::InvalidExponent { p });
    }
    map.check_point(iv.a())?;
    map.check_point(iv.b())?;
    let r = integrate_adaptive(|t| Ok(f.eval(t)?.abs().powf(p) * map.derivative(t)?), iv, 1e-11)?;
    Ok(NormResult { value: r.value.max(0.0).powf(1.0 / p), p, interval: *iv, worst_point: None, grid_points: None })
}

/// Plain `sup_iv |f|`.
pub fn xh_sup_norm(f: &Expr, iv: &Interval) -> Result<NormResult, FracError> {
    sup_abs(|t| f.eval(t), iv)
}

/// `sup_iv |f(t)| h'(t)`, the weighted variant of the sup norm.
pub fn xh_weighted_sup_norm(f: &Expr, map: &MonotoneMap, iv: &Interval) -> Result<NormResult, FracError> {
    sup_abs(|t| Ok(f.eval(t)? * map.derivative(t)?), iv)
}

pub(crate) fn sup_abs<F>(mut f: F, iv: &Interval) -> Result<NormResult, FracError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let n = SUP_GRID;
    let step = iv.width() / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { iv.b() } else { iv.a() + i as f64 * step }).collect();
    let mut vals = Vec::with_capacity(n);
    for &x in &xs {
        vals.push(f(x)?.abs());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
    let (mut best, mut at) = (vals[order[0]], xs[order[0]]);
    for &i in order.iter().take(3) {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(n - 1)];
        let (v, x) = golden_max(&mut f, lo, hi)?;
        if v > best {
            best = v;
            at = x;
        }
    }
    Ok(NormResult { value: best, p: f64::INFINITY, interval: *iv, worst_point: Some(at), grid_points: Some(n) })
}

fn golden_max<F>(f: &mut F, mut lo: f64, mut hi: f64) -> Result<(f64, f64), EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1)?.abs();
    let mut f2 = f(x2)?.abs();
    for _ in 0..60 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1)?.abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2)?.abs();
        }
    }
    Ok(if f1 >= f2 { (f1, x1) } else { (f2, x2) })
}
